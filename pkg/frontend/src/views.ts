// Pure HTML renderers: state in, markup out. Keeping these free of fetch and
// DOM wiring makes the no-unrevealed-hints guarantee directly testable on
// the rendered output.

import { QuizFlow, RatingFlow, FlowError } from './flows.js';
import { RATING_ATTRIBUTES } from './ratingForm.js';
import { visibleHints } from './quiz.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

function errorBanner(error: FlowError | null): string {
  if (!error) {
    return '';
  }
  const label = error.code === 'protocol_violation' ? 'Protocol violation' : 'Error';
  return `<div class="error-banner" role="alert">${label}: ${escapeHtml(error.message)}</div>`;
}

const OUTCOME_TEXT: Record<string, string> = {
  correct: 'Correct! Moving on to the next question.',
  'try-next-hint': 'Not quite — reveal the next hint and try again.',
  skipped: 'Question skipped.',
};

export function renderRatingView(flow: RatingFlow): string {
  if (flow.done) {
    return '<section class="rating done"><h2>All hints rated. Thank you!</h2></section>';
  }
  const rows = RATING_ATTRIBUTES.map((name, i) => {
    const value = flow.form.ratings[name];
    const focused = i === flow.form.focusedAttribute ? ' focused' : '';
    const buttons = [1, 2, 3, 4, 5]
      .map(
        (v) =>
          `<button data-rate="${name}:${v}"${value === v ? ' aria-pressed="true"' : ''}>${v}</button>`,
      )
      .join('');
    return `<div class="attribute${focused}" data-attribute="${name}"><label>${name}</label>${buttons}</div>`;
  }).join('');
  const answerLine =
    flow.answer === null ? '' : `<p class="answer">Answer: ${escapeHtml(flow.answer)}</p>`;
  return `
<section class="rating">
  ${errorBanner(flow.error)}
  <p class="progress">Hint ${flow.hintIdx + 1} of ${flow.nHints} (${flow.ratedCount} rated)</p>
  <h2>${escapeHtml(flow.question)}</h2>
  ${answerLine}
  <blockquote class="hint">${escapeHtml(flow.hintText)}</blockquote>
  ${rows}
  <div class="flags">
    <label><input type="checkbox" data-flag="google"${flow.form.googleFound ? ' checked' : ''}> found via Google</label>
    <label><input type="checkbox" data-flag="bing"${flow.form.bingFound ? ' checked' : ''}> found via Bing</label>
  </div>
  <button data-action="submit"${flow.canSubmit() ? '' : ' disabled'}>Submit ratings</button>
</section>`;
}

export function renderQuizView(flow: QuizFlow): string {
  const state = flow.state;
  if (state.done) {
    return '<section class="quiz done"><h2>Session finished. Thank you!</h2></section>';
  }
  const hints = visibleHints(state)
    .map((text, i) => `<li class="hint" data-hint="${i}">${escapeHtml(text)}</li>`)
    .join('');
  const outcome =
    state.outcome === 'none'
      ? ''
      : `<div class="outcome ${state.outcome}">${OUTCOME_TEXT[state.outcome]}</div>`;
  return `
<section class="quiz">
  ${errorBanner(flow.error)}
  <h2>${escapeHtml(state.question)}</h2>
  <ol class="hints">${hints}</ol>
  ${outcome}
  <input type="text" data-input="attempt" value="${escapeHtml(state.attemptInput)}" placeholder="Your answer">
  <button data-action="attempt">Submit answer</button>
  <button data-action="reveal"${state.canReveal ? '' : ' disabled'}>Reveal hint ${state.revealedHints.length + 1} of ${state.nHints}</button>
  <button data-action="skip"${state.canSkip ? '' : ' disabled'}>Skip question</button>
</section>`;
}
