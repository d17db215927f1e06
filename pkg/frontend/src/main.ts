// Browser bootstrap: mounts either flow into #app and wires DOM events to
// the controllers. All protocol logic lives in flows.ts; this file only
// translates clicks and keys into controller calls and re-renders.

import { AnnotationApi } from './api.js';
import { QuizFlow, RatingFlow, startQuizFlow, startRatingFlow } from './flows.js';
import { applyDigitKey, focusAttribute, setFlag, setRating, RatingAttribute } from './ratingForm.js';
import { renderQuizView, renderRatingView } from './views.js';

export interface MountOptions {
  baseUrl: string;
  annotatorId: string;
  phase: 'RateAttributes' | 'AnswerWithHints';
  qIds?: string[];
}

export async function mount(root: HTMLElement, options: MountOptions): Promise<void> {
  const api = new AnnotationApi(options.baseUrl);
  if (options.phase === 'RateAttributes') {
    const flow = await startRatingFlow(api, options.annotatorId, options.qIds);
    mountRating(root, flow);
  } else {
    const flow = await startQuizFlow(api, options.annotatorId, options.qIds);
    mountQuiz(root, flow);
  }
}

function mountRating(root: HTMLElement, flow: RatingFlow): void {
  const redraw = () => {
    root.innerHTML = renderRatingView(flow);
  };
  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const rate = target.dataset['rate'];
    if (rate) {
      const [name, value] = rate.split(':');
      setRating(flow.form, name as RatingAttribute, Number(value));
      redraw();
      return;
    }
    const attribute = target.closest<HTMLElement>('[data-attribute]');
    if (attribute) {
      const names = ['relevance', 'readability', 'ambiguity', 'convergence', 'familiarity'];
      focusAttribute(flow.form, names.indexOf(attribute.dataset['attribute'] ?? ''));
      redraw();
      return;
    }
    if (target.dataset['action'] === 'submit') {
      void flow.submit().then(redraw);
    }
  });
  root.addEventListener('change', (event) => {
    const target = event.target as HTMLInputElement;
    const flag = target.dataset['flag'];
    if (flag === 'google' || flag === 'bing') {
      setFlag(flow.form, flag, target.checked);
    }
  });
  // Keyboard-first entry: digits rate the focused attribute and advance.
  document.addEventListener('keydown', (event) => {
    if (event.target instanceof HTMLInputElement) {
      return;
    }
    if (applyDigitKey(flow.form, event.key)) {
      redraw();
    } else if (event.key === 'Enter') {
      void flow.submit().then(redraw);
    }
  });
  redraw();
}

function mountQuiz(root: HTMLElement, flow: QuizFlow): void {
  const redraw = () => {
    root.innerHTML = renderQuizView(flow);
  };
  root.addEventListener('input', (event) => {
    const target = event.target as HTMLInputElement;
    if (target.dataset['input'] === 'attempt') {
      flow.state.attemptInput = target.value;
    }
  });
  root.addEventListener('click', (event) => {
    const action = (event.target as HTMLElement).dataset['action'];
    if (action === 'attempt') {
      void flow.attempt().then(redraw);
    } else if (action === 'reveal') {
      void flow.reveal().then(redraw);
    } else if (action === 'skip') {
      void flow.skip().then(redraw);
    }
  });
  root.addEventListener('keydown', (event) => {
    if ((event as KeyboardEvent).key === 'Enter') {
      void flow.attempt().then(redraw);
    }
  });
  redraw();
}

// Auto-mount when loaded as the page script; parameters come from the URL,
// e.g. index.html?annotator=a1&phase=AnswerWithHints&base=http://localhost:8000
if (typeof document !== 'undefined') {
  const root = document.getElementById('app');
  if (root) {
    const params = new URLSearchParams(window.location.search);
    void mount(root, {
      baseUrl: params.get('base') ?? window.location.origin,
      annotatorId: params.get('annotator') ?? 'anonymous',
      phase: params.get('phase') === 'RateAttributes' ? 'RateAttributes' : 'AnswerWithHints',
      qIds: params.get('q_ids')?.split(',') ?? undefined,
    });
  }
}
