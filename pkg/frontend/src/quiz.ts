// State for the phase-2 quiz: answer first, then hints one at a time.
// Every field mirrors what the server has confirmed; the view renders only
// hints that appear in `revealedHints`, so nothing unrevealed can leak out.

import { QuizQuestion } from './api.js';

export type QuizOutcome = 'none' | 'correct' | 'try-next-hint' | 'skipped';

export interface QuizState {
  done: boolean;
  qId: string;
  question: string;
  nHints: number;
  revealedHints: string[];
  attemptInput: string;
  attemptedAtCurrent: boolean;
  canReveal: boolean;
  canSkip: boolean;
  outcome: QuizOutcome;
}

export function createQuizState(): QuizState {
  return {
    done: false,
    qId: '',
    question: '',
    nHints: 0,
    revealedHints: [],
    attemptInput: '',
    attemptedAtCurrent: false,
    canReveal: false,
    canSkip: false,
    outcome: 'none',
  };
}

// Server payloads are authoritative: reconcile the whole state from them.
export function applyNextQuestion(state: QuizState, payload: { done: true } | QuizQuestion): void {
  if (payload.done) {
    state.done = true;
    state.canReveal = false;
    state.canSkip = false;
    return;
  }
  const sameQuestion = payload.q_id === state.qId;
  state.done = false;
  state.qId = payload.q_id;
  state.question = payload.question;
  state.nHints = payload.n_hints;
  state.revealedHints = [...payload.revealed_hints];
  state.attemptedAtCurrent = payload.attempted_at_current;
  state.canReveal = payload.can_reveal;
  state.canSkip = payload.can_skip;
  if (!sameQuestion) {
    state.attemptInput = '';
    state.outcome = 'none';
  }
}

export function recordAttempt(state: QuizState, correct: boolean): void {
  state.attemptedAtCurrent = true;
  state.outcome = correct ? 'correct' : 'try-next-hint';
  if (!correct) {
    state.canReveal = state.revealedHints.length < state.nHints;
    state.canSkip = state.revealedHints.length === state.nHints;
  }
}

// Only called with a hint the server actually returned from a reveal.
export function recordReveal(state: QuizState, hintIndex: number, text: string): void {
  if (hintIndex !== state.revealedHints.length) {
    throw new Error(`reveal out of order: got hint ${hintIndex}, have ${state.revealedHints.length}`);
  }
  state.revealedHints.push(text);
  state.attemptedAtCurrent = false;
  state.canReveal = false;
  state.canSkip = false;
  state.outcome = 'none';
}

export function recordSkip(state: QuizState): void {
  state.outcome = 'skipped';
  state.canReveal = false;
  state.canSkip = false;
}

// The one list the view may draw hints from.
export function visibleHints(state: QuizState): readonly string[] {
  return state.revealedHints;
}
