// Flow controllers: glue between the API client and the state machines.
// Every user action goes through an ActionGate so double-clicks reuse the
// in-flight request instead of issuing a second one; state mutations happen
// inside the gated function, so a shared action applies exactly once.

import { AnnotationApi, ApiError, SessionInfo } from './api.js';
import {
  createQuizState,
  applyNextQuestion,
  recordAttempt,
  recordReveal,
  recordSkip,
  QuizState,
} from './quiz.js';
import {
  createRatingForm,
  isComplete,
  toPayload,
  RatingFormState,
} from './ratingForm.js';

export class ActionGate {
  private pending = new Map<string, Promise<unknown>>();

  // Runs fn once per key; concurrent calls with the same key share the result.
  run<T>(key: string, fn: () => Promise<T>): Promise<T> {
    const inFlight = this.pending.get(key);
    if (inFlight) {
      return inFlight as Promise<T>;
    }
    const promise = fn().finally(() => {
      this.pending.delete(key);
    });
    this.pending.set(key, promise);
    return promise;
  }

  isPending(key: string): boolean {
    return this.pending.has(key);
  }
}

export interface FlowError {
  code: string;
  message: string;
}

abstract class BaseFlow {
  error: FlowError | null = null;
  protected gate = new ActionGate();

  constructor(
    protected api: AnnotationApi,
    public session: SessionInfo,
  ) {}

  // API failures become an inline error; local state is deliberately left
  // untouched so the user can retry. Anything else propagates.
  protected async guarded<T>(key: string, fn: () => Promise<T>): Promise<T | null> {
    this.error = null;
    try {
      return await this.gate.run(key, fn);
    } catch (err) {
      if (err instanceof ApiError) {
        this.error = { code: err.code, message: err.message };
        return null;
      }
      throw err;
    }
  }
}

export class RatingFlow extends BaseFlow {
  done = false;
  qId = '';
  question = '';
  nHints = 0;
  hintIdx = 0;
  hintText = '';
  ratedCount = 0;
  answer: string | null = null;
  form: RatingFormState = createRatingForm();

  private async sync(): Promise<void> {
    const payload = await this.api.nextQuestion(this.session.session_id);
    if (payload.done) {
      this.done = true;
      return;
    }
    if (payload.phase !== 'RateAttributes') {
      throw new Error(`rating flow got a ${payload.phase} session`);
    }
    const sameHint = payload.q_id === this.qId && payload.hint_to_rate === this.hintIdx;
    this.qId = payload.q_id;
    this.question = payload.question;
    this.nHints = payload.n_hints;
    this.hintIdx = payload.hint_to_rate;
    this.hintText = payload.hint_text;
    this.ratedCount = payload.rated_count;
    this.answer = payload.answer ?? null;
    if (!sameHint) {
      this.form = createRatingForm();
    }
  }

  async load(): Promise<void> {
    await this.guarded('load', () => this.sync());
  }

  canSubmit(): boolean {
    return !this.done && isComplete(this.form);
  }

  // A no-op while any of the five attributes is unset (the button is
  // disabled for the same reason); on success the next hint is loaded with a
  // fresh form, on an API error the form survives for retry.
  async submit(): Promise<boolean> {
    if (!this.canSubmit()) {
      return false;
    }
    const payload = toPayload(this.form);
    const result = await this.guarded('submit', async () => {
      const accepted = await this.api.submitRatings(
        this.session.session_id,
        this.qId,
        this.hintIdx,
        payload,
      );
      await this.sync();
      return accepted;
    });
    return result !== null;
  }
}

export class QuizFlow extends BaseFlow {
  state: QuizState = createQuizState();

  private async sync(keepOutcome = false): Promise<void> {
    const payload = await this.api.nextQuestion(this.session.session_id);
    if (!payload.done && payload.phase !== 'AnswerWithHints') {
      throw new Error(`quiz flow got a ${payload.phase} session`);
    }
    const banner = this.state.outcome;
    applyNextQuestion(this.state, payload as Parameters<typeof applyNextQuestion>[1]);
    if (keepOutcome) {
      this.state.outcome = banner;
    }
  }

  async load(): Promise<void> {
    await this.guarded('load', () => this.sync());
  }

  async attempt(): Promise<void> {
    const answer = this.state.attemptInput;
    await this.guarded('attempt', async () => {
      const result = await this.api.attempt(this.session.session_id, this.state.qId, answer);
      recordAttempt(this.state, result.correct);
      if (result.correct) {
        // The server already advanced its queue; pick up the next question
        // while keeping the success banner visible.
        await this.sync(true);
      }
      return result;
    });
  }

  // The button is disabled unless the server said a reveal is legal; this
  // guard keeps even a programmatic call from going around the protocol.
  async reveal(): Promise<void> {
    if (!this.state.canReveal) {
      return;
    }
    await this.guarded('reveal', async () => {
      const result = await this.api.reveal(this.session.session_id, this.state.qId);
      recordReveal(this.state, result.hint_index, result.text);
      return result;
    });
  }

  async skip(): Promise<void> {
    if (!this.state.canSkip) {
      return;
    }
    await this.guarded('skip', async () => {
      const result = await this.api.skip(this.session.session_id, this.state.qId);
      recordSkip(this.state);
      await this.sync(true);
      return result;
    });
  }
}

export async function startRatingFlow(
  api: AnnotationApi,
  annotatorId: string,
  qIds?: string[],
): Promise<RatingFlow> {
  const session = await api.createSession(annotatorId, 'RateAttributes', qIds);
  const flow = new RatingFlow(api, session);
  await flow.load();
  return flow;
}

export async function startQuizFlow(
  api: AnnotationApi,
  annotatorId: string,
  qIds?: string[],
): Promise<QuizFlow> {
  const session = await api.createSession(annotatorId, 'AnswerWithHints', qIds);
  const flow = new QuizFlow(api, session);
  await flow.load();
  return flow;
}
