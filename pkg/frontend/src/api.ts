// Typed client for the annotation service's /v1 JSON API.
// The base URL is the only configuration; everything else comes from the server.

export type Phase = 'RateAttributes' | 'AnswerWithHints';

export interface SessionInfo {
  session_id: string;
  annotator_id: string;
  phase: Phase;
  n_questions: number;
}

export interface RatingQuestion {
  done: false;
  q_id: string;
  question: string;
  n_hints: number;
  phase: 'RateAttributes';
  hint_to_rate: number;
  hint_text: string;
  rated_count: number;
  answer?: string;
}

export interface QuizQuestion {
  done: false;
  q_id: string;
  question: string;
  n_hints: number;
  phase: 'AnswerWithHints';
  revealed_hint_count: number;
  revealed_hints: string[];
  attempted_at_current: boolean;
  can_reveal: boolean;
  can_skip: boolean;
}

export type NextQuestion = { done: true } | RatingQuestion | QuizQuestion;

export interface AttemptResult {
  correct: boolean;
  revealed_hint_count: number;
  answered_before_hints: boolean;
}

export interface RevealResult {
  hint_index: number;
  text: string;
  revealed_hint_count: number;
}

export interface RatingsPayload {
  relevance: number;
  readability: number;
  ambiguity: number;
  convergence: number;
  familiarity: number;
  google_found: boolean;
  bing_found: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) {
    return;
  }
  let code = 'error';
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    } else if (body && body.detail) {
      // Body-validation failures arrive in the framework's own shape.
      code = 'invalid_body';
      message = JSON.stringify(body.detail);
    }
  } catch {
    // Non-JSON error body; keep the status line.
  }
  throw new ApiError(response.status, code, message);
}

export class AnnotationApi {
  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}/v1${path}`, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    await raiseForStatus(response);
    return (await response.json()) as T;
  }

  createSession(annotatorId: string, phase?: Phase, qIds?: string[]): Promise<SessionInfo> {
    return this.request<SessionInfo>('POST', '/sessions', {
      annotator_id: annotatorId,
      phase: phase ?? null,
      q_ids: qIds ?? null,
    });
  }

  nextQuestion(sessionId: string): Promise<NextQuestion> {
    return this.request<NextQuestion>('GET', `/sessions/${sessionId}/next-question`);
  }

  attempt(sessionId: string, qId: string, answer: string): Promise<AttemptResult> {
    return this.request<AttemptResult>(
      'POST',
      `/sessions/${sessionId}/questions/${qId}/attempt`,
      { answer },
    );
  }

  reveal(sessionId: string, qId: string): Promise<RevealResult> {
    return this.request<RevealResult>('POST', `/sessions/${sessionId}/questions/${qId}/reveal`);
  }

  submitRatings(
    sessionId: string,
    qId: string,
    hintIdx: number,
    ratings: RatingsPayload,
  ): Promise<{ q_id: string; hint_idx: number; accepted: boolean }> {
    return this.request('POST', `/sessions/${sessionId}/questions/${qId}/hints/${hintIdx}/ratings`, ratings);
  }

  skip(sessionId: string, qId: string): Promise<{ q_id: string; skipped: boolean }> {
    return this.request('POST', `/sessions/${sessionId}/questions/${qId}/skip`);
  }

  async exportRatings(): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/v1/export/ratings.jsonl`, {
      method: 'GET',
    });
    await raiseForStatus(response);
    return response.text();
  }
}
