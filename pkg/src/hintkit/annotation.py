"""Annotation service for the two-phase human evaluation.

Phase 1 (RateAttributes): annotators rate each hint on five attributes plus
two search-engine flags, one hint at a time. Phase 2 (AnswerWithHints):
annotators attempt the answer, revealing hints one by one; hint k+1 is never
revealed before an incorrect or blank attempt at hint count k.

State is event-sourced: every mutation is validated, appended to an
append-only log, then applied. Replaying the log rebuilds identical state,
and the dataset itself is never mutated.

No ``from __future__ import annotations`` here: the HTTP layer's request
models are function-local, so their annotations must evaluate eagerly for
the framework to see them as body parameters.
"""

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .analytics import RATING_ATTRIBUTES
from .errors import (
    ProtocolViolationError,
    UnknownResourceError,
    ValidationError,
)
from .hints import answers_match
from .model import QuestionRecord


class Phase(str, Enum):
    RATE_ATTRIBUTES = "RateAttributes"
    ANSWER_WITH_HINTS = "AnswerWithHints"


@dataclass(frozen=True)
class HintRatings:
    relevance: int
    readability: int
    ambiguity: int
    convergence: int
    familiarity: int
    google_found: bool
    bing_found: bool

    def __post_init__(self):
        for name in RATING_ATTRIBUTES:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 5:
                raise ValidationError(name, f"rating must be an integer in 1..5, got {value!r}")
        for name in ("google_found", "bing_found"):
            if not isinstance(getattr(self, name), bool):
                raise ValidationError(name, "must be a boolean")

    def to_dict(self) -> dict:
        return {
            **{name: getattr(self, name) for name in RATING_ATTRIBUTES},
            "google_found": self.google_found,
            "bing_found": self.bing_found,
        }


@dataclass
class Attempt:
    answer: str
    correct: bool
    revealed_hint_count: int
    timestamp: float


@dataclass
class QuestionProgress:
    revealed_hint_count: int = 0
    attempts: list[Attempt] = field(default_factory=list)
    attempted_counts: set[int] = field(default_factory=set)
    ratings: dict[int, HintRatings] = field(default_factory=dict)
    next_hint_to_rate: int = 0
    correct: bool = False
    skipped: bool = False
    answered_before_hints: bool = False

    @property
    def resolved(self) -> bool:
        return self.correct or self.skipped


@dataclass
class AnnotationSession:
    session_id: str
    annotator_id: str
    phase: Phase
    queue: tuple[str, ...]
    show_answer: bool = False
    progress: dict[str, QuestionProgress] = field(default_factory=dict)

    def progress_for(self, q_id: str) -> QuestionProgress:
        return self.progress.setdefault(q_id, QuestionProgress())


class AnnotationEngine:
    """The session state machine, independent of any HTTP framework."""

    def __init__(
        self,
        records: Sequence[QuestionRecord],
        plan: Optional[dict] = None,
        event_log_path: Optional[str | Path] = None,
    ):
        self.records: dict[str, QuestionRecord] = {}
        self.order: list[str] = []
        for record in records:
            if record.q_id in self.records:
                raise ValidationError("q_id", f"duplicate question id {record.q_id!r}")
            self.records[record.q_id] = record
            self.order.append(record.q_id)
        if not self.records:
            raise ValidationError("records", "annotation needs at least one question")
        self.plan = plan or {}
        self.sessions: dict[str, AnnotationSession] = {}
        self.events: list[dict] = []
        self.event_log_path = Path(event_log_path) if event_log_path else None
        if self.event_log_path is not None and self.event_log_path.exists():
            with open(self.event_log_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        self._apply(json.loads(line))

    # ------------------------------------------------------------------
    # event plumbing

    def _record(self, event: dict) -> None:
        event = {"seq": len(self.events) + 1, **event}
        self._apply(event)
        if self.event_log_path is not None:
            with open(self.event_log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=True, separators=(",", ":")) + "\n")

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session_created":
            session = AnnotationSession(
                session_id=event["session_id"],
                annotator_id=event["annotator_id"],
                phase=Phase(event["phase"]),
                queue=tuple(event["queue"]),
                show_answer=bool(event.get("show_answer", False)),
            )
            self.sessions[session.session_id] = session
        elif kind == "attempt":
            progress = self.sessions[event["session_id"]].progress_for(event["q_id"])
            revealed = progress.revealed_hint_count
            progress.attempts.append(
                Attempt(
                    answer=event["answer"],
                    correct=event["correct"],
                    revealed_hint_count=revealed,
                    timestamp=event["timestamp"],
                )
            )
            progress.attempted_counts.add(revealed)
            if event["correct"]:
                progress.correct = True
                progress.answered_before_hints = revealed == 0
        elif kind == "reveal":
            progress = self.sessions[event["session_id"]].progress_for(event["q_id"])
            progress.revealed_hint_count += 1
        elif kind == "rating":
            progress = self.sessions[event["session_id"]].progress_for(event["q_id"])
            progress.ratings[event["hint_idx"]] = HintRatings(**event["ratings"])
            progress.next_hint_to_rate = event["hint_idx"] + 1
        elif kind == "skip":
            progress = self.sessions[event["session_id"]].progress_for(event["q_id"])
            progress.skipped = True
        else:
            raise ValidationError("type", f"unknown event type {kind!r}")
        self.events.append(event)

    # ------------------------------------------------------------------
    # lookups and guards

    def _session(self, session_id: str) -> AnnotationSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownResourceError(f"no such session: {session_id!r}")
        return session

    def _question_complete(self, session: AnnotationSession, q_id: str) -> bool:
        progress = session.progress_for(q_id)
        if session.phase is Phase.RATE_ATTRIBUTES:
            return progress.skipped or (
                progress.next_hint_to_rate >= len(self.records[q_id].hints)
            )
        return progress.resolved

    def _current_q_id(self, session: AnnotationSession) -> Optional[str]:
        for q_id in session.queue:
            if not self._question_complete(session, q_id):
                return q_id
        return None

    def _require_current(self, session: AnnotationSession, q_id: str) -> QuestionProgress:
        if q_id not in self.records:
            raise UnknownResourceError(f"no such question: {q_id!r}")
        if q_id not in session.queue:
            raise UnknownResourceError(f"question {q_id!r} is not in this session")
        current = self._current_q_id(session)
        if current != q_id:
            raise ProtocolViolationError(
                f"question {q_id!r} is not the active question (current: {current!r})"
            )
        return session.progress_for(q_id)

    # ------------------------------------------------------------------
    # public operations

    def create_session(
        self,
        annotator_id: str,
        phase: Optional[str] = None,
        q_ids: Optional[Sequence[str]] = None,
    ) -> dict:
        if not annotator_id:
            raise ValidationError("annotator_id", "must be nonempty")
        assigned = next(
            (
                a
                for a in self.plan.get("assignments", [])
                if a.get("annotator_id") == annotator_id
            ),
            None,
        )
        show_answer = False
        if assigned is not None:
            phase = phase or assigned.get("phase")
            q_ids = q_ids or assigned.get("q_ids")
            show_answer = bool(assigned.get("show_answer", False))
        if phase is None:
            raise ValidationError("phase", "no phase given and no assignment found")
        try:
            parsed_phase = Phase(phase)
        except ValueError:
            raise ValidationError("phase", f"unknown phase {phase!r}") from None
        queue = list(q_ids) if q_ids else list(self.order)
        for q_id in queue:
            if q_id not in self.records:
                raise UnknownResourceError(f"no such question: {q_id!r}")
        session_id = f"s{sum(1 for e in self.events if e['type'] == 'session_created') + 1}"
        self._record(
            {
                "type": "session_created",
                "session_id": session_id,
                "annotator_id": annotator_id,
                "phase": parsed_phase.value,
                "queue": queue,
                "show_answer": show_answer,
            }
        )
        return {
            "session_id": session_id,
            "annotator_id": annotator_id,
            "phase": parsed_phase.value,
            "n_questions": len(queue),
        }

    def next_question(self, session_id: str) -> dict:
        session = self._session(session_id)
        q_id = self._current_q_id(session)
        if q_id is None:
            return {"done": True}
        record = self.records[q_id]
        progress = session.progress_for(q_id)
        payload: dict = {
            "done": False,
            "q_id": q_id,
            "question": record.question,
            "n_hints": len(record.hints),
            "phase": session.phase.value,
        }
        if session.phase is Phase.RATE_ATTRIBUTES:
            k = progress.next_hint_to_rate
            payload.update(
                hint_to_rate=k,
                hint_text=record.hints[k].text,
                rated_count=len(progress.ratings),
            )
            if session.show_answer:
                payload["answer"] = record.exact_answer
        else:
            revealed = progress.revealed_hint_count
            payload.update(
                revealed_hint_count=revealed,
                revealed_hints=[h.text for h in record.hints[:revealed]],
                attempted_at_current=revealed in progress.attempted_counts,
                can_reveal=(
                    revealed in progress.attempted_counts and revealed < len(record.hints)
                ),
                can_skip=(
                    revealed == len(record.hints) and revealed in progress.attempted_counts
                ),
            )
        return payload

    def attempt(self, session_id: str, q_id: str, answer: str) -> dict:
        session = self._session(session_id)
        if session.phase is not Phase.ANSWER_WITH_HINTS:
            raise ProtocolViolationError("attempts belong to the answer phase")
        progress = self._require_current(session, q_id)
        record = self.records[q_id]
        correct = bool(answer.strip()) and answers_match(answer, record.exact_answer)
        self._record(
            {
                "type": "attempt",
                "session_id": session_id,
                "q_id": q_id,
                "answer": answer,
                "correct": correct,
                "timestamp": time.time(),
            }
        )
        progress = session.progress_for(q_id)
        return {
            "correct": correct,
            "revealed_hint_count": progress.revealed_hint_count,
            "answered_before_hints": progress.answered_before_hints,
        }

    def reveal(self, session_id: str, q_id: str) -> dict:
        session = self._session(session_id)
        if session.phase is not Phase.ANSWER_WITH_HINTS:
            raise ProtocolViolationError("reveals belong to the answer phase")
        progress = self._require_current(session, q_id)
        record = self.records[q_id]
        revealed = progress.revealed_hint_count
        if revealed >= len(record.hints):
            raise ProtocolViolationError("all hints are already revealed")
        if revealed not in progress.attempted_counts:
            raise ProtocolViolationError(
                f"attempt with {revealed} hint(s) revealed before revealing the next"
            )
        self._record({"type": "reveal", "session_id": session_id, "q_id": q_id})
        return {
            "hint_index": revealed,
            "text": record.hints[revealed].text,
            "revealed_hint_count": revealed + 1,
        }

    def submit_ratings(
        self, session_id: str, q_id: str, hint_idx: int, payload: dict
    ) -> dict:
        session = self._session(session_id)
        if session.phase is not Phase.RATE_ATTRIBUTES:
            raise ProtocolViolationError("ratings belong to the rating phase")
        progress = self._require_current(session, q_id)
        record = self.records[q_id]
        if not 0 <= hint_idx < len(record.hints):
            raise UnknownResourceError(f"question {q_id!r} has no hint {hint_idx}")
        if hint_idx != progress.next_hint_to_rate:
            raise ProtocolViolationError(
                f"hint {progress.next_hint_to_rate} must be rated next, not {hint_idx}"
            )
        ratings = HintRatings(**payload)  # ValidationError on bad values
        self._record(
            {
                "type": "rating",
                "session_id": session_id,
                "q_id": q_id,
                "hint_idx": hint_idx,
                "ratings": ratings.to_dict(),
            }
        )
        return {"q_id": q_id, "hint_idx": hint_idx, "accepted": True}

    def skip(self, session_id: str, q_id: str) -> dict:
        session = self._session(session_id)
        progress = self._require_current(session, q_id)
        record = self.records[q_id]
        if session.phase is Phase.ANSWER_WITH_HINTS:
            if progress.revealed_hint_count < len(record.hints):
                raise ProtocolViolationError("skip requires all hints revealed first")
            if progress.revealed_hint_count not in progress.attempted_counts:
                raise ProtocolViolationError("skip requires an attempt with all hints revealed")
        self._record({"type": "skip", "session_id": session_id, "q_id": q_id})
        return {"q_id": q_id, "skipped": True}

    def export_ratings(self) -> list[dict]:
        """Rating rows in submission order, one per (session, question, hint)."""
        rows = []
        for event in self.events:
            if event["type"] != "rating":
                continue
            session = self.sessions[event["session_id"]]
            rows.append(
                {
                    "annotator_id": session.annotator_id,
                    "session_id": session.session_id,
                    "q_id": event["q_id"],
                    "hint_idx": event["hint_idx"],
                    **event["ratings"],
                }
            )
        return rows

    def state_snapshot(self) -> dict:
        """Deterministic structural dump (for replay-equality checks)."""
        out: dict = {}
        for sid in sorted(self.sessions):
            session = self.sessions[sid]
            out[sid] = {
                "annotator_id": session.annotator_id,
                "phase": session.phase.value,
                "queue": list(session.queue),
                "show_answer": session.show_answer,
                "progress": {
                    q_id: {
                        "revealed": p.revealed_hint_count,
                        "attempts": [
                            [a.answer, a.correct, a.revealed_hint_count, a.timestamp]
                            for a in p.attempts
                        ],
                        "ratings": {
                            str(k): p.ratings[k].to_dict() for k in sorted(p.ratings)
                        },
                        "next_hint_to_rate": p.next_hint_to_rate,
                        "correct": p.correct,
                        "skipped": p.skipped,
                        "answered_before_hints": p.answered_before_hints,
                    }
                    for q_id, p in sorted(session.progress.items())
                },
            }
        return out


# ---------------------------------------------------------------------------
# HTTP layer


def create_app(engine: AnnotationEngine):
    """FastAPI app exposing the session protocol under /v1."""
    from typing import Annotated

    from fastapi import Body, FastAPI, Request
    from fastapi.responses import JSONResponse, PlainTextResponse
    from pydantic import BaseModel

    app = FastAPI(title="hintkit annotation service", docs_url=None, redoc_url=None)

    def _error(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status, content={"error": {"code": code, "message": message}}
        )

    @app.exception_handler(ValidationError)
    async def _on_validation(request: Request, exc: ValidationError):
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(UnknownResourceError)
    async def _on_missing(request: Request, exc: UnknownResourceError):
        return _error(404, "not_found", str(exc))

    @app.exception_handler(ProtocolViolationError)
    async def _on_violation(request: Request, exc: ProtocolViolationError):
        return _error(409, "protocol_violation", str(exc))

    class SessionBody(BaseModel):
        annotator_id: str
        phase: Optional[str] = None
        q_ids: Optional[list[str]] = None

    class AttemptBody(BaseModel):
        answer: str = ""

    class RatingsBody(BaseModel):
        relevance: int
        readability: int
        ambiguity: int
        convergence: int
        familiarity: int
        google_found: bool
        bing_found: bool

    @app.post("/v1/sessions")
    def create_session(body: Annotated[SessionBody, Body()]):
        return engine.create_session(body.annotator_id, body.phase, body.q_ids)

    @app.get("/v1/sessions/{session_id}/next-question")
    def next_question(session_id: str):
        return engine.next_question(session_id)

    @app.post("/v1/sessions/{session_id}/questions/{q_id}/attempt")
    def attempt(session_id: str, q_id: str, body: Annotated[AttemptBody, Body()]):
        return engine.attempt(session_id, q_id, body.answer)

    @app.post("/v1/sessions/{session_id}/questions/{q_id}/reveal")
    def reveal(session_id: str, q_id: str):
        return engine.reveal(session_id, q_id)

    @app.post("/v1/sessions/{session_id}/questions/{q_id}/hints/{k}/ratings")
    def submit_ratings(
        session_id: str, q_id: str, k: int, body: Annotated[RatingsBody, Body()]
    ):
        return engine.submit_ratings(session_id, q_id, k, body.model_dump())

    @app.get("/v1/export/ratings.jsonl")
    def export_ratings():
        lines = [json.dumps(row, ensure_ascii=True) for row in engine.export_ratings()]
        return PlainTextResponse(
            "\n".join(lines) + ("\n" if lines else ""),
            media_type="application/x-ndjson",
        )

    @app.post("/v1/sessions/{session_id}/questions/{q_id}/skip")
    def skip(session_id: str, q_id: str):
        return engine.skip(session_id, q_id)

    return app


def serve_annotation(
    records: Sequence[QuestionRecord],
    plan: Optional[dict] = None,
    event_log_path: Optional[str | Path] = None,
    host: str = "127.0.0.1",
    port: int = 8000,
) -> None:
    """Run the annotation service until interrupted."""
    import uvicorn

    engine = AnnotationEngine(records, plan=plan, event_log_path=event_log_path)
    uvicorn.run(create_app(engine), host=host, port=port, log_level="info")
