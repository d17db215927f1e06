"""Convergence scoring: how sharply a hint narrows the candidate-answer set.

For each question a candidate-answer list is elicited once (always containing
the ground truth). Each hint is then judged against every candidate with a
yes/no prompt. A hint that eliminates every wrong candidate while keeping the
true answer valid scores 1; a hint that keeps all n candidates alive scores
1/n; a hint that rules out the true answer scores 0.
"""

from __future__ import annotations

import re
from dataclasses import replace
from statistics import fmean
from typing import Optional, Sequence

from .clients.base import parallel_map
from .clients.chat import ChatService
from .errors import GenerationError, JudgementError, ValidationError
from .hints import answers_match, parse_bullet_list, parse_source_markers
from .model import QuestionRecord
from .prompts import CANDIDATE_PROMPT, JUDGE_PROMPT

# The elicitation prompt asks for up to this many candidates.
MAX_CANDIDATE_REQUEST = 20
# Number of candidates retained for scoring (the threshold-sweep optimum).
DEFAULT_CANDIDATE_COUNT = 11

_VERDICT_RE = re.compile(r"^\W*(yes|no)\b", re.IGNORECASE)


def _judge_workers(chat: ChatService) -> int:
    return chat.gate.limit if chat.gate is not None else 1


def generate_candidates(
    question: str, chat: ChatService, max_candidates: int = MAX_CANDIDATE_REQUEST
) -> list[str]:
    """Elicit up to ``max_candidates`` plausible answers for ``question``.

    Bullet markers and source markers are stripped; duplicates (case-
    insensitive) are dropped, order preserved.
    """
    reply = chat.chat(CANDIDATE_PROMPT.format(n=max_candidates, question=question))
    items = parse_bullet_list(reply.response)
    if not items:
        raise GenerationError(
            f"no candidate list found in response: {reply.response[:120]!r}"
        )
    seen: set[str] = set()
    candidates: list[str] = []
    for item in items:
        clean, _ = parse_source_markers(item)
        key = clean.casefold()
        if clean and key not in seen:
            seen.add(key)
            candidates.append(clean)
    return candidates[:max_candidates]


def inject_ground_truth(
    candidates: Sequence[str], answer: str, limit: Optional[int] = None
) -> list[str]:
    """Candidate list truncated to ``limit`` and guaranteed to contain the
    ground truth.

    Matching uses the same normalized containment as answer verification, so
    "the Beatles" already covers "Beatles". When the truncated list lacks the
    answer and is full, the last slot is replaced rather than grown, keeping
    the list size (and therefore the score denominator) fixed.
    """
    out = [c for c in candidates if c.strip()]
    if limit is not None:
        if limit < 1:
            raise ValidationError("limit", "candidate limit must be >= 1")
        out = out[:limit]
    if not any(answers_match(c, answer) for c in out):
        if limit is not None and len(out) >= limit:
            out[-1] = answer
        else:
            out.append(answer)
    return out


def _parse_verdict(text: str) -> Optional[bool]:
    match = _VERDICT_RE.match(text.strip())
    if match is None:
        return None
    return match.group(1).lower() == "yes"


def judge_hint_candidate(hint: str, candidate: str, chat: ChatService) -> bool:
    """Ask the judge whether ``hint`` refers to ``candidate``.

    An unparseable reply is retried once (as a distinct request); a second
    failure raises ``JudgementError`` rather than guessing a verdict.
    """
    prompt = JUDGE_PROMPT.format(hint=hint, candidate=candidate)
    verdict = _parse_verdict(chat.chat(prompt).response)
    if verdict is None:
        verdict = _parse_verdict(chat.chat(prompt, params={"attempt": 2}).response)
    if verdict is None:
        raise JudgementError(
            f"no yes/no verdict for hint {hint!r} vs candidate {candidate!r}"
        )
    return verdict


def convergence_score(answer_valid: bool, candidate_verdicts: Sequence[bool]) -> float:
    """Score from the answer verdict and the per-candidate verdicts.

    The candidate list always contains the true answer, so ``answer_valid``
    implies at least one positive verdict; that combination is enforced. A
    false ``answer_valid`` scores 0 regardless of the other verdicts;
    otherwise the score is 1 - (remaining wrong candidates) / (all
    candidates), which lands in [1/n, 1].
    """
    if not candidate_verdicts:
        raise ValidationError("candidate_verdicts", "must not be empty")
    if not answer_valid:
        return 0.0
    total_valid = sum(bool(v) for v in candidate_verdicts)
    if total_valid < 1:
        raise ValidationError(
            "candidate_verdicts",
            "a valid answer implies at least one positive candidate verdict",
        )
    # Single division keeps the result inside [1/n, 1] even in floats.
    n = len(candidate_verdicts)
    return (n - total_valid + 1) / n


def evaluate_hint_convergence(
    hint_text: str,
    candidates: Sequence[str],
    answer: str,
    chat: ChatService,
) -> tuple[tuple[bool, ...], float]:
    """Judge one hint against every candidate and score it.

    ``candidates`` must contain the ground truth (see ``inject_ground_truth``);
    its verdict doubles as the answer-validity bit.
    """
    answer_positions = [
        i for i, c in enumerate(candidates) if answers_match(c, answer)
    ]
    if not answer_positions:
        raise ValidationError("candidates", "must contain the ground-truth answer")
    verdicts = tuple(
        parallel_map(
            lambda candidate: judge_hint_candidate(hint_text, candidate, chat),
            list(candidates),
            workers=_judge_workers(chat),
        )
    )
    answer_valid = any(verdicts[i] for i in answer_positions)
    return verdicts, convergence_score(answer_valid, verdicts)


def score_record_convergence(
    record: QuestionRecord,
    chat: ChatService,
    candidate_count: int = DEFAULT_CANDIDATE_COUNT,
) -> QuestionRecord:
    """Attach candidate answers, per-hint verdicts and scores, and the
    question-level convergence (mean over hints) to ``record``."""
    raw = generate_candidates(record.question, chat)
    candidates = inject_ground_truth(raw, record.exact_answer, limit=candidate_count)
    scored_hints = []
    for hint in record.hints:
        verdicts, score = evaluate_hint_convergence(
            hint.text, candidates, record.exact_answer, chat
        )
        scored_hints.append(
            replace(hint, candidate_verdicts=verdicts, convergence_score=score)
        )
    return replace(
        record,
        hints=tuple(scored_hints),
        candidate_answers=tuple(candidates),
        convergence=fmean(h.convergence_score for h in scored_hints),
    )


def score_dataset_convergence(
    records: Sequence[QuestionRecord],
    chat: ChatService,
    candidate_count: int = DEFAULT_CANDIDATE_COUNT,
) -> list[QuestionRecord]:
    return [
        score_record_convergence(record, chat, candidate_count=candidate_count)
        for record in records
    ]
