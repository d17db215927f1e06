"""Difficulty labels, dataset statistics, and the metric-validation math
(Pearson/MSE against human ratings, candidate-count sweep, aggregation-mode
comparison)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import fmean
from typing import Callable, Mapping, Optional, Protocol, Sequence

import numpy as np
import requests

from .clients.chat import ChatService
from .convergence import evaluate_hint_convergence, generate_candidates, inject_ground_truth
from .errors import TransportError, UndefinedCorrelationError, ValidationError
from .model import AggregateMode, QuestionRecord
from .textnorm import contains_contiguous, normalized_tokens, word_count


class DifficultyLevel(str, Enum):
    EASY = "Easy"
    MEDIUM = "Medium"
    HARD = "Hard"


class DifficultyBasis(str, Enum):
    QUESTION_RETRIEVAL = "QuestionRetrieval"
    ANSWER_POPULARITY = "AnswerPopularity"


# Frozen threshold table. Boundaries follow the documented reading:
# answer popularity 0.33 and 0.66 are both Medium (inclusive range),
# question relevance 1/3 is Medium and 2/3 is Easy.
def _expected_level(basis: DifficultyBasis, raw: float) -> DifficultyLevel:
    if basis is DifficultyBasis.ANSWER_POPULARITY:
        if raw > 0.66:
            return DifficultyLevel.EASY
        if raw >= 0.33:
            return DifficultyLevel.MEDIUM
        return DifficultyLevel.HARD
    if raw < 1 / 3:
        return DifficultyLevel.HARD
    if raw < 2 / 3:
        return DifficultyLevel.MEDIUM
    return DifficultyLevel.EASY


@dataclass(frozen=True)
class DifficultyLabel:
    level: DifficultyLevel
    basis: DifficultyBasis
    raw: float

    def __post_init__(self):
        if not 0.0 <= self.raw <= 1.0:
            raise ValidationError("raw", f"must be in [0,1], got {self.raw}")
        if self.level is not _expected_level(self.basis, self.raw):
            raise ValidationError("level", "inconsistent with raw under threshold table")


def answer_difficulty(popularity: float) -> DifficultyLabel:
    """Easy above 0.66, Medium in [0.33, 0.66], Hard below 0.33."""
    if not 0.0 <= popularity <= 1.0:
        raise ValidationError("popularity", f"must be in [0,1], got {popularity}")
    return DifficultyLabel(
        level=_expected_level(DifficultyBasis.ANSWER_POPULARITY, popularity),
        basis=DifficultyBasis.ANSWER_POPULARITY,
        raw=popularity,
    )


def question_difficulty(relevance: float) -> DifficultyLabel:
    """Hard below 1/3, Medium in [1/3, 2/3), Easy at 2/3 and above."""
    if not 0.0 <= relevance <= 1.0:
        raise ValidationError("relevance", f"must be in [0,1], got {relevance}")
    return DifficultyLabel(
        level=_expected_level(DifficultyBasis.QUESTION_RETRIEVAL, relevance),
        basis=DifficultyBasis.QUESTION_RETRIEVAL,
        raw=relevance,
    )


class PassageRetriever(Protocol):
    def retrieve(self, question: str, k: int) -> Sequence[str]: ...


class StaticRetriever:
    """Fixed passage pool (tests and the CLI stub); top-k is a prefix."""

    def __init__(self, passages: Sequence[str]):
        self.passages = list(passages)

    def retrieve(self, question: str, k: int) -> list[str]:
        return self.passages[:k]


class HttpRetriever:
    """POST {base_url}/retrieve {"question", "k"} -> {"passages": [...]}."""

    def __init__(self, base_url: str, timeout: float = 60.0,
                 session: Optional[requests.Session] = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = session or requests.Session()

    def retrieve(self, question: str, k: int) -> list[str]:
        try:
            resp = self.session.post(
                f"{self.base_url}/retrieve",
                json={"question": question, "k": k},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
            return list(payload["passages"])
        except Exception as exc:  # noqa: BLE001 - network failures vary
            raise TransportError(f"retrieval failed: {exc}") from exc


def relevance_fraction(
    question: str, answer: str, retriever: PassageRetriever, k: int = 500
) -> float:
    """Fraction of the top-k retrieved passages that contain the normalized
    answer string (token-contiguous, case/punctuation-insensitive)."""
    if k < 1:
        raise ValidationError("k", "must be >= 1")
    passages = list(retriever.retrieve(question, k))
    if not passages:
        raise ValidationError("passages", "retriever returned no passages")
    answer_tokens = normalized_tokens(answer)
    hits = sum(
        1
        for passage in passages
        if contains_contiguous(normalized_tokens(passage), answer_tokens)
    )
    return hits / len(passages)


# ---------------------------------------------------------------------------
# Correlation math


@dataclass(frozen=True)
class CorrelationReport:
    pearson_r: float
    mse: float
    n: int

    def __post_init__(self):
        if not -1.0 - 1e-12 <= self.pearson_r <= 1.0 + 1e-12:
            raise ValidationError("pearson_r", "must lie in [-1, 1]")
        if self.mse < 0:
            raise ValidationError("mse", "must be non-negative")


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation; raises when it is undefined."""
    if len(xs) != len(ys):
        raise ValidationError("xs", "length mismatch")
    if len(xs) < 2:
        raise ValidationError("xs", "need at least 2 samples")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    xd = x - x.mean()
    yd = y - y.mean()
    denom = float(np.sqrt((xd * xd).sum() * (yd * yd).sum()))
    if denom == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined: at least one input has zero variance"
        )
    r = float((xd * yd).sum() / denom)
    return max(-1.0, min(1.0, r))


def mse(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Mean of squared differences."""
    if len(xs) != len(ys):
        raise ValidationError("xs", "length mismatch")
    if not xs:
        raise ValidationError("xs", "must not be empty")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    return float(np.mean((x - y) ** 2))


def correlation_report(human: Sequence[float], metric: Sequence[float]) -> CorrelationReport:
    return CorrelationReport(
        pearson_r=pearson(human, metric), mse=mse(human, metric), n=len(human)
    )


def scale_rating(rating: float, low: float = 1.0, high: float = 5.0) -> float:
    """Map a human rating on [low, high] onto [0,1] so MSE against the
    unit-interval metrics is meaningful."""
    if not low <= rating <= high:
        raise ValidationError("rating", f"must be in [{low}, {high}], got {rating}")
    return (rating - low) / (high - low)


RATING_ATTRIBUTES = ("relevance", "readability", "ambiguity", "convergence", "familiarity")


def load_human_ratings(
    path: str | Path, attribute: str
) -> dict[tuple[str, int], float]:
    """Ingest an annotation-export JSONL file into (q_id, hint index) ->
    mean rating, scaled onto [0,1]. Multiple annotators of the same hint
    average."""
    if attribute not in RATING_ATTRIBUTES:
        raise ValidationError("attribute", f"unknown rating attribute {attribute!r}")
    sums: dict[tuple[str, int], float] = {}
    counts: dict[tuple[str, int], int] = {}
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            row = json.loads(line)
            try:
                key = (str(row["q_id"]), int(row["hint_idx"]))
                value = scale_rating(float(row[attribute]))
            except KeyError as exc:
                raise ValidationError(
                    "ratings", f"line {i}: missing field {exc.args[0]!r}"
                ) from exc
            sums[key] = sums.get(key, 0.0) + value
            counts[key] = counts.get(key, 0) + 1
    return {key: sums[key] / counts[key] for key in sums}


def paired_scores(
    records: Sequence[QuestionRecord],
    human: Mapping[tuple[str, int], float],
    metric: str,
) -> tuple[list[float], list[float]]:
    """Align human ratings (keyed by (q_id, hint index), already on [0,1])
    with per-hint metric values; pairs with an absent metric are skipped."""
    if metric not in ("hicos", "hifas"):
        raise ValidationError("metric", f"unknown metric {metric!r}")
    human_values: list[float] = []
    metric_values: list[float] = []
    for record in records:
        for idx, hint in enumerate(record.hints):
            key = (record.q_id, idx)
            if key not in human:
                continue
            value = (
                hint.convergence_score if metric == "hicos" else hint.familiarity_score
            )
            if value is None:
                continue
            human_values.append(human[key])
            metric_values.append(value)
    return human_values, metric_values


@dataclass(frozen=True)
class AggregationComparison:
    reports: dict[AggregateMode, CorrelationReport]
    best_mode: AggregateMode


def compare_aggregations(
    human: Sequence[float], by_mode: Mapping[AggregateMode, Sequence[float]]
) -> AggregationComparison:
    """Correlate human familiarity ratings against each aggregation mode and
    flag the one with the highest Pearson r."""
    if not by_mode:
        raise ValidationError("by_mode", "no aggregation modes supplied")
    reports = {
        mode: correlation_report(human, scores) for mode, scores in by_mode.items()
    }
    best_mode = max(reports, key=lambda mode: reports[mode].pearson_r)
    return AggregationComparison(reports=reports, best_mode=best_mode)


# ---------------------------------------------------------------------------
# Dataset statistics


@dataclass(frozen=True)
class StatsReport:
    """Table-style dataset aggregates. A finished dataset keeps at least
    five hints per question, so there n_hints >= 5 * n_questions."""

    n_questions: int
    n_hints: int
    avg_question_len: float
    avg_hint_len: float
    avg_hints_per_q: float
    avg_entities_per_q: float
    avg_entities_per_hint: float
    avg_sources_per_q: float

    def __post_init__(self):
        for name in (
            "avg_question_len",
            "avg_hint_len",
            "avg_hints_per_q",
            "avg_entities_per_q",
            "avg_entities_per_hint",
            "avg_sources_per_q",
        ):
            if getattr(self, name) < 0:
                raise ValidationError(name, "averages must be non-negative")

    def to_dict(self) -> dict:
        return {
            "n_questions": self.n_questions,
            "n_hints": self.n_hints,
            "avg_question_len": self.avg_question_len,
            "avg_hint_len": self.avg_hint_len,
            "avg_hints_per_q": self.avg_hints_per_q,
            "avg_entities_per_q": self.avg_entities_per_q,
            "avg_entities_per_hint": self.avg_entities_per_hint,
            "avg_sources_per_q": self.avg_sources_per_q,
        }


def dataset_stats(records: Sequence[QuestionRecord]) -> StatsReport:
    """All eight aggregates; word counts use the shared tokenization rule
    (trailing question mark not counted as a word)."""
    if not records:
        raise ValidationError("records", "cannot compute statistics of an empty dataset")
    hints = [hint for record in records for hint in record.hints]
    question_entities = [len(record.q_popularity) for record in records]
    return StatsReport(
        n_questions=len(records),
        n_hints=len(hints),
        avg_question_len=fmean(word_count(r.question) for r in records),
        avg_hint_len=fmean(word_count(h.text) for h in hints) if hints else 0.0,
        avg_hints_per_q=len(hints) / len(records),
        avg_entities_per_q=fmean(question_entities),
        avg_entities_per_hint=(
            fmean(len(h.entities) for h in hints) if hints else 0.0
        ),
        avg_sources_per_q=fmean(len(r.snippet_sources) for r in records),
    )


# ---------------------------------------------------------------------------
# Candidate-count sweep


@dataclass(frozen=True)
class SweepPoint:
    n_candidates: int
    pearson_r: float
    n_samples: int


def hicos_sweep(
    records: Sequence[QuestionRecord],
    human: Mapping[tuple[str, int], float],
    chat: ChatService,
    n_range: Sequence[int] = tuple(range(1, 21)),
    candidate_source: Optional[Callable[[QuestionRecord], Sequence[str]]] = None,
) -> list[SweepPoint]:
    """Re-score convergence at each candidate-list size and correlate with
    human convergence ratings.

    For every n the stored candidate list (or a freshly elicited one) is
    truncated to n with the ground truth kept present, every rated hint is
    re-judged, and one Pearson point is emitted. Hints without a human
    rating are skipped; ``n_samples`` reports the pairs actually used.
    """
    if not n_range:
        raise ValidationError("n_range", "must contain at least one size")
    if any(n < 1 for n in n_range):
        raise ValidationError("n_range", "candidate counts must be >= 1")

    rated_by_record: dict[str, list[tuple[int, object]]] = {
        record.q_id: [
            (idx, hint)
            for idx, hint in enumerate(record.hints)
            if (record.q_id, idx) in human
        ]
        for record in records
    }
    # Candidate lists are only elicited for records that contribute pairs.
    base: dict[str, list[str]] = {}
    for record in records:
        if not rated_by_record[record.q_id]:
            continue
        if record.candidate_answers:
            base[record.q_id] = list(record.candidate_answers)
        elif candidate_source is not None:
            base[record.q_id] = list(candidate_source(record))
        else:
            base[record.q_id] = generate_candidates(record.question, chat)

    points: list[SweepPoint] = []
    for n in n_range:
        human_values: list[float] = []
        metric_values: list[float] = []
        for record in records:
            rated = rated_by_record[record.q_id]
            if not rated:
                continue
            candidates = inject_ground_truth(
                base[record.q_id], record.exact_answer, limit=n
            )
            for idx, hint in rated:
                _, score = evaluate_hint_convergence(
                    hint.text, candidates, record.exact_answer, chat
                )
                human_values.append(human[(record.q_id, idx)])
                metric_values.append(score)
        points.append(
            SweepPoint(
                n_candidates=n,
                pearson_r=pearson(human_values, metric_values),
                n_samples=len(human_values),
            )
        )
    return points


def write_sweep_csv(points: Sequence[SweepPoint], path: str | Path) -> None:
    """Curve artifact: CSV with header n,pearson_r,n_samples."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "pearson_r", "n_samples"])
        for point in points:
            writer.writerow([point.n_candidates, point.pearson_r, point.n_samples])
