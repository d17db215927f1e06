"""Dataset schema: records, hints, entity mentions, JSONL codec, splitting.

A dataset file is JSON Lines, one record per line, UTF-8. The serializer
emits a fixed key order and compact separators so that serialize(parse(x))
is byte-identical for canonical input and parse(serialize(r)) == r on all
fields for any valid record.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from .errors import RecordParseError, ValidationError
from .textnorm import word_count

SIMILARITY_THRESHOLD = 0.72
MIN_QUESTION_WORDS = 6
MAX_QUESTION_WORDS = 20
MIN_HINTS_FINAL = 5


class MajorType(str, Enum):
    HUMAN = "HUMAN"
    ENTITY = "ENTITY"
    LOCATION = "LOCATION"
    OTHER = "OTHER"
    DESCRIPTION = "DESCRIPTION"


class AggregateMode(str, Enum):
    MIN = "min"
    AVG = "avg"
    MAX = "max"


def _as_tuple(value):
    return tuple(value) if not isinstance(value, tuple) else value


@dataclass(frozen=True)
class EntityMention:
    """A named-entity span found in a question or hint."""

    surface: str
    wiki_title: Optional[str] = None
    raw_views: Optional[float] = None


@dataclass(frozen=True)
class Hint:
    """One hint plus everything the pipeline learned about it."""

    text: str
    source_indices: tuple[int, ...] = ()
    entities: tuple[EntityMention, ...] = ()
    h_popularity: tuple[Optional[float], ...] = ()
    candidate_verdicts: tuple[bool, ...] = ()
    convergence_score: Optional[float] = None
    familiarity_score: Optional[float] = None
    leak_flag: bool = False
    question_similarity: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "source_indices", _as_tuple(self.source_indices))
        object.__setattr__(self, "entities", _as_tuple(self.entities))
        object.__setattr__(self, "h_popularity", _as_tuple(self.h_popularity))
        object.__setattr__(self, "candidate_verdicts", _as_tuple(self.candidate_verdicts))


@dataclass(frozen=True)
class QuestionRecord:
    """One dataset row. Immutable; use ``dataclasses.replace`` to derive."""

    q_id: str
    question: str
    exact_answer: str
    major_type: MajorType
    minor_type: str
    snippet: str = ""
    snippet_sources: tuple[str, ...] = ()
    hints: tuple[Hint, ...] = ()
    candidate_answers: tuple[str, ...] = ()
    q_popularity: tuple[Optional[float], ...] = ()
    exact_answer_popularity: Optional[float] = None
    convergence: Optional[float] = None
    familiarity: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "snippet_sources", _as_tuple(self.snippet_sources))
        object.__setattr__(self, "hints", _as_tuple(self.hints))
        object.__setattr__(self, "candidate_answers", _as_tuple(self.candidate_answers))
        object.__setattr__(self, "q_popularity", _as_tuple(self.q_popularity))


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple[QuestionRecord, ...]
    validation: tuple[QuestionRecord, ...]
    test: tuple[QuestionRecord, ...]
    seed: int


@dataclass
class SourceQuestion:
    """A raw question/answer row as it flows through the sampling stages,
    before any hints exist."""

    q_id: str
    question: str
    answer: str
    major_type: Optional[MajorType] = None
    minor_type: Optional[str] = None


# ---------------------------------------------------------------------------
# validation

def _check_unit(value, name: str) -> None:
    if value is None:
        return
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(name, f"expected a number, got {type(value).__name__}")
    if not (0.0 <= float(value) <= 1.0):
        raise ValidationError(name, f"value {value!r} outside [0, 1]")


def validate_record(record: QuestionRecord) -> None:
    """Raise ``ValidationError`` unless the record satisfies every intrinsic
    invariant. Final-dataset gates live in ``validate_final_record``."""
    if not record.q_id:
        raise ValidationError("Q_ID", "must be nonempty")
    question = record.question.strip()
    if not question.endswith("?"):
        raise ValidationError("Question", "must end with '?'")
    n_words = word_count(question)
    if not (MIN_QUESTION_WORDS <= n_words <= MAX_QUESTION_WORDS):
        raise ValidationError(
            "Question",
            f"word count {n_words} outside [{MIN_QUESTION_WORDS}, {MAX_QUESTION_WORDS}]",
        )
    if not record.exact_answer:
        raise ValidationError("ExactAnswer", "must be nonempty")
    if not isinstance(record.major_type, MajorType):
        raise ValidationError("MajorType", f"unknown value {record.major_type!r}")
    if not record.minor_type:
        raise ValidationError("MinorType", "must be nonempty")
    if not record.hints:
        raise ValidationError("Hints", "must contain at least one hint")

    for value in record.q_popularity:
        _check_unit(value, "Q_Popularity")
    _check_unit(record.exact_answer_popularity, "Exact_Answer_Popularity")
    _check_unit(record.convergence, "Convergence")
    _check_unit(record.familiarity, "Familiarity")

    n_candidates = len(record.candidate_answers)
    for i, hint in enumerate(record.hints):
        where = f"Hints[{i}]"
        if not hint.text:
            raise ValidationError(where, "hint text must be nonempty")
        if len(hint.h_popularity) != len(hint.entities):
            raise ValidationError(
                f"H_Popularity[{i}]",
                f"{len(hint.h_popularity)} values for {len(hint.entities)} entities",
            )
        if hint.candidate_verdicts and len(hint.candidate_verdicts) != n_candidates:
            raise ValidationError(
                f"Scores[{i}]",
                f"{len(hint.candidate_verdicts)} verdicts for {n_candidates} candidates",
            )
        for entity in hint.entities:
            if entity.surface not in hint.text:
                raise ValidationError(
                    f"Hints_Entities[{i}]",
                    f"surface {entity.surface!r} is not a substring of the hint",
                )
            if entity.raw_views is not None and entity.raw_views < 0:
                raise ValidationError(f"Hints_Entities[{i}]", "raw_views must be >= 0")
        for value in hint.h_popularity:
            _check_unit(value, f"H_Popularity[{i}]")
        _check_unit(hint.convergence_score, f"Hints_Convergence[{i}]")
        _check_unit(hint.familiarity_score, f"Hints_Familiarity[{i}]")
        if hint.question_similarity is not None and not (
            -1.0 <= hint.question_similarity <= 1.0
        ):
            raise ValidationError(
                f"Hints_Question_Similarity[{i}]",
                f"value {hint.question_similarity!r} outside [-1, 1]",
            )
        for idx in hint.source_indices:
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
                raise ValidationError(
                    f"Hints_Sources[{i}]", f"bad source index {idx!r}"
                )


def validate_final_record(
    record: QuestionRecord, similarity_threshold: float = SIMILARITY_THRESHOLD
) -> None:
    """Intrinsic checks plus the gates every record of a published dataset
    must pass (no DESCRIPTION questions, >= 5 clean hints)."""
    validate_record(record)
    if record.major_type is MajorType.DESCRIPTION:
        raise ValidationError("MajorType", "DESCRIPTION questions are excluded")
    if len(record.hints) < MIN_HINTS_FINAL:
        raise ValidationError(
            "Hints", f"{len(record.hints)} hints, need >= {MIN_HINTS_FINAL}"
        )
    for i, hint in enumerate(record.hints):
        if hint.leak_flag:
            raise ValidationError(f"Hints_Leak[{i}]", "leaking hint in final dataset")
        if hint.question_similarity is None:
            raise ValidationError(
                f"Hints_Question_Similarity[{i}]", "unscored hint in final dataset"
            )
        if hint.question_similarity >= similarity_threshold:
            raise ValidationError(
                f"Hints_Question_Similarity[{i}]",
                f"{hint.question_similarity} >= {similarity_threshold}",
            )


# ---------------------------------------------------------------------------
# JSONL codec

_REQUIRED_KEYS = ("Q_ID", "Question", "Hints", "ExactAnswer", "MajorType", "MinorType")

_ALL_KEYS = (
    "Q_ID",
    "Question",
    "Hints",
    "Hints_Sources",
    "Snippet",
    "Snippet_Sources",
    "ExactAnswer",
    "MajorType",
    "MinorType",
    "Candidate_Answers",
    "Q_Popularity",
    "Exact_Answer_Popularity",
    "H_Popularity",
    "Scores",
    "Convergence",
    "Familiarity",
    "Hints_Entities",
    "Hints_Convergence",
    "Hints_Familiarity",
    "Hints_Leak",
    "Hints_Question_Similarity",
)


def _require(condition: bool, field_name: str, message: str) -> None:
    if not condition:
        raise ValidationError(field_name, message)


def _per_hint(obj: dict, key: str, n_hints: int, default) -> list:
    value = obj.get(key)
    if value is None:
        return [default() for _ in range(n_hints)]
    _require(isinstance(value, list), key, "expected a list")
    _require(len(value) == n_hints, key, f"{len(value)} entries for {n_hints} hints")
    return value


def parse_record(line: str, line_number: int = 1) -> QuestionRecord:
    """Decode one JSONL line into a validated ``QuestionRecord``.

    Unknown keys are rejected; optional score keys may be missing or null.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordParseError(line_number, f"malformed JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RecordParseError(line_number, "record line must be a JSON object")

    unknown = set(obj) - set(_ALL_KEYS)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")
    for key in _REQUIRED_KEYS:
        if key not in obj:
            raise ValidationError(key, "required field missing")

    hints_text = obj["Hints"]
    _require(isinstance(hints_text, list), "Hints", "expected a list")
    n_hints = len(hints_text)

    sources = _per_hint(obj, "Hints_Sources", n_hints, list)
    h_pop = _per_hint(obj, "H_Popularity", n_hints, list)
    scores = _per_hint(obj, "Scores", n_hints, list)
    entities = _per_hint(obj, "Hints_Entities", n_hints, list)
    h_conv = _per_hint(obj, "Hints_Convergence", n_hints, lambda: None)
    h_fam = _per_hint(obj, "Hints_Familiarity", n_hints, lambda: None)
    h_leak = _per_hint(obj, "Hints_Leak", n_hints, lambda: False)
    h_sim = _per_hint(obj, "Hints_Question_Similarity", n_hints, lambda: None)

    hints = []
    for i in range(n_hints):
        ent_list = []
        for ent in entities[i]:
            _require(isinstance(ent, dict), f"Hints_Entities[{i}]", "expected objects")
            bad = set(ent) - {"surface", "wiki_title", "raw_views"}
            _require(not bad, f"Hints_Entities[{i}]", f"unknown entity key {sorted(bad)}")
            _require("surface" in ent, f"Hints_Entities[{i}]", "surface missing")
            ent_list.append(
                EntityMention(
                    surface=ent["surface"],
                    wiki_title=ent.get("wiki_title"),
                    raw_views=ent.get("raw_views"),
                )
            )
        hints.append(
            Hint(
                text=hints_text[i],
                source_indices=tuple(sources[i]),
                entities=tuple(ent_list),
                h_popularity=tuple(h_pop[i]),
                candidate_verdicts=tuple(bool(v) for v in scores[i]),
                convergence_score=h_conv[i],
                familiarity_score=h_fam[i],
                leak_flag=bool(h_leak[i]),
                question_similarity=h_sim[i],
            )
        )

    major_raw = obj["MajorType"]
    try:
        major = MajorType(major_raw)
    except ValueError:
        raise ValidationError("MajorType", f"unknown value {major_raw!r}") from None

    record = QuestionRecord(
        q_id=obj["Q_ID"],
        question=obj["Question"],
        exact_answer=obj["ExactAnswer"],
        major_type=major,
        minor_type=obj["MinorType"],
        snippet=obj.get("Snippet", ""),
        snippet_sources=tuple(obj.get("Snippet_Sources", ())),
        hints=tuple(hints),
        candidate_answers=tuple(obj.get("Candidate_Answers", ())),
        q_popularity=tuple(obj.get("Q_Popularity", ())),
        exact_answer_popularity=obj.get("Exact_Answer_Popularity"),
        convergence=obj.get("Convergence"),
        familiarity=obj.get("Familiarity"),
    )
    validate_record(record)
    return record


def serialize_record(record: QuestionRecord) -> str:
    """Encode a validated record as one canonical JSONL line (no newline)."""
    validate_record(record)
    obj = {
        "Q_ID": record.q_id,
        "Question": record.question,
        "Hints": [h.text for h in record.hints],
        "Hints_Sources": [list(h.source_indices) for h in record.hints],
        "Snippet": record.snippet,
        "Snippet_Sources": list(record.snippet_sources),
        "ExactAnswer": record.exact_answer,
        "MajorType": record.major_type.value,
        "MinorType": record.minor_type,
        "Candidate_Answers": list(record.candidate_answers),
        "Q_Popularity": list(record.q_popularity),
        "Exact_Answer_Popularity": record.exact_answer_popularity,
        "H_Popularity": [list(h.h_popularity) for h in record.hints],
        "Scores": [list(h.candidate_verdicts) for h in record.hints],
        "Convergence": record.convergence,
        "Familiarity": record.familiarity,
        "Hints_Entities": [
            [
                {
                    "surface": e.surface,
                    "wiki_title": e.wiki_title,
                    "raw_views": e.raw_views,
                }
                for e in h.entities
            ]
            for h in record.hints
        ],
        "Hints_Convergence": [h.convergence_score for h in record.hints],
        "Hints_Familiarity": [h.familiarity_score for h in record.hints],
        "Hints_Leak": [h.leak_flag for h in record.hints],
        "Hints_Question_Similarity": [h.question_similarity for h in record.hints],
    }
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def load_dataset(path: str | Path, final: bool = False) -> list[QuestionRecord]:
    """Read a JSONL dataset, enforcing q_id uniqueness across the file."""
    records = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_record(line, line_number=i)
            if record.q_id in seen:
                raise ValidationError("Q_ID", f"duplicate id {record.q_id!r} (line {i})")
            seen.add(record.q_id)
            if final:
                validate_final_record(record)
            records.append(record)
    return records


def save_dataset(
    records: Iterable[QuestionRecord], path: str | Path, final: bool = False
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            if final:
                validate_final_record(record)
            fh.write(serialize_record(record) + "\n")


# ---------------------------------------------------------------------------
# source-question rows (pre-hint pipeline stages)

_SOURCE_KEYS = ("q_id", "question", "answer", "major_type", "minor_type")


def parse_source_question(line: str, line_number: int = 1) -> SourceQuestion:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordParseError(line_number, f"malformed JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise RecordParseError(line_number, "row must be a JSON object")
    unknown = set(obj) - set(_SOURCE_KEYS)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")
    for key in ("q_id", "question", "answer"):
        if not obj.get(key):
            raise ValidationError(key, "required field missing or empty")
    major = obj.get("major_type")
    return SourceQuestion(
        q_id=obj["q_id"],
        question=obj["question"],
        answer=obj["answer"],
        major_type=MajorType(major) if major is not None else None,
        minor_type=obj.get("minor_type"),
    )


def serialize_source_question(row: SourceQuestion) -> str:
    obj = {
        "q_id": row.q_id,
        "question": row.question,
        "answer": row.answer,
        "major_type": row.major_type.value if row.major_type else None,
        "minor_type": row.minor_type,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def load_source_questions(path: str | Path) -> list[SourceQuestion]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if line.strip():
                rows.append(parse_source_question(line, line_number=i))
    return rows


def save_source_questions(rows: Iterable[SourceQuestion], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(serialize_source_question(row) + "\n")


# ---------------------------------------------------------------------------
# splitting

def split_dataset(
    records: list[QuestionRecord], counts: tuple[int, int, int], seed: int
) -> DatasetSplit:
    """Shuffle records with ``seed`` and cut into train/validation/test of the
    requested sizes. Counts must sum to ``len(records)``."""
    n_train, n_val, n_test = counts
    if n_train < 0 or n_val < 0 or n_test < 0:
        raise ValidationError("counts", "split sizes must be non-negative")
    if n_train + n_val + n_test != len(records):
        raise ValidationError(
            "counts",
            f"{n_train}+{n_val}+{n_test} != {len(records)} records",
        )
    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    return DatasetSplit(
        train=tuple(shuffled[:n_train]),
        validation=tuple(shuffled[n_train:n_train + n_val]),
        test=tuple(shuffled[n_train + n_val:]),
        seed=seed,
    )
