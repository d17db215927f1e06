"""Hint generation protocol and the two-stage hint filter.

Generation is three chat exchanges: elicit an answer, verify it against the
ground truth, then request the hint list. Filtering drops hints that leak
the answer lexically (shared lemma) and hints that merely rephrase the
question (embedding cosine at or above the threshold).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from .clients.chat import ChatService
from .clients.embedding import EmbeddingService, cosine_similarity
from .errors import GenerationError, ValidationError
from .model import MIN_HINTS_FINAL, SIMILARITY_THRESHOLD, Hint, QuestionRecord
from .prompts import HINT_PROMPT
from .textnorm import contains_contiguous, lemma_set, normalized_tokens

_MARKER_RE = re.compile(r"\[(\d+)\]")
_ITEM_RE = re.compile(r"^\s*(?:\d+[.)]|[-*•])\s+(.*\S)\s*$")
_SOURCE_LINE_RE = re.compile(r"^\s*\[(\d+)\]:?\s+(\S+)\s*$")

_DECLINE_PATTERNS = (
    "i don't know",
    "i do not know",
    "i'm not sure",
    "cannot find",
    "can't find",
    "unable to",
    "no information",
)


class GenerationStatus(str, Enum):
    ANSWER_NOT_FOUND = "AnswerNotFound"
    ANSWER_MISMATCH = "AnswerMismatch"
    OK = "Ok"


@dataclass(frozen=True)
class GenerationOutcome:
    status: GenerationStatus
    snippet: Optional[str] = None
    snippet_sources: tuple[str, ...] = ()
    hints_raw: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if self.hints_raw and self.status is not GenerationStatus.OK:
            raise ValidationError("hints_raw", "nonempty only when status is Ok")


@dataclass(frozen=True)
class LeakageReport:
    hint_lemmas: frozenset[str]
    answer_lemmas: frozenset[str]
    overlap: frozenset[str]
    leaked: bool

    def __post_init__(self):
        if self.leaked != bool(self.overlap):
            raise ValidationError("leaked", "must equal overlap nonemptiness")


def answers_match(generated: str, ground_truth: str) -> bool:
    """Normalized containment in either direction.

    Both sides are lowercased, punctuation-stripped, and shed leading
    articles; a match is a token-contiguous occurrence of one inside the
    other. Symmetric by construction.
    """
    gen = normalized_tokens(generated)
    truth = normalized_tokens(ground_truth)
    return contains_contiguous(gen, truth) or contains_contiguous(truth, gen)


def parse_source_markers(text: str) -> tuple[str, list[int]]:
    """Strip bracketed integer markers like ``[2]`` from ``text``.

    Returns the cleaned text (markers removed, whitespace collapsed) and the
    marker integers, deduplicated in order of first appearance.
    """
    indices: list[int] = []
    for match in _MARKER_RE.finditer(text):
        value = int(match.group(1))
        if value not in indices:
            indices.append(value)
    clean = " ".join(_MARKER_RE.sub(" ", text).split())
    return clean, indices


def parse_bullet_list(text: str) -> list[str]:
    """Items of a numbered ("1." / "1)") or bulleted ("-", "*", "•") list."""
    items = []
    for line in text.splitlines():
        match = _ITEM_RE.match(line)
        if match:
            items.append(match.group(1).strip())
    return items


def extract_sources(text: str) -> tuple[str, dict[int, str]]:
    """Split a response into body text and its trailing source references.

    Source lines look like ``[1] https://...`` (an optional ``Sources:``
    heading is ignored). Returns the body and an index -> URL map.
    """
    body_lines: list[str] = []
    sources: dict[int, str] = {}
    for line in text.splitlines():
        match = _SOURCE_LINE_RE.match(line)
        if match:
            sources[int(match.group(1))] = match.group(2)
            continue
        if line.strip().lower() in ("sources:", "sources"):
            continue
        body_lines.append(line)
    return "\n".join(body_lines).strip(), sources


def leaks_answer(hint: str, answer: str) -> LeakageReport:
    """Lexical leakage check: any shared lemma between the hint and the
    answer (stopwords removed from the answer side only) flags the hint."""
    hint_lemmas = frozenset(lemma_set(hint))
    answer_lemmas = frozenset(lemma_set(answer, drop_stopwords=True))
    overlap = hint_lemmas & answer_lemmas
    return LeakageReport(
        hint_lemmas=hint_lemmas,
        answer_lemmas=answer_lemmas,
        overlap=frozenset(overlap),
        leaked=bool(overlap),
    )


def question_similarity(hint: str, question: str, embeddings: EmbeddingService) -> float:
    """Cosine similarity between the hint and question embeddings."""
    return cosine_similarity(embeddings.embed(hint), embeddings.embed(question))


def _merge_sources(pool: list[str], local: dict[int, str], indices: Sequence[int]) -> tuple[int, ...]:
    """Remap response-local marker indices onto the record's source pool
    (1-based). Markers without a matching source line are dropped."""
    mapped = []
    for idx in indices:
        url = local.get(idx)
        if url is None:
            continue
        if url not in pool:
            pool.append(url)
        position = pool.index(url) + 1
        if position not in mapped:
            mapped.append(position)
    return tuple(mapped)


def elicit_and_verify(
    question: str,
    answer: str,
    chat: ChatService,
    hints_per_question: int = 10,
    hint_template: str = HINT_PROMPT,
) -> GenerationOutcome:
    """Run the three-step generation flow for one question.

    Declined or empty answers map to AnswerNotFound, answers that fail the
    normalized-containment check to AnswerMismatch. Only then is the hint
    list requested; an unparseable hint list raises ``GenerationError`` so
    the question can be quarantined rather than silently dropped.
    """
    answer_reply = chat.chat(question).response
    stripped = answer_reply.strip()
    lowered = stripped.lower()
    if not stripped or any(pattern in lowered for pattern in _DECLINE_PATTERNS):
        return GenerationOutcome(status=GenerationStatus.ANSWER_NOT_FOUND)

    body, snippet_sources_map = extract_sources(answer_reply)
    snippet, _ = parse_source_markers(body)
    if not answers_match(snippet, answer):
        return GenerationOutcome(status=GenerationStatus.ANSWER_MISMATCH)

    hint_reply = chat.chat(
        hint_template.format(n=hints_per_question, question=question)
    ).response
    hint_body, hint_sources_map = extract_sources(hint_reply)
    items = parse_bullet_list(hint_body)
    if not items:
        raise GenerationError(f"no hint list found in response: {hint_reply[:120]!r}")

    pool = [snippet_sources_map[i] for i in sorted(snippet_sources_map)]
    hints_raw = []
    for item in items:
        clean, raw_indices = parse_source_markers(item)
        mapped = _merge_sources(pool, hint_sources_map, raw_indices)
        hints_raw.append((clean, mapped))
    return GenerationOutcome(
        status=GenerationStatus.OK,
        snippet=snippet,
        snippet_sources=tuple(pool),
        hints_raw=tuple(hints_raw),
    )


def evaluate_hint_filters(
    hints: Sequence[Hint],
    answer: str,
    question: str,
    embeddings: EmbeddingService,
    threshold: float = SIMILARITY_THRESHOLD,
) -> list[tuple[Hint, bool]]:
    """Annotate every hint with its filter verdicts.

    Stage 1 flags lexical leaks; stage 2 scores question similarity for the
    survivors and drops those at or above ``threshold``. Returns (hint,
    kept) pairs in the original order.
    """
    out: list[tuple[Hint, bool]] = []
    for hint in hints:
        report = leaks_answer(hint.text, answer)
        if report.leaked:
            out.append((replace(hint, leak_flag=True), False))
            continue
        similarity = question_similarity(hint.text, question, embeddings)
        annotated = replace(hint, leak_flag=False, question_similarity=similarity)
        out.append((annotated, similarity < threshold))
    return out


def filter_hints(
    hints: Sequence[Hint],
    answer: str,
    question: str,
    embeddings: EmbeddingService,
    threshold: float = SIMILARITY_THRESHOLD,
) -> list[Hint]:
    """Kept hints (verdicts recorded), original order preserved."""
    return [
        hint
        for hint, kept in evaluate_hint_filters(
            hints, answer, question, embeddings, threshold
        )
        if kept
    ]


def prune_questions(
    records: Sequence[QuestionRecord], min_hints: int = MIN_HINTS_FINAL
) -> list[QuestionRecord]:
    """Drop records left with fewer than ``min_hints`` hints."""
    return [record for record in records if len(record.hints) >= min_hints]
