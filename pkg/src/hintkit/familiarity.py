"""Familiarity scoring: how well-known the entities in a hint are.

Flow per hint: extract named entities, fetch each entity's monthly Wikipedia
pageviews over 2015-01..2023-12, take the per-entity mean, clamp outliers
with quartile fences fitted on a reference entity corpus, scale linearly to
[0,1], then aggregate per-entity values (min/avg/max) into one score.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import fmean
from typing import Mapping, Optional, Protocol, Sequence

import numpy as np

from .clients.pageviews import PageviewService
from .errors import ArticleMissingError, RecordParseError, ValidationError
from .hints import parse_bullet_list
from .model import AggregateMode, EntityMention, Hint, QuestionRecord
from .prompts import ENTITY_PROMPT
from .questions import WikiResolver


@dataclass(frozen=True)
class FamiliarityNormalizer:
    """Quartile fences and scaling range fitted on a reference corpus.

    ``lower``/``upper`` are the 1.5-IQR fences; values are clamped into that
    range before linear scaling, so every normalized output lands in [0,1].
    ``lower`` may be negative — harmless, since view counts are >= 0.
    """

    q1: float
    q3: float
    iqr: float
    lower: float
    upper: float
    corpus_size: int

    def __post_init__(self):
        if self.q1 > self.q3:
            raise ValidationError("q1", "q1 must not exceed q3")
        if abs(self.iqr - (self.q3 - self.q1)) > 1e-9:
            raise ValidationError("iqr", "iqr must equal q3 - q1")
        if self.lower > self.upper:
            raise ValidationError("lower", "lower fence must not exceed upper")
        if self.corpus_size < 4:
            raise ValidationError("corpus_size", "must be >= 4")


@dataclass(frozen=True)
class FamiliarityResult:
    """Per-entity popularity detail plus the aggregated score for one hint."""

    per_entity: tuple[tuple[EntityMention, float, float], ...]
    aggregate_mode: AggregateMode
    score: Optional[float]

    def __post_init__(self):
        if (self.score is not None) != bool(self.per_entity):
            raise ValidationError(
                "score", "present exactly when per_entity is nonempty"
            )


class EntityExtractor(Protocol):
    def extract(self, text: str) -> Sequence[EntityMention]: ...


class GazetteerEntityExtractor:
    """Deterministic extractor: longest-first, non-overlapping, word-boundary
    matches against a fixed surface -> article-title table."""

    def __init__(self, gazetteer: Mapping[str, str]):
        self.gazetteer = dict(gazetteer)
        self._patterns = [
            (re.compile(rf"\b{re.escape(surface)}\b", re.IGNORECASE), title)
            for surface, title in sorted(
                self.gazetteer.items(), key=lambda kv: (-len(kv[0]), kv[0])
            )
        ]

    def extract(self, text: str) -> list[EntityMention]:
        claimed: list[tuple[int, int]] = []
        found: list[tuple[int, EntityMention]] = []
        for pattern, title in self._patterns:
            for match in pattern.finditer(text):
                span = match.span()
                if any(s < span[1] and span[0] < e for s, e in claimed):
                    continue
                claimed.append(span)
                found.append(
                    (span[0], EntityMention(surface=match.group(0), wiki_title=title))
                )
        return [mention for _, mention in sorted(found, key=lambda x: x[0])]


class ChatEntityExtractor:
    """LLM-prompted extractor; mentions are kept only when the reported
    surface actually occurs in the text, and titles resolve via ``resolver``."""

    def __init__(self, chat_service, resolver: WikiResolver, template: str = ENTITY_PROMPT):
        self.chat = chat_service
        self.resolver = resolver
        self.template = template

    def extract(self, text: str) -> list[EntityMention]:
        reply = self.chat.chat(self.template.format(text=text)).response
        if reply.strip().upper() == "NONE":
            return []
        mentions: list[EntityMention] = []
        seen: set[str] = set()
        for item in parse_bullet_list(reply):
            surface = item.strip().strip('"')
            position = text.lower().find(surface.lower())
            if not surface or position < 0:
                continue
            actual = text[position : position + len(surface)]
            if actual.lower() in seen:
                continue
            seen.add(actual.lower())
            mentions.append(
                EntityMention(surface=actual, wiki_title=self.resolver.resolve(actual))
            )
        return mentions


def extract_entities(text: str, extractor: EntityExtractor) -> list[EntityMention]:
    """Entities of ``text`` with attempted title resolution; validates that
    every surface occurs in the text and spans do not duplicate."""
    mentions = list(extractor.extract(text))
    lowered = text.lower()
    for mention in mentions:
        if mention.surface.lower() not in lowered:
            raise ValidationError(
                "surface", f"extracted span {mention.surface!r} not found in text"
            )
    return mentions


def raw_popularity(title: str, pageviews: PageviewService) -> Optional[float]:
    """Mean monthly view count for an article over the observation window.

    Months without data (article created mid-window) simply do not
    contribute. A missing article yields None — popularity absent.
    """
    try:
        months = pageviews.monthly_pageviews(title)
    except ArticleMissingError:
        return None
    if not months:
        return None
    return fmean(m.views for m in months)


def fit_normalizer(corpus_views: Sequence[float]) -> FamiliarityNormalizer:
    """Fit quartile fences on a reference corpus of per-entity mean views.

    Quartiles use linear interpolation between order statistics.
    """
    if len(corpus_views) < 4:
        raise ValidationError("corpus_views", "need at least 4 calibration values")
    values = np.asarray(corpus_views, dtype=float)
    if not np.isfinite(values).all():
        raise ValidationError("corpus_views", "calibration values must be finite")
    q1, q3 = (float(q) for q in np.percentile(values, [25, 75]))
    iqr = q3 - q1
    return FamiliarityNormalizer(
        q1=q1,
        q3=q3,
        iqr=iqr,
        lower=q1 - 1.5 * iqr,
        upper=q3 + 1.5 * iqr,
        corpus_size=len(corpus_views),
    )


def normalize(views: float, normalizer: FamiliarityNormalizer) -> float:
    """Clamp to the fitted fences, then scale linearly to [0,1].

    A degenerate normalizer (all calibration values equal) maps everything
    to 0.5.
    """
    if normalizer.upper == normalizer.lower:
        return 0.5
    clamped = min(max(views, normalizer.lower), normalizer.upper)
    return (clamped - normalizer.lower) / (normalizer.upper - normalizer.lower)


def hifas_aggregate(
    values: Sequence[float], mode: AggregateMode = AggregateMode.AVG
) -> Optional[float]:
    """Aggregate per-entity normalized values into one score; empty -> None."""
    if not values:
        return None
    if mode is AggregateMode.MIN:
        return min(values)
    if mode is AggregateMode.MAX:
        return max(values)
    return fmean(values)


def score_entities(
    mentions: Sequence[EntityMention],
    normalizer: FamiliarityNormalizer,
    pageviews: PageviewService,
) -> list[tuple[EntityMention, float, float]]:
    """(mention, raw mean views, normalized value) for every scoreable
    mention. Mentions without a resolved title, or whose article is missing,
    are dropped — they carry no popularity signal."""
    scored = []
    for mention in mentions:
        if mention.wiki_title is None:
            continue
        views = (
            mention.raw_views
            if mention.raw_views is not None
            else raw_popularity(mention.wiki_title, pageviews)
        )
        if views is None:
            continue
        scored.append(
            (replace(mention, raw_views=views), views, normalize(views, normalizer))
        )
    return scored


def evaluate_hint_familiarity(
    hint: Hint,
    normalizer: FamiliarityNormalizer,
    pageviews: PageviewService,
    extractor: Optional[EntityExtractor] = None,
    mode: AggregateMode = AggregateMode.AVG,
) -> FamiliarityResult:
    """Score one hint. Entities already attached to the hint are reused;
    otherwise ``extractor`` is consulted."""
    mentions = list(hint.entities)
    if not mentions and extractor is not None:
        mentions = extract_entities(hint.text, extractor)
    per_entity = tuple(score_entities(mentions, normalizer, pageviews))
    values = [normalized for _, _, normalized in per_entity]
    return FamiliarityResult(
        per_entity=per_entity,
        aggregate_mode=mode,
        score=hifas_aggregate(values, mode),
    )


def score_record_familiarity(
    record: QuestionRecord,
    normalizer: FamiliarityNormalizer,
    pageviews: PageviewService,
    extractor: Optional[EntityExtractor] = None,
    mode: AggregateMode = AggregateMode.AVG,
    resolver: Optional[WikiResolver] = None,
) -> QuestionRecord:
    """Attach entity popularity to every hint, plus question-entity and
    exact-answer popularity, and the record-level familiarity (mean over
    hints that have a score)."""
    scored_hints = []
    for hint in record.hints:
        result = evaluate_hint_familiarity(
            hint, normalizer, pageviews, extractor=extractor, mode=mode
        )
        scored_hints.append(
            replace(
                hint,
                entities=tuple(m for m, _, _ in result.per_entity),
                h_popularity=tuple(norm for _, _, norm in result.per_entity),
                familiarity_score=result.score,
            )
        )

    q_popularity = record.q_popularity
    if not q_popularity and extractor is not None:
        question_entities = extract_entities(record.question, extractor)
        q_popularity = tuple(
            norm
            for _, _, norm in score_entities(question_entities, normalizer, pageviews)
        )

    answer_popularity = record.exact_answer_popularity
    if answer_popularity is None and resolver is not None:
        title = resolver.resolve(record.exact_answer)
        if title is not None:
            views = raw_popularity(title, pageviews)
            if views is not None:
                answer_popularity = normalize(views, normalizer)

    hint_scores = [
        h.familiarity_score for h in scored_hints if h.familiarity_score is not None
    ]
    return replace(
        record,
        hints=tuple(scored_hints),
        q_popularity=q_popularity,
        exact_answer_popularity=answer_popularity,
        familiarity=fmean(hint_scores) if hint_scores else None,
    )


def score_dataset_familiarity(
    records: Sequence[QuestionRecord],
    normalizer: FamiliarityNormalizer,
    pageviews: PageviewService,
    extractor: Optional[EntityExtractor] = None,
    mode: AggregateMode = AggregateMode.AVG,
    resolver: Optional[WikiResolver] = None,
) -> list[QuestionRecord]:
    return [
        score_record_familiarity(
            record, normalizer, pageviews, extractor=extractor, mode=mode, resolver=resolver
        )
        for record in records
    ]


# ---------------------------------------------------------------------------
# Calibration persistence


def load_calibration_corpus(path: str | Path) -> list[tuple[str, float]]:
    """JSONL of {"title", "mean_monthly_views"} -> list of pairs."""
    pairs: list[tuple[str, float]] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordParseError(i, f"corrupt calibration line: {exc.msg}") from exc
            if "title" not in row or "mean_monthly_views" not in row:
                raise RecordParseError(i, "calibration row needs title and mean_monthly_views")
            views = float(row["mean_monthly_views"])
            if views < 0:
                raise RecordParseError(i, "mean_monthly_views must be non-negative")
            pairs.append((str(row["title"]), views))
    return pairs


def fit_normalizer_from_file(path: str | Path) -> FamiliarityNormalizer:
    return fit_normalizer([views for _, views in load_calibration_corpus(path)])


def save_normalizer(normalizer: FamiliarityNormalizer, path: str | Path) -> None:
    payload = {
        "q1": normalizer.q1,
        "q3": normalizer.q3,
        "iqr": normalizer.iqr,
        "lower": normalizer.lower,
        "upper": normalizer.upper,
        "corpus_size": normalizer.corpus_size,
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_normalizer(path: str | Path) -> FamiliarityNormalizer:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return FamiliarityNormalizer(
            q1=float(raw["q1"]),
            q3=float(raw["q3"]),
            iqr=float(raw["iqr"]),
            lower=float(raw["lower"]),
            upper=float(raw["upper"]),
            corpus_size=int(raw["corpus_size"]),
        )
    except KeyError as exc:
        raise ValidationError("normalizer", f"missing field {exc.args[0]!r}") from exc
