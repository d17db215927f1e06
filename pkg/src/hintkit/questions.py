"""Question admission filters, type classification, and stratified sampling."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Protocol

import requests

from .errors import ClassificationError, TransportError, ValidationError
from .model import (
    MAX_QUESTION_WORDS,
    MIN_QUESTION_WORDS,
    MajorType,
    SourceQuestion,
)
from .prompts import TYPE_PROMPT
from .textnorm import tokenize, word_count

# Fine-grained labels, written as COARSE:fine. ABBR and NUM fold into OTHER;
# the remaining coarse classes map one-to-one.
_TAXONOMY = {
    "ABBR": ("abb", "exp"),
    "DESC": ("def", "desc", "manner", "reason"),
    "ENTY": (
        "animal", "body", "color", "cremat", "currency", "dismed", "event",
        "food", "instru", "lang", "letter", "other", "plant", "product",
        "religion", "sport", "substance", "symbol", "techmeth", "termeq",
        "veh", "word",
    ),
    "HUM": ("desc", "gr", "ind", "title"),
    "LOC": ("city", "country", "mount", "other", "state"),
    "NUM": (
        "code", "count", "date", "dist", "money", "ord", "other", "period",
        "perc", "speed", "temp", "volsize", "weight",
    ),
}

_COARSE_TO_MAJOR = {
    "HUM": MajorType.HUMAN,
    "ENTY": MajorType.ENTITY,
    "LOC": MajorType.LOCATION,
    "DESC": MajorType.DESCRIPTION,
    "NUM": MajorType.OTHER,
    "ABBR": MajorType.OTHER,
}

MINOR_TO_MAJOR: dict[str, MajorType] = {
    f"{coarse}:{fine}": _COARSE_TO_MAJOR[coarse]
    for coarse, fines in _TAXONOMY.items()
    for fine in fines
}


@dataclass(frozen=True)
class QuestionTypeLabel:
    major: MajorType
    minor: str
    confidence: Optional[float] = None

    def __post_init__(self):
        expected = MINOR_TO_MAJOR.get(self.minor)
        if expected is None:
            raise ValidationError("minor", f"unknown fine label {self.minor!r}")
        if expected is not self.major:
            raise ValidationError(
                "minor", f"{self.minor} belongs to {expected.value}, not {self.major.value}"
            )
        if self.confidence is not None and not (0.0 <= self.confidence <= 1.0):
            raise ValidationError("confidence", "must lie in [0, 1]")


class RejectReason(str, Enum):
    TOO_SHORT = "TooShort"
    TOO_LONG = "TooLong"
    NO_QUESTION_MARK = "NoQuestionMark"
    ANSWER_NO_WIKI_PAGE = "AnswerNoWikiPage"
    DESCRIPTION_TYPE = "DescriptionType"


@dataclass(frozen=True)
class AdmissionVerdict:
    accepted: bool
    reason: Optional[RejectReason] = None

    def __post_init__(self):
        if self.accepted == (self.reason is not None):
            raise ValidationError("reason", "present iff not accepted")


class WikiResolver(Protocol):
    def resolve(self, title: str) -> Optional[str]:
        """Resolved article title (one redirect followed) or None if missing."""


class GazetteerResolver:
    """Offline resolver over a {title: canonical title} table."""

    def __init__(self, titles: dict[str, str]):
        self.titles = dict(titles)

    def resolve(self, title: str) -> Optional[str]:
        hit = self.titles.get(title)
        if hit is None and title:
            hit = self.titles.get(title[0].upper() + title[1:])
        if hit is None:
            return None
        # one redirect step
        return self.titles.get(hit, hit)


class HttpWikiResolver:
    """MediaWiki title lookup with redirect following."""

    def __init__(
        self,
        api_url: str = "https://en.wikipedia.org/w/api.php",
        user_agent: str = "hintkit/0.1 (dataset tooling)",
        timeout: float = 30.0,
        max_retries: int = 3,
        session: Optional[requests.Session] = None,
    ):
        self.api_url = api_url
        self.timeout = timeout
        self.max_retries = max_retries
        self.session = session or requests.Session()
        self.session.headers.setdefault("User-Agent", user_agent)

    def resolve(self, title: str) -> Optional[str]:
        params = {
            "action": "query",
            "titles": title,
            "redirects": 1,
            "format": "json",
            "formatversion": 2,
        }
        last_exc: Exception | None = None
        for _ in range(self.max_retries):
            try:
                resp = self.session.get(self.api_url, params=params, timeout=self.timeout)
                resp.raise_for_status()
                pages = resp.json().get("query", {}).get("pages", [])
                if not pages:
                    return None
                page = pages[0]
                if page.get("missing"):
                    return None
                return page.get("title")
            except Exception as exc:  # noqa: BLE001
                last_exc = exc
        raise TransportError(f"wiki lookup failed after {self.max_retries} tries: {last_exc}")


def filter_question(
    question: str, answer: str, wiki_resolver: WikiResolver
) -> AdmissionVerdict:
    """Admission filter: word-count bounds, terminal '?', resolvable answer.

    Resolver transport failures propagate (retryable), they are never turned
    into a rejection.
    """
    n_words = word_count(question)
    if n_words < MIN_QUESTION_WORDS:
        return AdmissionVerdict(False, RejectReason.TOO_SHORT)
    if n_words > MAX_QUESTION_WORDS:
        return AdmissionVerdict(False, RejectReason.TOO_LONG)
    if not question.strip().endswith("?"):
        return AdmissionVerdict(False, RejectReason.NO_QUESTION_MARK)
    if wiki_resolver.resolve(answer) is None:
        return AdmissionVerdict(False, RejectReason.ANSWER_NO_WIKI_PAGE)
    return AdmissionVerdict(True)


def admit_classified(label: QuestionTypeLabel) -> AdmissionVerdict:
    """DESCRIPTION questions are excluded after classification."""
    if label.major is MajorType.DESCRIPTION:
        return AdmissionVerdict(False, RejectReason.DESCRIPTION_TYPE)
    return AdmissionVerdict(True)


# ---------------------------------------------------------------------------
# classifiers

class TypeClassifier(Protocol):
    def classify(self, question: str) -> QuestionTypeLabel: ...


_HOW_QUALIFIERS = {
    "many": "NUM:count",
    "much": "NUM:count",
    "long": "NUM:period",
    "old": "NUM:period",
    "far": "NUM:dist",
    "tall": "NUM:dist",
    "high": "NUM:dist",
    "deep": "NUM:dist",
    "wide": "NUM:dist",
    "fast": "NUM:speed",
    "hot": "NUM:temp",
    "cold": "NUM:temp",
    "heavy": "NUM:weight",
}

_HEAD_NOUNS = {
    "city": "LOC:city", "cities": "LOC:city", "capital": "LOC:city",
    "town": "LOC:city",
    "country": "LOC:country", "countries": "LOC:country", "nation": "LOC:country",
    "state": "LOC:state", "province": "LOC:state",
    "mountain": "LOC:mount", "peak": "LOC:mount", "volcano": "LOC:mount",
    "river": "LOC:other", "lake": "LOC:other", "island": "LOC:other",
    "sea": "LOC:other", "ocean": "LOC:other", "continent": "LOC:other",
    "place": "LOC:other", "location": "LOC:other",
    "person": "HUM:ind", "actor": "HUM:ind", "actress": "HUM:ind",
    "singer": "HUM:ind", "author": "HUM:ind", "writer": "HUM:ind",
    "president": "HUM:ind", "king": "HUM:ind", "queen": "HUM:ind",
    "scientist": "HUM:ind", "artist": "HUM:ind", "player": "HUM:ind",
    "politician": "HUM:ind", "leader": "HUM:ind", "composer": "HUM:ind",
    "team": "HUM:gr", "band": "HUM:gr", "company": "HUM:gr", "group": "HUM:gr",
    "organization": "HUM:gr", "organisation": "HUM:gr",
    "year": "NUM:date", "date": "NUM:date", "day": "NUM:date",
    "month": "NUM:date", "century": "NUM:date", "decade": "NUM:date",
    "number": "NUM:count", "percentage": "NUM:perc",
    "color": "ENTY:color", "colour": "ENTY:color",
    "animal": "ENTY:animal", "bird": "ENTY:animal", "dog": "ENTY:animal",
    "language": "ENTY:lang",
    "sport": "ENTY:sport", "game": "ENTY:sport",
    "food": "ENTY:food", "drink": "ENTY:food", "fruit": "ENTY:food",
    "instrument": "ENTY:instru",
    "currency": "ENTY:currency",
    "religion": "ENTY:religion",
    "plant": "ENTY:plant", "tree": "ENTY:plant", "flower": "ENTY:plant",
    "vehicle": "ENTY:veh", "car": "ENTY:veh", "ship": "ENTY:veh",
    "movie": "ENTY:cremat", "film": "ENTY:cremat", "book": "ENTY:cremat",
    "novel": "ENTY:cremat", "song": "ENTY:cremat", "album": "ENTY:cremat",
    "play": "ENTY:cremat", "opera": "ENTY:cremat", "musical": "ENTY:cremat",
    "disease": "ENTY:dismed", "illness": "ENTY:dismed",
    "element": "ENTY:substance", "metal": "ENTY:substance",
    "event": "ENTY:event", "war": "ENTY:event", "battle": "ENTY:event",
    "word": "ENTY:word", "letter": "ENTY:letter", "symbol": "ENTY:symbol",
    "product": "ENTY:product", "body": "ENTY:body",
}


class KeywordTypeClassifier:
    """Deterministic wh-word/head-noun fallback classifier.

    Rules are intentionally coarse; the LLM-backed classifier is the primary
    implementation and this one keeps the pipeline runnable offline.
    """

    def classify(self, question: str) -> QuestionTypeLabel:
        tokens = tokenize(question)
        if not tokens:
            raise ClassificationError("empty question")
        minor = self._wh_rule(tokens)
        if minor is None:
            minor = self._scan_rule(tokens)
        if minor is None:
            minor = "ENTY:other"
        return QuestionTypeLabel(major=MINOR_TO_MAJOR[minor], minor=minor)

    @staticmethod
    def _wh_rule(tokens: list[str]) -> Optional[str]:
        head = tokens[0]
        if head in ("who", "whom", "whose"):
            return "HUM:ind"
        if head == "where":
            return "LOC:other"
        if head == "when":
            return "NUM:date"
        if head == "why":
            return "DESC:reason"
        if head == "how":
            if len(tokens) > 1 and tokens[1] in _HOW_QUALIFIERS:
                return _HOW_QUALIFIERS[tokens[1]]
            return "DESC:manner"
        return None

    @staticmethod
    def _scan_rule(tokens: list[str]) -> Optional[str]:
        joined = " ".join(tokens)
        if "stand for" in joined:
            return "ABBR:exp"
        if "meaning of" in joined or "definition of" in joined:
            return "DESC:def"
        for i, token in enumerate(tokens):
            if token in ("many", "much") and i > 0 and tokens[i - 1] == "how":
                return "NUM:count"
            hit = _HEAD_NOUNS.get(token)
            if hit is not None:
                return hit
        return None


_LABEL_RE = re.compile(r"\b([A-Z]+):([a-z]+)\b")


class ChatTypeClassifier:
    """LLM-prompted classifier; unparseable output raises, never guesses."""

    def __init__(self, chat_service, template: str = TYPE_PROMPT):
        self.chat = chat_service
        self.template = template

    def classify(self, question: str) -> QuestionTypeLabel:
        prompt = self.template.format(
            question=question,
            major_labels=", ".join(sorted(_TAXONOMY)),
            minor_labels=", ".join(sorted(MINOR_TO_MAJOR)),
        )
        response = self.chat.chat(prompt).response
        for match in _LABEL_RE.finditer(response):
            label = f"{match.group(1)}:{match.group(2)}"
            if label in MINOR_TO_MAJOR:
                return QuestionTypeLabel(major=MINOR_TO_MAJOR[label], minor=label)
        raise ClassificationError(f"no usable label in response: {response!r}")


def classify_type(question: str, classifier: TypeClassifier) -> QuestionTypeLabel:
    return classifier.classify(question)


# ---------------------------------------------------------------------------
# stratified sampling

def stratified_sample(
    records: list[SourceQuestion], fraction: float, seed: int
) -> list[SourceQuestion]:
    """Sample ``round(fraction * N)`` rows, proportionally per major class.

    Largest-remainder rounding keeps every class within one of its exact
    proportional share. Output preserves input order; identical inputs and
    seed give identical samples.
    """
    if not (0.0 < fraction <= 1.0):
        raise ValidationError("fraction", f"{fraction} outside (0, 1]")
    if not records:
        return []
    by_class: dict[str, list[int]] = {}
    for i, row in enumerate(records):
        if row.major_type is None:
            raise ValidationError("major_type", f"row {row.q_id} is unclassified")
        by_class.setdefault(row.major_type.value, []).append(i)

    target = round(fraction * len(records))
    quotas: dict[str, int] = {}
    remainders: list[tuple[float, str]] = []
    for name, indices in by_class.items():
        exact = fraction * len(indices)
        quotas[name] = math.floor(exact)
        remainders.append((exact - math.floor(exact), name))
    leftover = target - sum(quotas.values())
    for _, name in sorted(remainders, key=lambda pair: (-pair[0], pair[1]))[:leftover]:
        quotas[name] += 1

    rng = random.Random(seed)
    chosen: list[int] = []
    for name in sorted(by_class):
        chosen.extend(rng.sample(by_class[name], quotas[name]))
    return [records[i] for i in sorted(chosen)]
