"""Tokenization, phrase normalization, stopwords, and the rule-based lemmatizer.

Everything here is deterministic and dependency-free so that the leakage
filter and answer matching behave identically across machines and runs.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

# Word tokens: letters/digits with an optional apostrophe contraction
# ("don't", "o'clock"). Underscore is excluded on purpose.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)?")

_LEADING_ARTICLES = ("a", "an", "the")

# Consonants that shed their doubling when -ing/-ed is stripped
# (running -> run). 'l'/'s'/'z' stay doubled (telling, kissing, buzzing).
_UNDOUBLE = set("bdgkmnprt")
_VOWELS = set("aeiou")


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens of ``text``; punctuation is discarded."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def word_count(text: str) -> int:
    """Whitespace-delimited word count; trailing question marks do not count."""
    return len(text.strip().rstrip("?").split())


def strip_leading_articles(tokens: list[str]) -> list[str]:
    out = list(tokens)
    while out and out[0] in _LEADING_ARTICLES:
        out = out[1:]
    return out


def normalized_tokens(text: str) -> list[str]:
    """Tokens for fuzzy answer comparison: lowercase, punctuation stripped,
    leading articles removed."""
    return strip_leading_articles(tokenize(text))


def normalize_phrase(text: str) -> str:
    """Canonical single-string form of ``normalized_tokens`` (space-joined)."""
    return " ".join(normalized_tokens(text))


def contains_contiguous(haystack: list[str], needle: list[str]) -> bool:
    """True iff ``needle`` occurs as a contiguous sub-sequence of ``haystack``.

    Empty lists never match: a blank phrase is not contained in anything.
    """
    if not needle or not haystack or len(needle) > len(haystack):
        return False
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i:i + len(needle)] == needle:
            return True
    return False


def _load_wordlist(name: str) -> list[str]:
    text = resources.files("hintkit.data").joinpath(name).read_text("utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    """The bundled English stopword set (lowercase)."""
    return frozenset(_load_wordlist("stopwords.txt"))


@lru_cache(maxsize=None)
def _lemma_exceptions() -> dict[str, str]:
    table = {}
    for line in _load_wordlist("lemma_exceptions.txt"):
        form, lemma = line.split()
        table[form] = lemma
    return table


def _repair_stem(stem: str) -> str:
    """Fix up a stem after stripping -ing/-ed."""
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
        return stem[:-1]
    if len(stem) < 3:
        return stem + "e"
    # A consonant-vowel-consonant tail usually lost a silent 'e' (mak-, hop-).
    if (stem[-1] not in _VOWELS and stem[-1] not in "wxy"
            and stem[-2] in _VOWELS and stem[-3] not in _VOWELS):
        return stem + "e"
    return stem


def lemmatize(token: str) -> str:
    """Map a single word to its dictionary lemma.

    Irregular forms come from the bundled exception table; everything else
    goes through plural and -ing/-ed suffix rules with doubling repair.
    Unknown words map to themselves.
    """
    w = token.lower()
    hit = _lemma_exceptions().get(w)
    if hit is not None:
        return hit
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(("sses", "ches", "shes", "xes", "zes", "oes")) and len(w) > 4:
        return w[:-2]
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("s") and len(w) > 3 and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    if w.endswith("ing") and len(w) > 5:
        return _repair_stem(w[:-3])
    if w.endswith("ed") and len(w) > 4:
        return _repair_stem(w[:-2])
    return w


def lemma_set(text: str, drop_stopwords: bool = False) -> set[str]:
    """Set of lemmas for every token of ``text``.

    With ``drop_stopwords`` the stopword check runs on the surface token,
    before lemmatization.
    """
    tokens = tokenize(text)
    if drop_stopwords:
        sw = stopwords()
        tokens = [t for t in tokens if t not in sw]
    return {lemmatize(t) for t in tokens}
