"""Shared test doubles and record factories."""

from __future__ import annotations

from pathlib import Path

import pytest

from hintkit.clients.chat import ChatService
from hintkit.clients.embedding import EmbeddingService
from hintkit.clients.pageviews import PageviewService
from hintkit.model import EntityMention, Hint, MajorType, QuestionRecord

FIXTURES = Path(__file__).parent / "fixtures"


def scripted_chat(responses: dict[str, str], model_id: str = "test-chat") -> ChatService:
    """Chat service answering from a fixed prompt -> text table."""

    def transport(prompt: str, params: dict, digest: str) -> str:
        if prompt not in responses:
            raise AssertionError(f"unscripted prompt: {prompt!r}")
        return responses[prompt]

    return ChatService(transport, model_id)


def stub_embeddings(
    table: dict[str, list[float]], model_id: str = "test-embed"
) -> EmbeddingService:
    """Embedding service answering from a fixed text -> vector table."""

    def transport(text: str, digest: str) -> list:
        if text not in table:
            raise AssertionError(f"no stub vector for text: {text!r}")
        return table[text]

    return EmbeddingService(transport, model_id)


def stub_pageviews(
    months_by_title: dict[str, list[tuple[str, int]]]
) -> PageviewService:
    """Pageview service with canned monthly series; unknown titles are 404s."""

    def transport(title: str, start: str, end: str, digest: str) -> dict:
        series = months_by_title.get(title)
        if series is None:
            return {"missing": True}
        return {"months": [{"month": m, "views": v} for m, v in series]}

    return PageviewService(transport)


def make_hint(text: str = "This is a perfectly ordinary clue sentence.", **kwargs) -> Hint:
    return Hint(text=text, **kwargs)


def make_record(
    q_id: str = "q1",
    question: str = "Which river flows through the city of Paris?",
    exact_answer: str = "Seine",
    major_type: MajorType = MajorType.LOCATION,
    minor_type: str = "LOC:other",
    hints: tuple = None,
    **kwargs,
) -> QuestionRecord:
    if hints is None:
        hints = (make_hint(),)
    return QuestionRecord(
        q_id=q_id,
        question=question,
        exact_answer=exact_answer,
        major_type=major_type,
        minor_type=minor_type,
        hints=hints,
        **kwargs,
    )


def make_entity(surface: str = "Paris", wiki_title: str = "Paris") -> EntityMention:
    return EntityMention(surface=surface, wiki_title=wiki_title)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
