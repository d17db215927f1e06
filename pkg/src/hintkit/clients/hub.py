"""Bundles the three services behind one handle, live or replayed."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .base import ParallelismGate, ResponseStore
from .chat import ChatService, HttpChatTransport, replay_chat_transport
from .embedding import (
    EmbeddingService,
    HttpEmbeddingTransport,
    replay_embedding_transport,
)
from .pageviews import (
    PageviewService,
    WikimediaPageviewTransport,
    replay_pageview_transport,
)


@dataclass
class ServiceHub:
    """Chat, embedding, and pageview services sharing one parallelism gate."""

    chat: ChatService
    embeddings: EmbeddingService
    pageviews: PageviewService
    offline: bool = False


def replay_client(fixture_path: str | Path, parallelism: int = 4) -> ServiceHub:
    """All three services answered purely from a recorded fixture file.

    Zero network activity: any digest the fixture lacks raises
    ``FixtureMissingError``.
    """
    store = ResponseStore(fixture_path, readonly=True)
    gate = ParallelismGate(parallelism)
    return ServiceHub(
        chat=ChatService(replay_chat_transport, model_id="replay", store=store, gate=gate),
        embeddings=EmbeddingService(
            replay_embedding_transport, model_id="replay", store=store, gate=gate
        ),
        pageviews=PageviewService(replay_pageview_transport, store=store, gate=gate),
        offline=True,
    )


def live_client(
    chat_base_url: str,
    chat_model: str,
    embed_base_url: str,
    embed_model: str,
    cache_path: str | Path | None = None,
    parallelism: int = 4,
    api_key_env: str = "HINTKIT_API_KEY",
    pageview_base_url: str = "https://wikimedia.org/api/rest_v1",
) -> ServiceHub:
    """HTTP-backed services sharing one append-only response cache."""
    store = ResponseStore(cache_path)
    gate = ParallelismGate(parallelism)
    return ServiceHub(
        chat=ChatService(
            HttpChatTransport(chat_base_url, api_key_env=api_key_env),
            model_id=chat_model,
            store=store,
            gate=gate,
        ),
        embeddings=EmbeddingService(
            HttpEmbeddingTransport(embed_base_url, embed_model, api_key_env=api_key_env),
            model_id=embed_model,
            store=store,
            gate=gate,
        ),
        pageviews=PageviewService(
            WikimediaPageviewTransport(pageview_base_url), store=store, gate=gate
        ),
        offline=False,
    )
