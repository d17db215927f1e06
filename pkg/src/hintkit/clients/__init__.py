from .base import (
    ParallelismGate,
    ResponseStore,
    chat_digest,
    embed_digest,
    pageview_digest,
    parallel_map,
    request_digest,
)
from .chat import ChatService, ChatTranscript, HttpChatTransport
from .embedding import (
    EmbeddingService,
    EmbeddingVector,
    HttpEmbeddingTransport,
    cosine_similarity,
    vector,
)
from .pageviews import (
    VIEW_WINDOW_END,
    VIEW_WINDOW_END_DAY,
    VIEW_WINDOW_START,
    VIEW_WINDOW_START_DAY,
    MonthCount,
    PageviewService,
    WikimediaPageviewTransport,
)
from .hub import ServiceHub, live_client, replay_client

__all__ = [
    "ParallelismGate",
    "ResponseStore",
    "chat_digest",
    "embed_digest",
    "pageview_digest",
    "parallel_map",
    "request_digest",
    "ChatService",
    "ChatTranscript",
    "HttpChatTransport",
    "EmbeddingService",
    "EmbeddingVector",
    "HttpEmbeddingTransport",
    "cosine_similarity",
    "vector",
    "MonthCount",
    "PageviewService",
    "WikimediaPageviewTransport",
    "VIEW_WINDOW_START",
    "VIEW_WINDOW_END",
    "VIEW_WINDOW_START_DAY",
    "VIEW_WINDOW_END_DAY",
    "ServiceHub",
    "live_client",
    "replay_client",
]
