"""Sentence-embedding client with the same caching/replay contract as chat."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional

import requests

from ..errors import FixtureMissingError, TransportError, ValidationError
from .base import ParallelismGate, ResponseStore, embed_digest

# transport(text, digest) -> list of floats
EmbeddingTransport = Callable[[str, str], list]


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != self.dim:
            raise ValidationError("dim", f"{len(self.values)} values for dim {self.dim}")
        if self.dim <= 0:
            raise ValidationError("dim", "must be positive")
        for v in self.values:
            if not math.isfinite(v):
                raise ValidationError("values", f"non-finite component {v!r}")


def vector(values) -> EmbeddingVector:
    vals = tuple(float(v) for v in values)
    return EmbeddingVector(values=vals, dim=len(vals))


class EmbeddingService:
    """Caching front of an embedding transport; one dim per configured model."""

    def __init__(
        self,
        transport: EmbeddingTransport,
        model_id: str,
        store: Optional[ResponseStore] = None,
        gate: Optional[ParallelismGate] = None,
    ):
        self.transport = transport
        self.model_id = model_id
        self.store = store if store is not None else ResponseStore()
        self.gate = gate
        self._dim: Optional[int] = None

    def embed(self, text: str) -> EmbeddingVector:
        digest = embed_digest(self.model_id, text)
        entry = self.store.get(digest)
        if entry is not None:
            values = entry["response"]["vector"]
        else:
            if self.gate is not None:
                with self.gate:
                    values = self.transport(text, digest)
            else:
                values = self.transport(text, digest)
            if not self.store.readonly:
                self.store.put(digest, "embed", {"vector": list(values)})
        vec = vector(values)
        if self._dim is None:
            self._dim = vec.dim
        elif vec.dim != self._dim:
            raise ValidationError(
                "dim", f"model {self.model_id} returned dim {vec.dim}, expected {self._dim}"
            )
        return vec


class HttpEmbeddingTransport:
    """JSON-over-HTTP embedding endpoint: POST {base_url}/embed.

    Request body: {"model", "input"}; response body: {"embedding": [...]}.
    """

    def __init__(
        self,
        base_url: str,
        model_id: str,
        api_key_env: str = "HINTKIT_API_KEY",
        timeout: float = 60.0,
        max_retries: int = 3,
        session: Optional[requests.Session] = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_retries = max_retries
        self.session = session or requests.Session()

    def __call__(self, text: str, digest: str) -> list:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.api_key_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {"model": self.model_id, "input": text}
        last_exc: Exception | None = None
        for _ in range(self.max_retries):
            try:
                resp = self.session.post(
                    f"{self.base_url}/embed", json=body, headers=headers, timeout=self.timeout
                )
                resp.raise_for_status()
                payload = resp.json()
                if "embedding" not in payload:
                    raise TransportError("embed response missing 'embedding'")
                return payload["embedding"]
            except TransportError:
                raise
            except Exception as exc:  # noqa: BLE001
                last_exc = exc
        raise TransportError(f"embed request failed after {self.max_retries} tries: {last_exc}")


def replay_embedding_transport(text: str, digest: str) -> list:
    raise FixtureMissingError(digest, "embed")


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine of two embedding vectors; raises on a zero vector."""
    if a.dim != b.dim:
        raise ValidationError("dim", f"mismatched dims {a.dim} != {b.dim}")
    dot = sum(x * y for x, y in zip(a.values, b.values))
    na = math.sqrt(sum(x * x for x in a.values))
    nb = math.sqrt(sum(y * y for y in b.values))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("values", "cosine similarity undefined for a zero vector")
    return dot / (na * nb)
