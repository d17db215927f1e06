"""Chat-completion client: provider-agnostic prompt -> text with caching."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Callable, Optional

import requests

from ..errors import FixtureMissingError, TransportError
from .base import ParallelismGate, ResponseStore, chat_digest

# transport(prompt, params, digest) -> response text
ChatTransport = Callable[[str, dict, str], str]


@dataclass(frozen=True)
class ChatTranscript:
    """One prompt/response exchange, content-addressed by request digest."""

    prompt: str
    response: str
    model_id: str
    request_digest: str


class ChatService:
    """Caching front of a chat transport.

    For any (model, prompt, params) at most one transport call is ever made;
    later calls are served bit-identically from the store.
    """

    def __init__(
        self,
        transport: ChatTransport,
        model_id: str,
        store: Optional[ResponseStore] = None,
        gate: Optional[ParallelismGate] = None,
    ):
        self.transport = transport
        self.model_id = model_id
        self.store = store if store is not None else ResponseStore()
        self.gate = gate

    def chat(self, prompt: str, params: dict | None = None) -> ChatTranscript:
        params = dict(params or {})
        digest = chat_digest(self.model_id, prompt, params)
        entry = self.store.get(digest)
        if entry is not None:
            text = entry["response"]["text"]
        else:
            if self.gate is not None:
                with self.gate:
                    text = self.transport(prompt, params, digest)
            else:
                text = self.transport(prompt, params, digest)
            if not self.store.readonly:
                self.store.put(digest, "chat", {"text": text})
        return ChatTranscript(
            prompt=prompt, response=text, model_id=self.model_id, request_digest=digest
        )


class HttpChatTransport:
    """JSON-over-HTTP chat endpoint: POST {base_url}/chat.

    Request body: {"model", "prompt", "params"}; response body: {"text"}.
    Bearer auth is read from ``api_key_env`` when that variable is set.
    """

    def __init__(
        self,
        base_url: str,
        api_key_env: str = "HINTKIT_API_KEY",
        timeout: float = 60.0,
        max_retries: int = 3,
        session: Optional[requests.Session] = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.timeout = timeout
        self.max_retries = max_retries
        self.session = session or requests.Session()

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.api_key_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def __call__(self, prompt: str, params: dict, digest: str) -> str:
        body = {"prompt": prompt, "params": params}
        last_exc: Exception | None = None
        for _ in range(self.max_retries):
            try:
                resp = self.session.post(
                    f"{self.base_url}/chat",
                    json=body,
                    headers=self._headers(),
                    timeout=self.timeout,
                )
                resp.raise_for_status()
                payload = resp.json()
                if "text" not in payload:
                    raise TransportError("chat response missing 'text'")
                return payload["text"]
            except TransportError:
                raise
            except Exception as exc:  # noqa: BLE001 - network failures vary
                last_exc = exc
        raise TransportError(f"chat request failed after {self.max_retries} tries: {last_exc}")


def replay_chat_transport(prompt: str, params: dict, digest: str) -> str:
    """Offline transport: every miss is an error, never a network call."""
    raise FixtureMissingError(digest, "chat")


def make_chat_service(
    base_url: str,
    model_id: str,
    store: Optional[ResponseStore] = None,
    gate: Optional[ParallelismGate] = None,
    api_key_env: str = "HINTKIT_API_KEY",
) -> ChatService:
    transport = HttpChatTransport(base_url, api_key_env=api_key_env)
    return ChatService(transport, model_id, store=store, gate=gate)
