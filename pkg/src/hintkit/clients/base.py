"""Shared client plumbing: request digests, the content-addressed response
store, and bounded-parallelism helpers.

Every remote interaction is keyed by a sha256 digest of its canonical
request, stored write-once in an append-only JSONL file. A recorded store
doubles as a replay fixture for fully offline runs.
"""

from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence

from ..errors import RecordParseError, ValidationError


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=True, separators=(",", ":"))


def request_digest(kind: str, **identity: Any) -> str:
    """sha256 hex digest of a request identity; pure function of its inputs."""
    return hashlib.sha256(_canonical({"kind": kind, **identity}).encode()).hexdigest()


def chat_digest(model_id: str, prompt: str, params: dict | None = None) -> str:
    return request_digest("chat", model=model_id, prompt=prompt, params=params or {})


def embed_digest(model_id: str, text: str) -> str:
    return request_digest("embed", model=model_id, text=text)


def pageview_digest(
    title: str,
    start: str,
    end: str,
    project: str = "en.wikipedia",
    access: str = "all-access",
    agent: str = "user",
    granularity: str = "monthly",
) -> str:
    return request_digest(
        "pageviews",
        project=project,
        access=access,
        agent=agent,
        title=title,
        granularity=granularity,
        start=start,
        end=end,
    )


class ResponseStore:
    """Append-only store of responses keyed by request digest.

    Write-once semantics: a digest can be stored once; storing the same
    payload again is a no-op, storing a different payload is an error.
    Reads are lock-free; writes are serialized.
    """

    def __init__(self, path: str | Path | None = None, readonly: bool = False):
        self.path = Path(path) if path is not None else None
        self.readonly = readonly
        self._entries: dict[str, dict] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        if self.path is not None and self.path.exists():
            self._load(self.path)

    def _load(self, path: Path) -> None:
        with open(path, encoding="utf-8") as fh:
            for i, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise RecordParseError(i, f"corrupt store line: {exc.msg}") from exc
                digest = entry.get("digest")
                if not digest or "kind" not in entry or "response" not in entry:
                    raise RecordParseError(
                        i, f"corrupt store entry for digest {digest!r}"
                    )
                self._entries[digest] = {
                    "kind": entry["kind"],
                    "response": entry["response"],
                }

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, digest: str) -> bool:
        return digest in self._entries

    def get(self, digest: str) -> Optional[dict]:
        entry = self._entries.get(digest)
        with self._lock:
            if entry is None:
                self.misses += 1
            else:
                self.hits += 1
        return entry

    def put(self, digest: str, kind: str, response: Any) -> None:
        if self.readonly:
            raise ValidationError("store", "attempted write to a read-only store")
        with self._lock:
            existing = self._entries.get(digest)
            entry = {"kind": kind, "response": response}
            if existing is not None:
                if existing != entry:
                    raise ValidationError(
                        "store", f"conflicting write for digest {digest}"
                    )
                return
            self._entries[digest] = entry
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(
                        json.dumps(
                            {"digest": digest, "kind": kind, "response": response},
                            ensure_ascii=True,
                            separators=(",", ":"),
                        )
                        + "\n"
                    )

    def stats(self) -> dict:
        total = self.hits + self.misses
        return {
            "entries": len(self._entries),
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": (self.hits / total) if total else 0.0,
        }


class ParallelismGate:
    """Caps the number of requests in flight across all sharing clients."""

    def __init__(self, limit: int):
        if limit < 1:
            raise ValidationError("parallelism", "limit must be >= 1")
        self.limit = limit
        self._sem = threading.BoundedSemaphore(limit)

    def __enter__(self):
        self._sem.acquire()
        return self

    def __exit__(self, *exc_info):
        self._sem.release()
        return False


def parallel_map(
    fn: Callable, items: Sequence, workers: int = 4
) -> list:
    """Apply ``fn`` to every item on a small thread pool, preserving order.

    Exceptions propagate after all submitted work settles.
    """
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
