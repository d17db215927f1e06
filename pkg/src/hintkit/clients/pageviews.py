"""Wikipedia pageview client (per-article monthly counts) with caching.

Access profile is fixed to per-article / monthly / all-access / agent=user.
Article-missing (HTTP 404) is a distinct signal from transport failure and
is cached like any other response so the API is hit at most once per title.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional
from urllib.parse import quote

import requests

from ..errors import ArticleMissingError, FixtureMissingError, TransportError, ValidationError
from .base import ParallelismGate, ResponseStore, pageview_digest

# Observation window used throughout the toolkit (inclusive months).
VIEW_WINDOW_START = "2015-01"
VIEW_WINDOW_END = "2023-12"
VIEW_WINDOW_START_DAY = "20150101"
VIEW_WINDOW_END_DAY = "20231231"

# transport(title, start, end, digest) -> {"months": [...]} or {"missing": True}
PageviewTransport = Callable[[str, str, str, str], dict]


@dataclass(frozen=True)
class MonthCount:
    """Views for one calendar month, inside the toolkit's observation window."""

    month: str  # YYYY-MM
    views: int

    def __post_init__(self):
        if len(self.month) != 7 or self.month[4] != "-":
            raise ValidationError("month", f"expected YYYY-MM, got {self.month!r}")
        if not (VIEW_WINDOW_START <= self.month <= VIEW_WINDOW_END):
            raise ValidationError(
                "month",
                f"{self.month} outside [{VIEW_WINDOW_START}, {VIEW_WINDOW_END}]",
            )
        if self.views < 0:
            raise ValidationError("views", "must be non-negative")


class PageviewService:
    """Caching front of a pageview transport."""

    def __init__(
        self,
        transport: PageviewTransport,
        store: Optional[ResponseStore] = None,
        gate: Optional[ParallelismGate] = None,
        project: str = "en.wikipedia",
    ):
        self.transport = transport
        self.store = store if store is not None else ResponseStore()
        self.gate = gate
        self.project = project

    def monthly_pageviews(
        self,
        article_title: str,
        start: str = VIEW_WINDOW_START_DAY,
        end: str = VIEW_WINDOW_END_DAY,
    ) -> list[MonthCount]:
        if start > end:
            raise ValidationError("start", f"start {start} after end {end}")
        digest = pageview_digest(article_title, start, end, project=self.project)
        entry = self.store.get(digest)
        if entry is not None:
            payload = entry["response"]
        else:
            if self.gate is not None:
                with self.gate:
                    payload = self.transport(article_title, start, end, digest)
            else:
                payload = self.transport(article_title, start, end, digest)
            if not self.store.readonly:
                self.store.put(digest, "pageviews", payload)
        if payload.get("missing"):
            raise ArticleMissingError(article_title)
        return [
            MonthCount(month=item["month"], views=int(item["views"]))
            for item in payload["months"]
        ]


class WikimediaPageviewTransport:
    """GET /metrics/pageviews/per-article/{project}/all-access/user/{title}/monthly/{start}/{end}."""

    def __init__(
        self,
        base_url: str = "https://wikimedia.org/api/rest_v1",
        project: str = "en.wikipedia",
        user_agent: str = "hintkit/0.1 (dataset tooling)",
        timeout: float = 30.0,
        max_retries: int = 3,
        session: Optional[requests.Session] = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.project = project
        self.timeout = timeout
        self.max_retries = max_retries
        self.session = session or requests.Session()
        self.session.headers.setdefault("User-Agent", user_agent)

    def _url(self, title: str, start: str, end: str) -> str:
        encoded = quote(title.replace(" ", "_"), safe="")
        return (
            f"{self.base_url}/metrics/pageviews/per-article/{self.project}"
            f"/all-access/user/{encoded}/monthly/{start}/{end}"
        )

    def __call__(self, title: str, start: str, end: str, digest: str) -> dict:
        url = self._url(title, start, end)
        last_exc: Exception | None = None
        for _ in range(self.max_retries):
            try:
                resp = self.session.get(url, timeout=self.timeout)
                if resp.status_code == 404:
                    return {"missing": True}
                resp.raise_for_status()
                items = resp.json().get("items", [])
                months = [
                    {
                        "month": f"{item['timestamp'][0:4]}-{item['timestamp'][4:6]}",
                        "views": int(item["views"]),
                    }
                    for item in items
                ]
                return {"months": months}
            except Exception as exc:  # noqa: BLE001
                last_exc = exc
        raise TransportError(
            f"pageview request failed after {self.max_retries} tries: {last_exc}"
        )


def replay_pageview_transport(title: str, start: str, end: str, digest: str) -> dict:
    raise FixtureMissingError(digest, "pageviews")
