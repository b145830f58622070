"""Web-search provider interface with a remote client and an offline fixture."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import ProviderUnreachableError


@dataclass(frozen=True)
class SearchHit:
    title: str
    url: str
    snippet: str


class SearchProvider(Protocol):
    def search(self, query: str, max_results: int = 5) -> list[SearchHit]: ...


class FixtureSearchProvider:
    """Resolves queries against a local corpus by keyword overlap.

    Score = number of distinct query terms present in the document; ties break
    by document name so rankings are stable.
    """

    def __init__(self, corpus: dict[str, str]):
        self.corpus = dict(corpus)

    @classmethod
    def from_directory(cls, path: str | Path) -> "FixtureSearchProvider":
        corpus = {}
        for file in sorted(Path(path).glob("*.txt")):
            corpus[file.stem] = file.read_text(encoding="utf-8")
        return cls(corpus)

    def search(self, query: str, max_results: int = 5) -> list[SearchHit]:
        terms = {t for t in re.findall(r"[a-z0-9]+", query.lower()) if t}
        scored: list[tuple[int, str]] = []
        for name, text in self.corpus.items():
            words = set(re.findall(r"[a-z0-9]+", text.lower()))
            overlap = len(terms & words)
            if overlap > 0:
                scored.append((overlap, name))
        scored.sort(key=lambda pair: (-pair[0], pair[1]))
        return [
            SearchHit(title=name, url=f"fixture://{name}", snippet=self.corpus[name][:280])
            for _, name in scored[:max_results]
        ]


class RemoteSearchProvider:
    """Thin client for a JSON search API: POST {query, max_results} -> {results}."""

    def __init__(self, endpoint: str, api_key: str = "", timeout: float = 20.0,
                 transport: httpx.BaseTransport | None = None):
        self.endpoint = endpoint
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}

    def search(self, query: str, max_results: int = 5) -> list[SearchHit]:
        try:
            resp = self._client.post(
                self.endpoint,
                json={"query": query, "max_results": max_results},
                headers=self._headers,
            )
        except httpx.HTTPError as exc:
            raise ProviderUnreachableError(str(exc)) from exc
        if resp.status_code >= 400:
            raise ProviderUnreachableError(f"search provider returned {resp.status_code}")
        results = resp.json().get("results", [])
        return [
            SearchHit(
                title=str(r.get("title", "")),
                url=str(r.get("url", "")),
                snippet=str(r.get("content", r.get("snippet", ""))),
            )
            for r in results[:max_results]
        ]
