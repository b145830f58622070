"""Single choke-point for generative-model and embedding calls.

Every prompt in the engine flows through :meth:`Gateway.chat`; tests use the
deterministic scripted backend, production wires an OpenAI-style HTTP
backend. Embeddings share the same gateway so the scripted backend can serve
hash-seeded unit vectors.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import httpx
import numpy as np

from .errors import (
    BackendUnreachableError,
    NoJsonFoundError,
    RetryExhaustedError,
    ScriptedExhaustedError,
)

DEFAULT_EMBED_DIM = 32


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str


@dataclass(frozen=True)
class ChatRequest:
    messages: tuple[ChatMessage, ...]
    temperature: float = 0.7
    max_tokens: int | None = None
    tag: str = ""

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("a chat request needs at least one message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    @property
    def text(self) -> str:
        return "\n".join(m.content for m in self.messages)


@dataclass
class ScriptEntry:
    """One canned response, matched on tag and/or content substring."""

    response: str
    tag: str | None = None
    contains: str | None = None
    max_uses: int | None = None
    uses: int = field(default=0, compare=False)

    def matches(self, request: ChatRequest) -> bool:
        if self.max_uses is not None and self.uses >= self.max_uses:
            return False
        if self.tag is not None and request.tag != self.tag:
            return False
        if self.contains is not None and self.contains not in request.text:
            return False
        return True


class ScriptedBackend:
    """Deterministic test double: first matching entry wins, in script order.

    Matching is serialized so the request/response log of a run is a pure
    function of (script, request sequence).
    """

    kind = "scripted"

    def __init__(self, entries: Sequence[ScriptEntry], embed_dim: int = DEFAULT_EMBED_DIM):
        self.entries = list(entries)
        self.embed_dim = embed_dim
        self._lock = threading.Lock()

    def complete(self, request: ChatRequest) -> str:
        with self._lock:
            for entry in self.entries:
                if entry.matches(request):
                    entry.uses += 1
                    return entry.response
        raise ScriptedExhaustedError(
            f"no scripted entry matches tag={request.tag!r} (content head: {request.text[:80]!r})"
        )

    def embed(self, text: str) -> list[float]:
        return _hash_unit_vector(text, self.embed_dim)


class RemoteBackend:
    """OpenAI-style chat-completions endpoint behind base_url."""

    kind = "remote"

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str = "",
        embed_model: str = "",
        embed_dim: int = DEFAULT_EMBED_DIM,
        timeout: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.embed_model = embed_model or model
        self.embed_dim = embed_dim
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}

    def complete(self, request: ChatRequest) -> str:
        payload: dict[str, Any] = {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
        }
        if request.max_tokens is not None:
            payload["max_tokens"] = request.max_tokens
        try:
            resp = self._client.post(
                f"{self.base_url}/chat/completions", json=payload, headers=self._headers
            )
        except httpx.HTTPError as exc:
            raise BackendUnreachableError(str(exc)) from exc
        if resp.status_code >= 500:
            raise BackendUnreachableError(f"server error {resp.status_code}")
        if resp.status_code >= 400:
            raise RetryExhaustedError(f"request rejected: {resp.status_code} {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, json.JSONDecodeError) as exc:
            raise BackendUnreachableError(f"malformed completion payload: {exc}") from exc

    def embed(self, text: str) -> list[float]:
        try:
            resp = self._client.post(
                f"{self.base_url}/embeddings",
                json={"model": self.embed_model, "input": text},
                headers=self._headers,
            )
        except httpx.HTTPError as exc:
            raise BackendUnreachableError(str(exc)) from exc
        if resp.status_code >= 400:
            raise BackendUnreachableError(f"embedding error {resp.status_code}")
        try:
            return [float(x) for x in resp.json()["data"][0]["embedding"]]
        except (KeyError, IndexError, json.JSONDecodeError) as exc:
            raise BackendUnreachableError(f"malformed embedding payload: {exc}") from exc


class TagRoutingBackend:
    """Dispatches by request-tag prefix so e.g. reasoning-heavy tags can use a
    stronger model; unmatched tags fall through to the default backend."""

    def __init__(
        self,
        default: "ScriptedBackend | RemoteBackend",
        routes: dict[str, "ScriptedBackend | RemoteBackend"] | None = None,
    ):
        self.default = default
        self.routes = dict(routes or {})

    @property
    def kind(self) -> str:
        return self.default.kind

    @property
    def embed_dim(self) -> int:
        return self.default.embed_dim

    def _pick(self, tag: str):
        matches = [prefix for prefix in self.routes if tag.startswith(prefix)]
        if not matches:
            return self.default
        return self.routes[max(matches, key=len)]

    def complete(self, request: ChatRequest) -> str:
        return self._pick(request.tag).complete(request)

    def embed(self, text: str) -> list[float]:
        return self.default.embed(text)


class Gateway:
    """Routes chat/embedding calls to a backend with retry and call logging."""

    def __init__(
        self,
        backend: ScriptedBackend | RemoteBackend,
        max_retries: int = 3,
        backoff_s: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.backend = backend
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self._sleep = sleep
        self._lock = threading.Lock()
        self.call_log: list[tuple[ChatRequest, str]] = []

    @property
    def call_count(self) -> int:
        return len(self.call_log)

    def chat(self, request: ChatRequest) -> str:
        attempts = 0
        while True:
            try:
                response = self.backend.complete(request)
                with self._lock:
                    self.call_log.append((request, response))
                return response
            except ScriptedExhaustedError:
                raise
            except BackendUnreachableError:
                attempts += 1
                if attempts > self.max_retries:
                    raise RetryExhaustedError(
                        f"backend unreachable after {self.max_retries} retries (tag={request.tag})"
                    )
                self._sleep(self.backoff_s * (2 ** (attempts - 1)))

    def ask(
        self,
        tag: str,
        prompt: str,
        system: str | None = None,
        temperature: float = 0.7,
    ) -> str:
        messages: list[ChatMessage] = []
        if system:
            messages.append(ChatMessage("system", system))
        messages.append(ChatMessage("user", prompt))
        return self.chat(ChatRequest(tuple(messages), temperature=temperature, tag=tag))

    def ask_json(self, tag: str, prompt: str, temperature: float = 0.7) -> Any:
        """One repair-retry: re-prompt with the parse error appended."""
        text = self.ask(tag, prompt, temperature=temperature)
        try:
            return extract_json(text)
        except NoJsonFoundError as exc:
            repair = (
                f"{prompt}\n\nYour previous reply could not be parsed ({exc}). "
                "Reply again with a single valid JSON object and nothing else."
            )
            text = self.ask(tag, repair, temperature=temperature)
            return extract_json(text)

    def embed(self, text: str) -> list[float]:
        if not text:
            raise ValueError("cannot embed empty text")
        try:
            return self.backend.embed(text)
        except BackendUnreachableError:
            raise

    @property
    def embed_dim(self) -> int:
        return self.backend.embed_dim

    def requests_tagged(self, tag: str) -> list[ChatRequest]:
        with self._lock:
            return [req for req, _ in self.call_log if req.tag == tag]


def extract_json(text: str) -> Any:
    """First syntactically valid JSON object in the text.

    Tolerates surrounding prose and fenced code blocks: scans every '{' from
    the left and takes the longest object parseable from the first position
    that yields one.
    """
    decoder = json.JSONDecoder()
    for start, ch in enumerate(text):
        if ch != "{":
            continue
        try:
            value, _ = decoder.raw_decode(text[start:])
        except json.JSONDecodeError:
            continue
        if isinstance(value, dict):
            return value
    raise NoJsonFoundError("no JSON object found in model output")


def _hash_unit_vector(text: str, dim: int) -> list[float]:
    seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(dim)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:  # astronomically unlikely; keep the contract anyway
        vec[0] = 1.0
        norm = 1.0
    return [float(x) for x in vec / norm]


def scripted_gateway(entries: Sequence[ScriptEntry], embed_dim: int = DEFAULT_EMBED_DIM) -> Gateway:
    return Gateway(ScriptedBackend(entries, embed_dim=embed_dim))
