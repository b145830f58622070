"""Retrieval-grounded simulated learner.

The learner answers strictly from its knowledge base: retrieved chunks are
relevance-graded yes/no, and with no relevant chunk it admits confusion
instead of inventing an answer. Teaching content enters the knowledge base
through :meth:`SimulatedLearner.learn`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Protocol

import numpy as np

from . import prompts
from .errors import FetchFailedError, InvalidChunkParamsError
from .gateway import Gateway

CHUNK_SIZE = 500
CHUNK_OVERLAP = 200
RETRIEVAL_K = 4


def chunk(text: str, size: int = CHUNK_SIZE, overlap: int = CHUNK_OVERLAP) -> list[str]:
    """Sliding-window character chunks at stride (size - overlap).

    Every chunk is at most `size` long; consecutive chunks share exactly
    `overlap` characters (the final chunk may be shorter); concatenating the
    chunks with overlaps dropped reconstructs the text.
    """
    if not 0 <= overlap < size:
        raise InvalidChunkParamsError(f"need 0 <= overlap < size, got size={size} overlap={overlap}")
    if not text:
        return []
    stride = size - overlap
    chunks: list[str] = []
    start = 0
    while True:
        end = min(start + size, len(text))
        chunks.append(text[start:end])
        if end == len(text):
            return chunks
        start += stride


class LearnerState(str, Enum):
    CONFUSION = "confusion"
    LEARNING = "learning"
    RESPONSE = "response"


class Fetcher(Protocol):
    def fetch(self, url: str) -> str: ...


class FixtureFetcher:
    """Offline URL fetcher resolving against a fixed corpus."""

    def __init__(self, corpus: dict[str, str]):
        self.corpus = dict(corpus)

    @classmethod
    def from_directory(cls, path: str | Path) -> "FixtureFetcher":
        corpus = {}
        for file in sorted(Path(path).glob("*.txt")):
            corpus[f"fixture://{file.stem}"] = file.read_text(encoding="utf-8")
        return cls(corpus)

    def fetch(self, url: str) -> str:
        if url not in self.corpus:
            raise FetchFailedError(f"no fixture for {url}")
        return self.corpus[url]


@dataclass
class LearnerKB:
    chunks: list[tuple[str, str]] = field(default_factory=list)  # (text, source)
    vectors: list[list[float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.chunks)


class SimulatedLearner:
    def __init__(
        self,
        gateway: Gateway,
        knowledge: str = "",
        knowledge_source: str = "seed",
        fetcher: Fetcher | None = None,
        retrieval_k: int = RETRIEVAL_K,
    ):
        self.gateway = gateway
        self.fetcher = fetcher
        self.retrieval_k = retrieval_k
        self.kb = LearnerKB()
        self.state = LearnerState.RESPONSE
        if knowledge:
            self._add(knowledge, knowledge_source)

    # -- knowledge ----------------------------------------------------------

    def learn(self, content: str, source: str = "tutor") -> int:
        """Chunk and embed new content (or a URL's document) into the KB."""
        prior = self.state
        self.state = LearnerState.LEARNING
        try:
            if content.startswith(("http://", "https://", "fixture://")):
                if self.fetcher is None:
                    raise FetchFailedError("no fetcher configured")
                try:
                    text = self.fetcher.fetch(content)
                except Exception:  # noqa: BLE001 - one retry, then give up
                    try:
                        text = self.fetcher.fetch(content)
                    except Exception as exc:  # noqa: BLE001
                        raise FetchFailedError(f"{content}: {exc}") from exc
                return self._add(text, content)
            return self._add(content, source)
        finally:
            self.state = prior

    def _add(self, text: str, source: str) -> int:
        pieces = chunk(text)
        for piece in pieces:
            self.kb.chunks.append((piece, source))
            self.kb.vectors.append(self.gateway.embed(piece))
        return len(pieces)

    def retrieve(self, question: str, k: int | None = None) -> list[str]:
        if not self.kb.chunks:
            return []
        k = k or self.retrieval_k
        query = np.array(self.gateway.embed(question))
        matrix = np.array(self.kb.vectors)
        sims = matrix @ query / (np.linalg.norm(matrix, axis=1) * np.linalg.norm(query) + 1e-12)
        order = np.argsort(-sims, kind="stable")[:k]
        return [self.kb.chunks[i][0] for i in order]

    # -- grading and answering ------------------------------------------------

    def grade_relevance(self, doc_chunk: str, question: str) -> bool:
        """Binary yes/no relevance; anything unparseable degrades to no."""
        if not doc_chunk.strip():
            return False
        prompt = prompts.GRADING_PROMPT.format(context=doc_chunk, question=question)
        verdict = self._yes_no(self.gateway.ask("learner.grade", prompt))
        if verdict is None:
            repair = f"{prompt}\nAnswer with exactly one word: yes or no."
            verdict = self._yes_no(self.gateway.ask("learner.grade", repair))
        return verdict if verdict is not None else False

    def respond(self, question: str) -> str:
        retrieved = self.retrieve(question)
        relevant = [c for c in retrieved if self.grade_relevance(c, question)]
        if not relevant:
            self.state = LearnerState.CONFUSION
            return prompts.CONFUSION_LINE
        self.state = LearnerState.RESPONSE
        prompt = prompts.LEARNER_RESPONSE_PROMPT.format(
            context="\n\n".join(relevant), question=question
        )
        return self.gateway.ask("learner.respond", prompt).strip()

    @staticmethod
    def _yes_no(reply: str) -> bool | None:
        token = reply.strip().strip(".!\"'").lower()
        if token == "yes":
            return True
        if token == "no":
            return False
        return None


def load_knowledge_file(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


RespondFn = Callable[[str], str]
