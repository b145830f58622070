"""Study-material ingestion: extract text per kind, then summarize."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .. import prompts
from ..errors import GatewayError, UnsupportedKindError
from ..gateway import Gateway

NO_CONTENT_SUMMARY = "(no content)"


@dataclass(frozen=True)
class MaterialDigest:
    source: str
    text: str
    summary: str
    error: str | None = None


def _read_plain_text(data: bytes) -> str:
    return data.decode("utf-8")


def _read_pdf_text(data: bytes) -> str:
    # pre-extracted text sidecar; a real PDF parser plugs in via register_reader
    return data.decode("utf-8", errors="strict")


_READERS: dict[str, Callable[[bytes], str]] = {
    "plain_text": _read_plain_text,
    "pdf_text": _read_pdf_text,
}


def register_reader(kind: str, reader: Callable[[bytes], str]) -> None:
    _READERS[kind] = reader


def supported_kinds() -> set[str]:
    return set(_READERS)


def ingest_materials(
    documents: list[tuple[str, bytes, str]], gateway: Gateway
) -> list[MaterialDigest]:
    """Digest each (name, bytes, kind) document; unreadable ones are noted,
    never fatal. Unsupported kinds are a caller error."""
    for name, _, kind in documents:
        if kind not in _READERS:
            raise UnsupportedKindError(f"{name}: no reader for kind {kind!r}")

    digests: list[MaterialDigest] = []
    for name, data, kind in documents:
        try:
            text = _READERS[kind](data)
        except Exception as exc:  # noqa: BLE001 - reader failures become notes
            digests.append(MaterialDigest(name, "", NO_CONTENT_SUMMARY, error=str(exc)))
            continue
        if not text.strip():
            digests.append(MaterialDigest(name, text, NO_CONTENT_SUMMARY))
            continue
        try:
            summary = gateway.ask(
                "DSM.summarize", prompts.SUMMARIZE_PROMPT.format(name=name, text=text)
            ).strip()
        except GatewayError as exc:
            digests.append(MaterialDigest(name, text, text[:200], error=str(exc)))
            continue
        digests.append(MaterialDigest(name, text, summary or text[:200]))
    return digests
