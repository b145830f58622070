"""Rubric-based interaction-quality scoring (5-point scale per metric)."""

from __future__ import annotations

from dataclasses import dataclass

from .. import prompts
from ..domain import TranscriptTurn
from ..errors import ScoreParseError
from ..gateway import Gateway

WORD_LIMIT = 2000
METRICS = tuple(prompts.RUBRICS)


@dataclass(frozen=True)
class QualityScore:
    metric: str
    score: int
    rationale: str = ""

    def __post_init__(self) -> None:
        if not 1 <= self.score <= 5:
            raise ValueError("quality score must be in 1..5")


def render_transcript(turns: list[TranscriptTurn]) -> str:
    return "\n".join(f"{t.role.value}({t.kind.value}): {t.content}" for t in turns)


def truncate_words(text: str, limit: int = WORD_LIMIT) -> str:
    words = text.split()
    if len(words) <= limit:
        return text
    return " ".join(words[:limit])


def build_quality_prompt(transcript_text: str, metric: str) -> str:
    if metric not in prompts.RUBRICS:
        raise ScoreParseError(f"unknown quality metric: {metric}")
    rubric = prompts.RUBRICS[metric]
    return prompts.QUALITY_PROMPT.format(
        metric=metric,
        criteria=rubric["criteria"],
        d1=rubric["1"],
        d2=rubric["2"],
        d3=rubric["3"],
        d4=rubric["4"],
        d5=rubric["5"],
        word_limit=WORD_LIMIT,
        transcript=truncate_words(transcript_text),
    )


def score_quality(
    transcript: list[TranscriptTurn] | str, metric: str, gateway: Gateway
) -> QualityScore:
    """Score one metric; the reply must be a single integer from 1 to 5."""
    text = transcript if isinstance(transcript, str) else render_transcript(transcript)
    prompt = build_quality_prompt(text, metric)
    reply = gateway.ask("bench.quality", prompt)
    value = _parse_score(reply)
    if value is None:
        repair = f"{prompt}\nYour previous reply ({reply!r}) was not an integer from 1 to 5."
        reply = gateway.ask("bench.quality", repair)
        value = _parse_score(reply)
    if value is None:
        raise ScoreParseError(f"evaluator reply is not a 1..5 integer: {reply!r}")
    return QualityScore(metric=metric, score=value, rationale=reply.strip())


def _parse_score(reply: str) -> int | None:
    token = reply.strip().split()[0] if reply.strip() else ""
    token = token.rstrip(".")
    if not token.lstrip("-").isdigit():
        return None
    value = int(token)
    if not 1 <= value <= 5:
        return None
    return value
