"""Lesson-plan compilation from the search trajectory, materials and memory."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import prompts
from ..domain import BloomLevel, InteractionMode, LearnerModel, SessionConfig
from ..errors import CompileParseError
from ..gateway import Gateway
from .lats import Trajectory
from .materials import MaterialDigest


@dataclass
class LessonPlan:
    content: str
    citations: list[str] = field(default_factory=list)
    target_level: BloomLevel = BloomLevel.MEMORY
    mode: InteractionMode = InteractionMode.PASSIVE


def compile_lesson(
    best: Trajectory | None,
    digests: list[MaterialDigest],
    memory_hits: list,  # list of (MemoryRecord, similarity)
    model: LearnerModel,
    config: SessionConfig,
    gateway: Gateway,
    topic: str = "",
) -> LessonPlan:
    """Assemble the turn's teaching content.

    With nothing but a trajectory, its strategy text is used verbatim; when
    materials or memory contribute, the pieces are compiled through the model.
    A missing trajectory (search ablated) falls back to sources alone, or to a
    plain restatement of the current objectives when everything is empty.
    """
    citations: list[str] = []
    if best is not None:
        for node in best.nodes:
            if node.action.startswith("search[") and node.observation:
                url = _search_url(node.action)
                if url:
                    citations.append(url)
    citations.extend(d.source for d in digests)
    citations.extend(record.id for record, _ in memory_hits)

    level = model.current_level
    strategy_text = best.content if best is not None else ""

    if best is not None and not digests and not memory_hits:
        content = strategy_text
    elif best is None and not digests and not memory_hits:
        content = f"Reviewing {topic or 'the topic'} at the {level.label} level."
    else:
        prompt = prompts.COMPILE_PROMPT.format(
            style=config.teaching_style.value,
            level=level.label,
            topic=topic,
            strategy=strategy_text or "(none)",
            materials="\n".join(f"[{d.source}] {d.summary}" for d in digests) or "(none)",
            memory="\n".join(f"[{record.id}] {record.text}" for record, _ in memory_hits) or "(none)",
        )
        content = gateway.ask("DSM.compile", prompt, temperature=config.temperature).strip()
        if not content:
            raise CompileParseError("lesson compilation produced no content")

    return LessonPlan(
        content=content,
        citations=citations,
        target_level=level,
        mode=config.interaction_mode,
    )


def _search_url(action: str) -> str:
    # action format: "search[<query>] -> <url>" when a hit was recorded
    if "->" in action:
        return action.split("->", 1)[1].strip()
    return ""
