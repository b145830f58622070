"""Gateway-backed generator, evaluator and reflector for the strategy search.

Actions come in two kinds: "search" runs the web provider and observes the top
snippet; "teach" is the output action whose draft is its own observation.
"""

from __future__ import annotations

import re

from .. import prompts
from ..domain import BloomLevel, SessionConfig
from ..errors import NoJsonFoundError
from ..gateway import Gateway
from .lats import ActionEvaluator, ActionGenerator, CandidateAction, Reflector
from .web import SearchProvider


def build_strategist(
    gateway: Gateway,
    provider: SearchProvider | None,
    topic: str,
    level: BloomLevel,
    config: SessionConfig,
) -> tuple[ActionGenerator, ActionEvaluator, Reflector]:
    def generator(context: str, path: tuple[str, ...]) -> list[CandidateAction]:
        candidates: list[CandidateAction] = []
        for _ in range(config.expansion_width):
            prompt = prompts.EXPAND_PROMPT.format(
                topic=topic,
                level=level.label,
                context=context or "(start)",
                reflections="",
            )
            try:
                raw = gateway.ask_json("DSM.expand", prompt, temperature=config.temperature)
            except NoJsonFoundError:
                continue
            kind = str(raw.get("kind", "teach")).strip().lower()
            content = str(raw.get("content", "")).strip()
            if not content:
                continue
            if kind == "search" and provider is not None:
                hits = provider.search(content, max_results=1)
                if hits:
                    candidates.append(
                        CandidateAction(
                            action=f"search[{content}] -> {hits[0].url}",
                            observation=hits[0].snippet,
                            terminal=False,
                        )
                    )
                else:
                    candidates.append(
                        CandidateAction(
                            action=f"search[{content}]", observation="(no results)", terminal=False
                        )
                    )
            else:
                candidates.append(CandidateAction(action="teach", observation=content, terminal=True))
        return candidates

    def evaluator(context: str, path: tuple[str, ...], candidate: CandidateAction) -> float:
        prompt = prompts.VALUE_PROMPT.format(
            level=level.label, topic=topic, candidate=candidate.content
        )
        reply = gateway.ask("DSM.value", prompt, temperature=config.temperature)
        return _score_out_of_ten(reply)

    def reflector(context: str, path: tuple[str, ...]) -> str:
        prompt = prompts.REFLECT_PROMPT.format(context=context)
        return gateway.ask("DSM.reflect", prompt, temperature=config.temperature).strip()

    return generator, evaluator, reflector


def _score_out_of_ten(reply: str) -> float:
    match = re.search(r"-?\d+(?:\.\d+)?", reply)
    if not match:
        return 0.0
    return max(0.0, min(1.0, float(match.group()) / 10.0))
