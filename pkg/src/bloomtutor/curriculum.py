"""Goal decomposition into per-level sub-goals, with plan validation."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import prompts
from .domain import LEVEL_ORDER, BloomLevel, CurriculumPlan, SessionConfig, SubGoal, sub_goal_id
from .errors import DecompositionParseError, EmptyGoalError, MissingLevelError, NoJsonFoundError
from .gateway import Gateway

logger = logging.getLogger(__name__)

SUB_GOALS_PER_LEVEL_WARN = 20


@dataclass(frozen=True)
class PlanViolation:
    code: str  # duplicate_id | empty_description | missing_level
    detail: str


def decompose(goal: str, config: SessionConfig, gateway: Gateway) -> CurriculumPlan:
    """Break a learning goal into sub-goals covering all six levels.

    With the CDM ablation active the raw goal becomes a single memory-level
    sub-goal so the rest of the pipeline still has a plan to work from.
    """
    goal = goal.strip()
    if not goal:
        raise EmptyGoalError("learning goal is empty")

    if config.ablated("CDM"):
        return degenerate_plan(goal)

    prompt = prompts.DECOMPOSE_PROMPT.format(curriculum=goal)
    try:
        raw = gateway.ask_json("CDM.decompose", prompt, temperature=config.temperature)
    except NoJsonFoundError as exc:
        raise DecompositionParseError(f"decomposition output had no JSON: {exc}") from exc

    plan = CurriculumPlan(goal=goal)
    ordinal = 0
    for level in LEVEL_ORDER:
        descriptions = _descriptions_for(raw, level)
        if not descriptions:
            raise MissingLevelError(level.label)
        for desc in descriptions:
            plan.sub_goals.append(
                SubGoal(id=sub_goal_id(goal, level, ordinal), level=level, description=desc, goal_id=goal)
            )
            ordinal += 1
        if len(descriptions) > SUB_GOALS_PER_LEVEL_WARN:
            logger.warning("level %s has %d sub-goals", level.label, len(descriptions))

    known = {lvl.label for lvl in LEVEL_ORDER}
    for key in raw:
        if str(key).strip().lower() not in known:
            logger.warning("dropping unknown decomposition key: %r", key)
    return plan


def degenerate_plan(goal: str) -> CurriculumPlan:
    """Single memory-level sub-goal wrapping the raw goal."""
    plan = CurriculumPlan(goal=goal)
    plan.sub_goals.append(
        SubGoal(id=sub_goal_id(goal, BloomLevel.MEMORY, 0), level=BloomLevel.MEMORY, description=goal, goal_id=goal)
    )
    return plan


def validate_plan(plan: CurriculumPlan) -> list[PlanViolation]:
    """Empty list iff every level has >=1 non-empty sub-goal and ids are unique."""
    violations: list[PlanViolation] = []
    seen: set[str] = set()
    for sub in plan.sub_goals:
        if sub.id in seen:
            violations.append(PlanViolation("duplicate_id", sub.id))
        seen.add(sub.id)
        if not sub.description.strip():
            violations.append(PlanViolation("empty_description", sub.id))
    for level in LEVEL_ORDER:
        if not plan.by_level(level):
            violations.append(PlanViolation("missing_level", level.label))
    return violations


def _descriptions_for(raw: dict, level: BloomLevel) -> list[str]:
    for key, value in raw.items():
        if str(key).strip().lower() != level.label:
            continue
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list):
            raise DecompositionParseError(f"level {level.label} is not a list of sub-goals")
        return [str(v).strip() for v in value if str(v).strip()]
    return []
