"""Learner assessment: question generation, answer scoring, and belief updates.

Proficiency for a sub-goal is the weighted metric mean (1/m) * sum(beta_k * f_k),
clamped to [0, 1]. The learner graph starts with every sub-goal at zero and gains
complete bipartite dependency edges between consecutive levels.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import prompts
from .domain import BloomLevel, CurriculumPlan, LearnerModel, SessionConfig, SubGoal
from .errors import (
    AllMasteredError,
    AssessmentParseError,
    EmptyMetricsError,
    InvalidPlanError,
    NoJsonFoundError,
    ScriptedExhaustedError,
    UnknownSubGoalError,
)
from .gateway import Gateway

DEFAULT_METRICS = ("accuracy", "understanding", "application")


@dataclass(frozen=True)
class MetricScore:
    name: str
    weight: float
    score: float


@dataclass
class Assessment:
    level: BloomLevel
    proficiency: float
    per_metric: list[MetricScore]
    remark: str = ""


@dataclass(frozen=True)
class Question:
    text: str
    target_sub_goal: str
    target_level: BloomLevel


def initial_state(plan: CurriculumPlan, config: SessionConfig | None = None) -> LearnerModel:
    """All proficiencies at zero, level edges between consecutive levels."""
    if not plan.sub_goals:
        raise InvalidPlanError("plan has no sub-goals")
    threshold = config.advancement_threshold if config else 0.7
    model = LearnerModel(advancement_threshold=threshold)
    for sub in plan.sub_goals:
        model.add_vertex(sub.id, sub.level, 0.0)

    present = sorted(plan.levels_present())
    for lower, upper in zip(present, present[1:]):
        for src in plan.by_level(lower):
            for dst in plan.by_level(upper):
                model.add_edge(src.id, dst.id)
    return model


def score(per_metric: list[MetricScore]) -> float:
    """(1/m) * sum(beta_k * f_k), clamped into [0, 1].

    The clamp matters: weights above one push the raw sum past 1.
    """
    if not per_metric:
        raise EmptyMetricsError("at least one metric score is required")
    raw = sum(m.weight * m.score for m in per_metric) / len(per_metric)
    return max(0.0, min(1.0, raw))


def pick_target(model: LearnerModel, plan: CurriculumPlan) -> SubGoal:
    """Lowest-proficiency unmastered sub-goal at the current level."""
    level = model.current_level
    candidates = [
        s
        for s in plan.by_level(level)
        if s.id in model.vertices
        and model.vertices[s.id].proficiency < model.advancement_threshold
    ]
    if not candidates:
        raise AllMasteredError(f"no unmastered sub-goal at level {level.label}")
    return min(candidates, key=lambda s: (model.vertices[s.id].proficiency, plan.sub_goals.index(s)))


def generate_question(
    model: LearnerModel, plan: CurriculumPlan, config: SessionConfig, gateway: Gateway
) -> Question:
    target = pick_target(model, plan)
    level = model.current_level
    prompt = prompts.QUESTION_PROMPT.format(
        topic=plan.goal,
        current_level=level.label,
        current_score=f"{model.overall:.2f}",
        sub_goals="\n".join(f"- {s.description}" for s in plan.by_level(level)),
        target=target.description,
    )
    text = gateway.ask("LAM.question", prompt, temperature=config.temperature).strip()
    return Question(text=text, target_sub_goal=target.id, target_level=level)


def assess_answer(
    question: Question,
    answer: str,
    plan: CurriculumPlan,
    config: SessionConfig,
    gateway: Gateway,
    current_level: BloomLevel | None = None,
    current_score: float = 0.0,
) -> Assessment:
    """Score an answer into (level, proficiency) with per-metric detail.

    A confused "I don't know" answer short-circuits to zero proficiency at the
    unchanged level: zero evidence admits only one deterministic reading.
    """
    level = current_level if current_level is not None else question.target_level
    if answer.strip().lower().startswith("i don't know"):
        per_metric = [
            MetricScore(name, weight, 0.0)
            for name, weight in zip(DEFAULT_METRICS, _weights(config))
        ]
        return Assessment(level=level, proficiency=0.0, per_metric=per_metric, remark="no evidence")

    prompt = prompts.ASSESS_PROMPT.format(
        question=question.text,
        current_level=level.label,
        current_score=f"{current_score:.2f}",
        learner_answer=answer,
        topic=plan.goal,
        **{
            lvl.label: "; ".join(s.description for s in plan.by_level(lvl)) or "(none)"
            for lvl in BloomLevel
        },
    )
    try:
        raw = gateway.ask_json("LAM.assess", prompt, temperature=config.temperature)
    except (NoJsonFoundError, ScriptedExhaustedError) as exc:
        raise AssessmentParseError(f"assessment output unusable: {exc}") from exc

    try:
        assessed_level = BloomLevel.from_label(str(raw.get("level", level.label)))
    except KeyError:
        assessed_level = level
    scores = raw.get("scores", {})
    weights = _weights(config)
    per_metric: list[MetricScore] = []
    if isinstance(scores, dict):
        for i, name in enumerate(DEFAULT_METRICS):
            if name not in scores:
                raise AssessmentParseError(f"missing metric score: {name}")
            per_metric.append(MetricScore(name, weights[i], _as_unit(scores[name], name)))
    elif isinstance(scores, list) and scores:
        for i, value in enumerate(scores[: len(DEFAULT_METRICS)]):
            name = DEFAULT_METRICS[i] if i < len(DEFAULT_METRICS) else f"metric_{i}"
            per_metric.append(MetricScore(name, weights[i] if i < len(weights) else 1.0, _as_unit(value, name)))
    else:
        raise AssessmentParseError("assessment output carries no metric scores")

    return Assessment(
        level=assessed_level,
        proficiency=score(per_metric),
        per_metric=per_metric,
        remark=str(raw.get("remark", "")),
    )


def update(model: LearnerModel, sub_goal_id: str, assessment: Assessment) -> LearnerModel:
    """Overwrite the target proficiency; level and overall follow from the table."""
    if sub_goal_id not in model.vertices:
        raise UnknownSubGoalError(sub_goal_id)
    model.set_proficiency(sub_goal_id, assessment.proficiency)
    return model


def _weights(config: SessionConfig) -> list[float]:
    weights = list(config.assessment_weights)
    while len(weights) < len(DEFAULT_METRICS):
        weights.append(1.0)
    return weights


def _as_unit(value: object, name: str) -> float:
    try:
        x = float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise AssessmentParseError(f"metric {name} is not a number: {value!r}") from exc
    if not 0.0 <= x <= 1.0:
        raise AssessmentParseError(f"metric {name} out of [0,1]: {x}")
    return x
