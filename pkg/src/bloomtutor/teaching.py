"""Lesson delivery, practice-task generation and grading, and follow-up.

Code submissions are graded in two parts: the functionality score is computed
locally as the exact fraction of sandbox test cases passed (never
model-scored), while style and efficiency criteria come from the rubric
scorer. Severity follows from the pass fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import assessment, prompts
from .assessment import Question
from .bench import sandbox
from .domain import (
    BloomLevel,
    CurriculumPlan,
    InteractionMode,
    LearnerModel,
    QuestionFrequency,
    QuestionType,
    Role,
    SessionConfig,
    TranscriptTurn,
    TurnKind,
)
from .errors import (
    EvaluationParseError,
    NoJsonFoundError,
    SandboxUnavailableError,
    ScriptedExhaustedError,
    TaskParseError,
)
from .gateway import Gateway
from .search.lesson import LessonPlan

DIFFICULTY_GATE = 0.7
CODE_CRITERIA = ("functionality", "code_quality", "performance", "maintainability")


class Severity(str, Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MAJOR = "major"
    FATAL = "fatal"


@dataclass
class PracticeTask:
    id: str
    prompt: str
    target_level: BloomLevel
    kind: str  # conceptual | code
    target_sub_goal: str
    tests: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind == "code" and not self.tests:
            raise TaskParseError("code tasks must carry at least one test case")


@dataclass
class TaskEvaluation:
    scores: dict[str, float]
    severity: Severity
    remark: str
    overall: float


TurnFactory = Callable[..., TranscriptTurn]
AskLearner = Callable[[str], str]


def deliver(
    lesson: LessonPlan,
    mode: InteractionMode,
    config: SessionConfig,
    gateway: Gateway,
    ask_learner: AskLearner,
    make_turn: TurnFactory,
) -> list[TranscriptTurn]:
    """Render the lesson as one document turn, a dialogue, or both (mixed)."""
    turns: list[TranscriptTurn] = []

    def dialogue_exchange(count: int) -> None:
        history: list[str] = []
        for _ in range(count):
            prompt = prompts.CONVERSE_PROMPT.format(
                style=config.teaching_style.value,
                lesson=lesson.content,
                dialogue="\n".join(history) or "(start)",
            )
            tutor_line = gateway.ask("TRM.converse", prompt, temperature=config.temperature).strip()
            turns.append(make_turn(Role.TUTOR, TurnKind.LESSON, tutor_line, module="TRM"))
            reply = ask_learner(tutor_line)
            turns.append(make_turn(Role.LEARNER, TurnKind.LEARNER_ANSWER, reply, module="TRM"))
            history.extend([f"Tutor: {tutor_line}", f"Learner: {reply}"])

    if mode is InteractionMode.PASSIVE:
        turns.append(make_turn(Role.TUTOR, TurnKind.LESSON, lesson.content, module="DSM"))
    elif mode is InteractionMode.ACTIVE:
        dialogue_exchange(config.dialogue_exchanges)
    else:  # mixed: document plus one clarification exchange
        turns.append(make_turn(Role.TUTOR, TurnKind.LESSON, lesson.content, module="DSM"))
        dialogue_exchange(1)
    return turns


def generate_task(
    model: LearnerModel,
    plan: CurriculumPlan,
    config: SessionConfig,
    gateway: Gateway,
    turn_index: int,
) -> PracticeTask | None:
    """Build the turn's practice task; low frequency issues on odd turns only."""
    if config.question_frequency is QuestionFrequency.LOW and turn_index % 2 == 0:
        return None

    level = model.current_level
    target = _task_target(model, plan, level)
    difficulty = "advanced" if model.overall >= DIFFICULTY_GATE else "foundational"
    performance = "a high level" if model.overall >= DIFFICULTY_GATE else "a developing level"
    task_kind = "code" if config.question_type is QuestionType.CODE_IMPLEMENTATION else "conceptual"

    prompt = prompts.TASK_PROMPT.format(
        current_level=level.label,
        topic=plan.goal,
        sub_goals="; ".join(s.description for s in plan.by_level(level)) or plan.goal,
        performance=performance,
        difficulty=difficulty,
        task_kind=task_kind,
    )
    try:
        raw = gateway.ask_json("TRM.task", prompt, temperature=config.temperature)
    except (NoJsonFoundError, ScriptedExhaustedError) as exc:
        raise TaskParseError(f"task output unusable: {exc}") from exc

    kind = str(raw.get("kind", task_kind)).strip().lower()
    text = str(raw.get("prompt", "")).strip()
    if not text:
        raise TaskParseError("task output has no prompt")
    tests = []
    for case in raw.get("tests", []) or []:
        if not isinstance(case, dict) or "call" not in case or "expected" not in case:
            raise TaskParseError(f"malformed test case: {case!r}")
        tests.append({"call": str(case["call"]), "expected": str(case["expected"])})
    if kind not in ("conceptual", "code"):
        kind = "conceptual"
    return PracticeTask(
        id=f"task-{turn_index}",
        prompt=text,
        target_level=level,
        kind=kind,
        target_sub_goal=target,
        tests=tests,
    )


def evaluate_task(
    task: PracticeTask,
    submission: str,
    config: SessionConfig,
    gateway: Gateway,
    timeout_s: float = sandbox.DEFAULT_TIMEOUT_S,
) -> TaskEvaluation:
    scores: dict[str, float] = {}
    remark_parts: list[str] = []

    if task.kind == "code":
        try:
            results = sandbox.run_cases(extract_code(submission), task.tests, timeout_s=timeout_s)
        except SandboxUnavailableError as exc:
            return TaskEvaluation(
                scores={c: 0.0 for c in CODE_CRITERIA},
                severity=Severity.FATAL,
                remark=f"sandbox error: {exc}",
                overall=0.0,
            )
        scores["functionality"] = results.passed / results.total if results.total else 0.0
        remark_parts.append(f"{results.passed}/{results.total} test cases passed")
        rubric = _rubric_scores(task, submission, config, gateway, want_functionality=False)
    else:
        rubric = _rubric_scores(task, submission, config, gateway, want_functionality=True)
        scores["functionality"] = rubric.pop("functionality")

    for name in ("code_quality", "performance", "maintainability"):
        scores[name] = rubric.get(name, 0.0)
    if rubric.get("remark"):
        remark_parts.append(str(rubric["remark"]))

    overall = sum(scores[c] for c in CODE_CRITERIA) / len(CODE_CRITERIA)
    severity = _severity_for(scores["functionality"])
    return TaskEvaluation(
        scores=scores, severity=severity, remark="; ".join(remark_parts), overall=overall
    )


def follow_up(
    model: LearnerModel, plan: CurriculumPlan, config: SessionConfig, gateway: Gateway
) -> Question:
    """Next question against the updated learner state."""
    return assessment.generate_question(model, plan, config, gateway)


def _task_target(model: LearnerModel, plan: CurriculumPlan, level: BloomLevel) -> str:
    candidates = [s for s in plan.by_level(level) if s.id in model.vertices]
    if not candidates:
        return plan.sub_goals[0].id if plan.sub_goals else ""
    return min(candidates, key=lambda s: model.vertices[s.id].proficiency).id


def _rubric_scores(
    task: PracticeTask,
    submission: str,
    config: SessionConfig,
    gateway: Gateway,
    want_functionality: bool,
) -> dict:
    prompt = prompts.TASK_EVAL_PROMPT.format(learner_answer=submission, task_prompt=task.prompt)
    try:
        raw = gateway.ask_json("TRM.evaluate", prompt, temperature=config.temperature)
    except (NoJsonFoundError, ScriptedExhaustedError) as exc:
        raise EvaluationParseError(f"evaluation output unusable: {exc}") from exc
    wanted = CODE_CRITERIA if want_functionality else CODE_CRITERIA[1:]
    out: dict = {}
    for name in wanted:
        if name not in raw:
            raise EvaluationParseError(f"missing criterion score: {name}")
        try:
            value = float(raw[name])
        except (TypeError, ValueError) as exc:
            raise EvaluationParseError(f"criterion {name} is not a number") from exc
        out[name] = max(0.0, min(1.0, value))
    out["remark"] = str(raw.get("remark", ""))
    return out


def _severity_for(functionality: float) -> Severity:
    """Pass-fraction tiers; fatal exactly when nothing works."""
    if functionality >= 1.0:
        return Severity.NEGLIGIBLE
    if functionality >= 0.5:
        return Severity.SMALL
    if functionality > 0.0:
        return Severity.MAJOR
    return Severity.FATAL


def extract_code(submission: str) -> str:
    """Pull the code out of a fenced block when present."""
    if "```" not in submission:
        return submission
    parts = submission.split("```")
    # odd segments are fenced; strip a language hint on the first line
    blocks = []
    for i in range(1, len(parts), 2):
        block = parts[i]
        if "\n" in block:
            first, rest = block.split("\n", 1)
            if first.strip().isalpha():
                block = rest
        blocks.append(block)
    return "\n".join(blocks) if blocks else submission
