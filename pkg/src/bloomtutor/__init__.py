"""Adaptive multi-turn tutoring engine.

Curriculum decomposition into six cognitive levels, continuous learner
assessment over a dependency DAG, tree-search lesson planning, practice-task
grading, and vector long-term memory, wired into a session loop that serves
simulated learners, a benchmark harness, and an HTTP console API.
"""

from .assessment import Assessment, MetricScore, Question, assess_answer, generate_question, initial_state, score, update
from .curriculum import PlanViolation, decompose, validate_plan
from .domain import (
    BloomLevel,
    CurriculumPlan,
    InteractionMode,
    LearnerModel,
    QuestionFrequency,
    QuestionType,
    Role,
    SessionConfig,
    StrategyNode,
    StrategyTree,
    SubGoal,
    TeachingStyle,
    TranscriptTurn,
    TurnKind,
    next_level,
    parse_session,
    serialize_session,
)
from .gateway import ChatMessage, ChatRequest, Gateway, RemoteBackend, ScriptEntry, ScriptedBackend, extract_json, scripted_gateway
from .learner import SimulatedLearner, chunk
from .memory import MemoryRecord, MemoryStore, VectorMemory
from .orchestrator import SessionResult, SimulatorEndpoint, TutorSession, TurnOutcome, replay_session, run_session, run_turn
from .search import (
    CandidateAction,
    LessonPlan,
    MaterialDigest,
    SearchParams,
    Trajectory,
    backpropagate,
    blend_value,
    compile_lesson,
    ingest_materials,
    lats_search,
    self_consistency,
    uct,
)
from .teaching import PracticeTask, Severity, TaskEvaluation, deliver, evaluate_task, follow_up, generate_task

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "BloomLevel",
    "CandidateAction",
    "ChatMessage",
    "ChatRequest",
    "CurriculumPlan",
    "Gateway",
    "InteractionMode",
    "LearnerModel",
    "LessonPlan",
    "MaterialDigest",
    "MemoryRecord",
    "MemoryStore",
    "MetricScore",
    "PlanViolation",
    "PracticeTask",
    "Question",
    "QuestionFrequency",
    "QuestionType",
    "RemoteBackend",
    "Role",
    "ScriptEntry",
    "ScriptedBackend",
    "SearchParams",
    "SessionConfig",
    "SessionResult",
    "Severity",
    "SimulatedLearner",
    "SimulatorEndpoint",
    "StrategyNode",
    "StrategyTree",
    "SubGoal",
    "TaskEvaluation",
    "TeachingStyle",
    "Trajectory",
    "TranscriptTurn",
    "TurnKind",
    "TurnOutcome",
    "TutorSession",
    "VectorMemory",
    "assess_answer",
    "backpropagate",
    "blend_value",
    "chunk",
    "compile_lesson",
    "decompose",
    "deliver",
    "evaluate_task",
    "extract_json",
    "follow_up",
    "generate_question",
    "generate_task",
    "ingest_materials",
    "initial_state",
    "lats_search",
    "next_level",
    "parse_session",
    "replay_session",
    "run_session",
    "run_turn",
    "score",
    "scripted_gateway",
    "self_consistency",
    "serialize_session",
    "uct",
    "update",
    "validate_plan",
]
