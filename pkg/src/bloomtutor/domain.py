"""Shared vocabulary of the engine: cognitive levels, curriculum plans, the
learner belief graph, strategy-tree nodes, session configuration, and
transcript records, plus the session snapshot (de)serializer."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Iterable, Mapping

from .errors import ConfigError, CycleError, SessionParseError


class BloomLevel(IntEnum):
    """The six cognitive levels, ordered from most basic to most advanced."""

    MEMORY = 0
    COMPREHENSION = 1
    APPLICATION = 2
    ANALYSIS = 3
    EVALUATION = 4
    CREATION = 5

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, name: str) -> "BloomLevel":
        key = name.strip().lower()
        for level in cls:
            if level.label == key:
                return level
        raise KeyError(name)


LEVEL_ORDER: tuple[BloomLevel, ...] = tuple(BloomLevel)


def next_level(level: BloomLevel) -> BloomLevel | None:
    """Successor in the six-level order; None at the top (creation)."""
    if level is BloomLevel.CREATION:
        return None
    return BloomLevel(level + 1)


def sub_goal_id(goal: str, level: BloomLevel, ordinal: int) -> str:
    """Deterministic content hash so reruns produce identical ids."""
    payload = f"{goal}|{level.label}|{ordinal}".encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:12]


@dataclass(frozen=True)
class SubGoal:
    # empty descriptions are representable so validate_plan can report them
    id: str
    level: BloomLevel
    description: str
    goal_id: str


@dataclass
class CurriculumPlan:
    """A goal decomposed into per-level sub-goals, grouped in level order."""

    goal: str
    sub_goals: list[SubGoal] = field(default_factory=list)

    def by_level(self, level: BloomLevel) -> list[SubGoal]:
        return [s for s in self.sub_goals if s.level is level]

    def levels_present(self) -> set[BloomLevel]:
        return {s.level for s in self.sub_goals}

    def get(self, sid: str) -> SubGoal | None:
        for s in self.sub_goals:
            if s.id == sid:
                return s
        return None

    def to_table(self) -> dict[str, Any]:
        """Export as {goal, levels: {memory: [...], ..., creation: [...]}}."""
        levels = {lvl.label: [s.description for s in self.by_level(lvl)] for lvl in LEVEL_ORDER}
        return {"goal": self.goal, "levels": levels}


@dataclass
class Vertex:
    sub_goal_id: str
    level: BloomLevel
    proficiency: float


class LearnerModel:
    """Directed acyclic graph of (sub-goal, level, proficiency) beliefs.

    Acyclicity is checked on every edge insert. The current level and the
    overall score are pure functions of the vertex table, recomputed on read
    so incremental updates can never drift from the definition.
    """

    def __init__(self, advancement_threshold: float = 0.7):
        self.vertices: dict[str, Vertex] = {}
        self.edges: set[tuple[str, str]] = set()
        self.advancement_threshold = advancement_threshold

    def add_vertex(self, sid: str, level: BloomLevel, proficiency: float = 0.0) -> None:
        self.vertices[sid] = Vertex(sid, level, _clamp01(proficiency))

    def add_edge(self, from_id: str, to_id: str) -> None:
        if from_id not in self.vertices or to_id not in self.vertices:
            raise KeyError("edge endpoints must be existing vertices")
        candidate = self.edges | {(from_id, to_id)}
        if _has_cycle(self.vertices.keys(), candidate):
            raise CycleError(f"edge {from_id}->{to_id} would create a cycle")
        self.edges.add((from_id, to_id))

    def set_proficiency(self, sid: str, p: float) -> None:
        if sid not in self.vertices:
            raise KeyError(sid)
        self.vertices[sid].proficiency = _clamp01(p)

    @property
    def current_level(self) -> BloomLevel:
        """Lowest level with an unsatisfied sub-goal; creation if all pass."""
        for level in LEVEL_ORDER:
            goals = [v for v in self.vertices.values() if v.level is level]
            if any(v.proficiency < self.advancement_threshold for v in goals):
                return level
        return BloomLevel.CREATION

    @property
    def overall(self) -> float:
        if not self.vertices:
            return 0.0
        return sum(v.proficiency for v in self.vertices.values()) / len(self.vertices)

    def topological_sort(self) -> list[str]:
        order, state = [], {v: 0 for v in self.vertices}
        adjacency: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a, b in sorted(self.edges):
            adjacency[a].append(b)

        def visit(node: str) -> None:
            if state[node] == 2:
                return
            if state[node] == 1:
                raise CycleError("graph has a cycle")
            state[node] = 1
            for nxt in adjacency[node]:
                visit(nxt)
            state[node] = 2
            order.append(node)

        for v in sorted(self.vertices):
            visit(v)
        order.reverse()
        return order

    def copy(self) -> "LearnerModel":
        dup = LearnerModel(self.advancement_threshold)
        for v in self.vertices.values():
            dup.add_vertex(v.sub_goal_id, v.level, v.proficiency)
        dup.edges = set(self.edges)
        return dup

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": [
                {"id": v.sub_goal_id, "level": v.level.label, "proficiency": v.proficiency}
                for v in sorted(self.vertices.values(), key=lambda v: (v.level, v.sub_goal_id))
            ],
            "edges": sorted([a, b] for a, b in self.edges),
            "current_level": self.current_level.label,
            "overall": self.overall,
            "advancement_threshold": self.advancement_threshold,
        }


@dataclass
class StrategyNode:
    """One node of the teaching-strategy search tree."""

    id: str
    parent_id: str | None
    context: str
    action: str
    observation: str
    value: float = 0.0
    visits: int = 1
    terminal: bool = False
    reflection: str | None = None
    depth: int = 0
    children: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.visits < 1:
            raise ValueError("visit count starts at one")


class StrategyTree:
    def __init__(self, root: StrategyNode):
        if root.parent_id is not None:
            raise ValueError("root must have no parent")
        self.nodes: dict[str, StrategyNode] = {root.id: root}
        self.root_id = root.id

    @property
    def root(self) -> StrategyNode:
        return self.nodes[self.root_id]

    def add(self, node: StrategyNode) -> None:
        parent = self.nodes[node.parent_id]  # type: ignore[index]
        if node.depth != parent.depth + 1:
            raise ValueError("child depth must be parent depth + 1")
        self.nodes[node.id] = node
        parent.children.append(node.id)

    def children_of(self, node_id: str) -> list[StrategyNode]:
        return [self.nodes[c] for c in self.nodes[node_id].children]

    def path_to(self, node_id: str) -> list[StrategyNode]:
        path = []
        cursor: str | None = node_id
        while cursor is not None:
            node = self.nodes[cursor]
            path.append(node)
            cursor = node.parent_id
        path.reverse()
        return path

    def terminals(self) -> list[StrategyNode]:
        return [n for n in self.nodes.values() if n.terminal]

    def dump(self) -> dict[str, Any]:
        """Per-turn trace export for the console's search view."""
        return {
            "nodes": [
                {
                    "id": n.id,
                    "parent": n.parent_id,
                    "action": n.action,
                    "U": n.value,
                    "N": n.visits,
                    "terminal": n.terminal,
                    "reflection": n.reflection,
                }
                for n in self.nodes.values()
            ]
        }


class QuestionType(str, Enum):
    GENERAL = "general"
    MATH_ALGORITHM = "math_algorithm"
    CODE_IMPLEMENTATION = "code_implementation"


class TeachingStyle(str, Enum):
    SIMPLE = "simple"
    DETAILED = "detailed"


class QuestionFrequency(str, Enum):
    LOW = "low"
    HIGH = "high"


class InteractionMode(str, Enum):
    ACTIVE = "active"
    PASSIVE = "passive"
    MIXED = "mixed"


ABLATABLE_MODULES = frozenset({"CDM", "LAM", "DSM", "TRM", "KEMM"})


@dataclass
class SessionConfig:
    """Profile settings plus search hyperparameters for one session."""

    turns: int = 10
    question_type: QuestionType = QuestionType.GENERAL
    teaching_style: TeachingStyle = TeachingStyle.DETAILED
    question_frequency: QuestionFrequency = QuestionFrequency.HIGH
    interaction_mode: InteractionMode = InteractionMode.PASSIVE
    expansion_width: int = 3
    depth_limit: int = 3
    rollouts: int = 8
    exploration_weight: float = 1.0
    value_blend: float = 0.8
    quality_threshold: float = 0.7
    temperature: float = 0.7
    assessment_weights: list[float] = field(default_factory=lambda: [1.0, 1.0, 1.0])
    advancement_threshold: float = 0.7
    dialogue_exchanges: int = 2
    ablations: frozenset[str] = frozenset()

    def validate(self) -> None:
        if self.turns < 1:
            raise ConfigError("turns must be >= 1")
        if self.expansion_width < 1 or self.depth_limit < 1 or self.rollouts < 1:
            raise ConfigError("search sizes (width, depth, rollouts) must be >= 1")
        if not 0.0 <= self.value_blend <= 1.0:
            raise ConfigError("value_blend must be in [0, 1]")
        if self.exploration_weight < 0:
            raise ConfigError("exploration_weight must be >= 0")
        if self.temperature < 0:
            raise ConfigError("temperature must be >= 0")
        if any(b < 0 for b in self.assessment_weights):
            raise ConfigError("assessment weights must be >= 0")
        unknown = set(self.ablations) - ABLATABLE_MODULES
        if unknown:
            raise ConfigError(f"unknown ablation flags: {sorted(unknown)}")

    def ablated(self, module: str) -> bool:
        return module in self.ablations

    def to_dict(self) -> dict[str, Any]:
        return {
            "turns": self.turns,
            "question_type": self.question_type.value,
            "teaching_style": self.teaching_style.value,
            "question_frequency": self.question_frequency.value,
            "interaction_mode": self.interaction_mode.value,
            "expansion_width": self.expansion_width,
            "depth_limit": self.depth_limit,
            "rollouts": self.rollouts,
            "exploration_weight": self.exploration_weight,
            "value_blend": self.value_blend,
            "quality_threshold": self.quality_threshold,
            "temperature": self.temperature,
            "assessment_weights": list(self.assessment_weights),
            "advancement_threshold": self.advancement_threshold,
            "dialogue_exchanges": self.dialogue_exchanges,
            "ablations": sorted(self.ablations),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SessionConfig":
        cfg = cls(
            turns=int(data.get("turns", 10)),
            question_type=QuestionType(data.get("question_type", "general")),
            teaching_style=TeachingStyle(data.get("teaching_style", "detailed")),
            question_frequency=QuestionFrequency(data.get("question_frequency", "high")),
            interaction_mode=InteractionMode(data.get("interaction_mode", "passive")),
            expansion_width=int(data.get("expansion_width", 3)),
            depth_limit=int(data.get("depth_limit", 3)),
            rollouts=int(data.get("rollouts", 8)),
            exploration_weight=float(data.get("exploration_weight", 1.0)),
            value_blend=float(data.get("value_blend", 0.8)),
            quality_threshold=float(data.get("quality_threshold", 0.7)),
            temperature=float(data.get("temperature", 0.7)),
            assessment_weights=[float(b) for b in data.get("assessment_weights", [1.0, 1.0, 1.0])],
            advancement_threshold=float(data.get("advancement_threshold", 0.7)),
            dialogue_exchanges=int(data.get("dialogue_exchanges", 2)),
            ablations=frozenset(data.get("ablations", ())),
        )
        cfg.validate()
        return cfg


class Role(str, Enum):
    TUTOR = "tutor"
    LEARNER = "learner"
    SYSTEM = "system"


class TurnKind(str, Enum):
    ASSESSMENT_QUESTION = "assessment_question"
    LEARNER_ANSWER = "learner_answer"
    LESSON = "lesson"
    PRACTICE_TASK = "practice_task"
    TASK_SUBMISSION = "task_submission"
    FEEDBACK = "feedback"
    REFLECTION = "reflection"


@dataclass
class TranscriptTurn:
    index: int
    role: Role
    kind: TurnKind
    content: str
    module: str
    timestamp: float
    scores: dict[str, float] | None = None
    target: str | None = None

    def __post_init__(self) -> None:
        if self.role is not Role.SYSTEM and not self.content.strip():
            raise ValueError("non-system turns must carry content")

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "index": self.index,
            "role": self.role.value,
            "kind": self.kind.value,
            "content": self.content,
            "module": self.module,
            "timestamp": self.timestamp,
        }
        if self.scores is not None:
            data["scores"] = dict(self.scores)
        if self.target is not None:
            data["target"] = self.target
        return data

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], path: str = "turn") -> "TranscriptTurn":
        try:
            return cls(
                index=int(_require(data, "index", path)),
                role=Role(_require(data, "role", path)),
                kind=TurnKind(_require(data, "kind", path)),
                content=str(_require(data, "content", path)),
                module=str(_require(data, "module", path)),
                timestamp=float(_require(data, "timestamp", path)),
                scores={str(k): float(v) for k, v in data["scores"].items()} if "scores" in data else None,
                target=str(data["target"]) if "target" in data else None,
            )
        except (TypeError, ValueError) as exc:
            raise SessionParseError(path, str(exc)) from exc


# -- session snapshot ------------------------------------------------------

def serialize_session(
    config: SessionConfig,
    plan: CurriculumPlan,
    model: LearnerModel,
    transcript: Iterable[TranscriptTurn],
) -> bytes:
    """One JSON document {config, plan, learner_model, transcript[]}."""
    doc = {
        "config": config.to_dict(),
        "plan": {
            "goal": plan.goal,
            "sub_goals": [
                {"id": s.id, "level": s.level.label, "description": s.description, "goal_id": s.goal_id}
                for s in plan.sub_goals
            ],
        },
        "learner_model": model.to_dict(),
        "transcript": [t.to_dict() for t in transcript],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def parse_session(
    data: bytes,
) -> tuple[SessionConfig, CurriculumPlan, LearnerModel, list[TranscriptTurn]]:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SessionParseError("document", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SessionParseError("document", "root must be an object")

    try:
        config = SessionConfig.from_dict(_require(doc, "config", "config"))
    except (ConfigError, TypeError, ValueError, AttributeError) as exc:
        raise SessionParseError("config", str(exc)) from exc

    raw_plan = _require(doc, "plan", "plan")
    plan = CurriculumPlan(goal=str(_require(raw_plan, "goal", "plan.goal")))
    for i, raw in enumerate(_require(raw_plan, "sub_goals", "plan.sub_goals")):
        path = f"plan.sub_goals[{i}]"
        try:
            plan.sub_goals.append(
                SubGoal(
                    id=str(_require(raw, "id", path)),
                    level=BloomLevel.from_label(str(_require(raw, "level", path))),
                    description=str(_require(raw, "description", path)),
                    goal_id=str(_require(raw, "goal_id", path)),
                )
            )
        except (KeyError, ValueError) as exc:
            raise SessionParseError(path, str(exc)) from exc

    raw_model = _require(doc, "learner_model", "learner_model")
    model = LearnerModel(float(raw_model.get("advancement_threshold", 0.7)))
    for i, raw in enumerate(_require(raw_model, "vertices", "learner_model.vertices")):
        path = f"learner_model.vertices[{i}]"
        try:
            model.add_vertex(
                str(_require(raw, "id", path)),
                BloomLevel.from_label(str(_require(raw, "level", path))),
                float(_require(raw, "proficiency", path)),
            )
        except (KeyError, ValueError) as exc:
            raise SessionParseError(path, str(exc)) from exc
    for i, pair in enumerate(_require(raw_model, "edges", "learner_model.edges")):
        path = f"learner_model.edges[{i}]"
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SessionParseError(path, "edge must be a [from, to] pair")
        try:
            model.add_edge(str(pair[0]), str(pair[1]))
        except (KeyError, CycleError) as exc:
            raise SessionParseError(path, str(exc)) from exc

    transcript = [
        TranscriptTurn.from_dict(raw, f"transcript[{i}]")
        for i, raw in enumerate(_require(doc, "transcript", "transcript"))
    ]
    return config, plan, model, transcript


def _require(data: Any, key: str, path: str) -> Any:
    if not isinstance(data, Mapping) or key not in data:
        raise SessionParseError(path if key in path else f"{path}.{key}", "missing field")
    return data[key]


def _clamp01(x: float) -> float:
    return max(0.0, min(1.0, x))


def _has_cycle(nodes: Iterable[str], edges: set[tuple[str, str]]) -> bool:
    adjacency: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        adjacency[a].append(b)
    state = {n: 0 for n in adjacency}

    def visit(node: str) -> bool:
        if state[node] == 1:
            return True
        if state[node] == 2:
            return False
        state[node] = 1
        if any(visit(nxt) for nxt in adjacency[node]):
            return True
        state[node] = 2
        return False

    return any(visit(n) for n in adjacency)
