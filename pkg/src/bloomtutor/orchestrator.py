"""Multi-turn session loop wiring assessment, memory, search, and teaching.

One turn runs: question -> learner answer -> assess/update -> memory lookup ->
strategy search -> lesson compile/delivery -> practice task (per cadence) ->
evaluation folded back into the learner model -> follow-up staging. Learner
input always arrives through a LearnerEndpoint, so a simulated learner and a
human behind the HTTP service drive the identical code path.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Protocol

from . import assessment as lam
from . import curriculum, teaching
from .assessment import Assessment, MetricScore, Question
from .domain import (
    CurriculumPlan,
    InteractionMode,
    LearnerModel,
    Role,
    SessionConfig,
    TranscriptTurn,
    TurnKind,
)
from .errors import AllMasteredError, TutorError
from .gateway import Gateway
from .learner import SimulatedLearner
from .memory import VectorMemory
from .search import (
    MaterialDigest,
    SearchParams,
    Trajectory,
    build_strategist,
    compile_lesson,
    lats_search,
)
from .search.web import SearchProvider

MEMORY_HITS_K = 3


class LearnerEndpoint(Protocol):
    """Source of learner input; kind is question | task | dialogue."""

    def answer(self, kind: str, prompt: str) -> str: ...

    def absorb(self, content: str) -> None: ...


class SimulatorEndpoint:
    def __init__(self, learner: SimulatedLearner):
        self.learner = learner

    def answer(self, kind: str, prompt: str) -> str:
        return self.learner.respond(prompt)

    def absorb(self, content: str) -> None:
        self.learner.learn(content)


class TurnRecorder:
    """Appends turns with dense indices to memory and a crash-safe JSONL log."""

    def __init__(self, jsonl_path: str | Path | None, deterministic: bool):
        self.turns: list[TranscriptTurn] = []
        self.jsonl_path = Path(jsonl_path) if jsonl_path else None
        self.deterministic = deterministic
        self.on_turn: Any = None  # optional observer, e.g. the service event feed

    def write_header(self, header: dict[str, Any]) -> None:
        if self.jsonl_path is not None:
            self._write_line(json.dumps({"type": "header", **header}, sort_keys=True, separators=(",", ":")))

    def emit(
        self,
        role: Role,
        kind: TurnKind,
        content: str,
        module: str,
        scores: dict[str, float] | None = None,
        target: str | None = None,
    ) -> TranscriptTurn:
        index = len(self.turns)
        timestamp = float(index) if self.deterministic else time.time()
        turn = TranscriptTurn(
            index=index,
            role=role,
            kind=kind,
            content=content,
            module=module,
            timestamp=timestamp,
            scores=scores,
            target=target,
        )
        self.turns.append(turn)
        if self.jsonl_path is not None:
            self._write_line(turn.to_json_line())
        if self.on_turn is not None:
            self.on_turn(turn)
        return turn

    def _write_line(self, line: str) -> None:
        with self.jsonl_path.open("ab") as fh:  # type: ignore[union-attr]
            fh.write(line.encode("utf-8") + b"\n")
            fh.flush()
            os.fsync(fh.fileno())


@dataclass
class TurnOutcome:
    turns: list[TranscriptTurn]
    done: bool
    aborted: bool = False


@dataclass
class SessionResult:
    session_id: str
    transcript: list[TranscriptTurn]
    model: LearnerModel
    plan: CurriculumPlan
    archive_ids: list[str] = field(default_factory=list)


class TutorSession:
    """State of one tutoring session; turns advance via :meth:`run_turn`."""

    def __init__(
        self,
        config: SessionConfig,
        goal: str,
        gateway: Gateway,
        memory: VectorMemory | None = None,
        provider: SearchProvider | None = None,
        materials: list[MaterialDigest] | None = None,
        session_id: str = "session-0001",
        jsonl_path: str | Path | None = None,
        plan: CurriculumPlan | None = None,
    ):
        config.validate()
        self.config = config
        self.goal = goal
        self.gateway = gateway
        self.memory = memory
        self.provider = provider
        self.digests: list[MaterialDigest] = list(materials or [])
        self.session_id = session_id
        self.plan = plan if plan is not None else curriculum.decompose(goal, config, gateway)
        self.model = lam.initial_state(self.plan, config)
        if config.ablated("LAM"):
            # fixed belief so downstream prompts stay well-formed
            for vertex in self.model.vertices.values():
                vertex.proficiency = 0.5
        deterministic = getattr(gateway.backend, "kind", "remote") == "scripted"
        self.recorder = TurnRecorder(jsonl_path, deterministic)
        self.recorder.write_header(
            {
                "session_id": session_id,
                "goal": goal,
                "config": config.to_dict(),
                "plan": {
                    "goal": self.plan.goal,
                    "sub_goals": [
                        {"id": s.id, "level": s.level.label, "description": s.description, "goal_id": s.goal_id}
                        for s in self.plan.sub_goals
                    ],
                },
            }
        )
        self.turn_index = 0
        self.done = False
        self.pending_question: Question | None = None
        self.resume_stage: str | None = None  # question_wait | task_wait
        self.current_task: teaching.PracticeTask | None = None
        self.trace: dict[str, Any] | None = None
        self.archive_ids: list[str] = []

    @property
    def transcript(self) -> list[TranscriptTurn]:
        return self.recorder.turns

    # -- the turn ------------------------------------------------------------

    def run_turn(self, endpoint: LearnerEndpoint) -> TurnOutcome:
        if self.done:
            return TurnOutcome(turns=[], done=True)
        start = len(self.recorder.turns)
        turn_no = self.turn_index + 1
        emit = self.recorder.emit
        aborted = False

        try:
            if self.resume_stage == "task_wait":
                # the turn's question/lesson stages already ran pre-crash
                self.resume_stage = None
                self._trm_step(endpoint, turn_no, skip_task_emit=True)
            else:
                skip_emit = self.resume_stage == "question_wait"
                self.resume_stage = None
                self._lam_step(endpoint, skip_question_emit=skip_emit)
                hits = self._memory_step()
                lesson = self._dsm_step(endpoint, hits)
                endpoint.absorb(lesson.content)
                self._trm_step(endpoint, turn_no)
        except AllMasteredError:
            self.done = True
            return TurnOutcome(turns=self.recorder.turns[start:], done=True)
        except TutorError as exc:
            emit(Role.SYSTEM, TurnKind.FEEDBACK, f"turn {turn_no} aborted: {exc}", "orchestrator")
            aborted = True

        self.turn_index = turn_no
        if self.turn_index >= self.config.turns:
            self.done = True
        return TurnOutcome(turns=self.recorder.turns[start:], done=self.done, aborted=aborted)

    def _lam_step(self, endpoint: LearnerEndpoint, skip_question_emit: bool = False) -> Question | None:
        if self.config.ablated("LAM"):
            return None
        question = self.pending_question or lam.generate_question(
            self.model, self.plan, self.config, self.gateway
        )
        self.pending_question = None
        emit = self.recorder.emit
        if not skip_question_emit:
            emit(
                Role.TUTOR,
                TurnKind.ASSESSMENT_QUESTION,
                question.text,
                "LAM",
                target=question.target_sub_goal,
            )
        answer = endpoint.answer("question", question.text)
        emit(Role.LEARNER, TurnKind.LEARNER_ANSWER, answer, "LAM")
        result = lam.assess_answer(
            question,
            answer,
            self.plan,
            self.config,
            self.gateway,
            current_level=self.model.current_level,
            current_score=self.model.overall,
        )
        lam.update(self.model, question.target_sub_goal, result)
        scores = {m.name: m.score for m in result.per_metric}
        scores["proficiency"] = result.proficiency
        emit(
            Role.TUTOR,
            TurnKind.FEEDBACK,
            f"Assessed at {result.level.label} with proficiency {result.proficiency:.2f}."
            + (f" {result.remark}" if result.remark else ""),
            "LAM",
            scores=scores,
            target=question.target_sub_goal,
        )
        return question

    def _memory_step(self) -> list:
        if self.memory is None or self.config.ablated("KEMM"):
            return []
        query = f"teaching {self.goal} at the {self.model.current_level.label} level"
        return self.memory.query(query, MEMORY_HITS_K, where=lambda md: md.get("goal") == self.goal)

    def _dsm_step(self, endpoint: LearnerEndpoint, hits: list):
        trajectory: Trajectory | None = None
        self.trace = None
        if not self.config.ablated("DSM"):
            generator, evaluator, reflector = build_strategist(
                self.gateway, self.provider, self.goal, self.model.current_level, self.config
            )
            context = (
                f"Planning a lesson on {self.goal} for a learner at the "
                f"{self.model.current_level.label} level."
            )
            trajectory, tree = lats_search(
                context, generator, evaluator, reflector, SearchParams.from_config(self.config)
            )
            self.trace = tree.dump()
            reflections = [n.reflection for n in tree.nodes.values() if n.reflection]
            if reflections:
                self.recorder.emit(
                    Role.TUTOR, TurnKind.REFLECTION, " | ".join(reflections), "DSM"
                )
        lesson = compile_lesson(
            trajectory,
            self.digests,
            hits,
            self.model,
            self.config,
            self.gateway,
            topic=self.goal,
        )
        teaching.deliver(
            lesson,
            self.config.interaction_mode,
            self.config,
            self.gateway,
            ask_learner=lambda line: endpoint.answer("dialogue", line),
            make_turn=self.recorder.emit,
        )
        return lesson

    def _trm_step(self, endpoint: LearnerEndpoint, turn_no: int, skip_task_emit: bool = False) -> None:
        if self.config.ablated("TRM"):
            return
        task = teaching.generate_task(self.model, self.plan, self.config, self.gateway, turn_no)
        emit = self.recorder.emit
        if task is not None:
            if not skip_task_emit:
                emit(Role.TUTOR, TurnKind.PRACTICE_TASK, task.prompt, "TRM", target=task.target_sub_goal)
            self.current_task = task
            try:
                submission = endpoint.answer("task", task.prompt)
            finally:
                self.current_task = None
            emit(Role.LEARNER, TurnKind.TASK_SUBMISSION, submission, "TRM")
            evaluation = teaching.evaluate_task(task, submission, self.config, self.gateway)
            if not self.config.ablated("LAM"):
                folded = Assessment(
                    level=task.target_level,
                    proficiency=evaluation.overall,
                    per_metric=[
                        MetricScore(name, 1.0, value) for name, value in evaluation.scores.items()
                    ],
                    remark=evaluation.remark,
                )
                lam.update(self.model, task.target_sub_goal, folded)
            scores = dict(evaluation.scores)
            scores["overall"] = evaluation.overall
            emit(
                Role.TUTOR,
                TurnKind.FEEDBACK,
                f"[{evaluation.severity.value}] {evaluation.remark}".strip(),
                "TRM",
                scores=scores,
                target=task.target_sub_goal,
            )
        if not self.config.ablated("LAM"):
            try:
                self.pending_question = teaching.follow_up(
                    self.model, self.plan, self.config, self.gateway
                )
            except AllMasteredError:
                self.done = True

    # -- whole-session driving -------------------------------------------------

    def run_to_completion(self, endpoint: LearnerEndpoint) -> SessionResult:
        while not self.done and self.turn_index < self.config.turns:
            self.run_turn(endpoint)
        self.archive()
        return SessionResult(
            session_id=self.session_id,
            transcript=self.transcript,
            model=self.model,
            plan=self.plan,
            archive_ids=self.archive_ids,
        )

    def archive(self) -> list[str]:
        if self.archive_ids or self.memory is None:
            return self.archive_ids
        self.archive_ids = self.memory.archive_session(
            self.transcript,
            self.model,
            self.plan,
            session_id=self.session_id,
            ablated=self.config.ablated("KEMM"),
        )
        return self.archive_ids

    def state_snapshot(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "goal": self.goal,
            "turn_index": self.turn_index,
            "turns_limit": self.config.turns,
            "done": self.done,
            "model": self.model.to_dict(),
            "descriptions": {s.id: s.description for s in self.plan.sub_goals},
        }


def run_session(
    config: SessionConfig,
    plan_goal: str,
    learner: LearnerEndpoint,
    gateway: Gateway,
    memory: VectorMemory | None = None,
    provider: SearchProvider | None = None,
    materials: list[MaterialDigest] | None = None,
    session_id: str = "session-0001",
    jsonl_path: str | Path | None = None,
) -> SessionResult:
    """Decompose, initialize, loop turns, then archive."""
    session = TutorSession(
        config,
        plan_goal,
        gateway,
        memory=memory,
        provider=provider,
        materials=materials,
        session_id=session_id,
        jsonl_path=jsonl_path,
    )
    return session.run_to_completion(learner)


def run_turn(session: TutorSession, endpoint: LearnerEndpoint) -> TurnOutcome:
    return session.run_turn(endpoint)


# -- crash recovery ----------------------------------------------------------

def replay_session(
    jsonl_path: str | Path,
    gateway: Gateway,
    memory: VectorMemory | None = None,
    provider: SearchProvider | None = None,
) -> TutorSession:
    """Rebuild a session's exact state from its JSONL log.

    The log is replayed, folding every feedback turn's proficiency back into
    the learner model; the rebuilt session owns the same log file and appends
    to it when resumed.
    """
    path = Path(jsonl_path)
    lines = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines or lines[0].get("type") != "header":
        raise TutorError(f"{path}: missing session header")
    header = lines[0]
    config = SessionConfig.from_dict(header["config"])
    plan = CurriculumPlan(goal=str(header["plan"]["goal"]))
    from .domain import BloomLevel, SubGoal  # local import to keep module top light

    for raw in header["plan"]["sub_goals"]:
        plan.sub_goals.append(
            SubGoal(
                id=str(raw["id"]),
                level=BloomLevel.from_label(str(raw["level"])),
                description=str(raw["description"]),
                goal_id=str(raw["goal_id"]),
            )
        )

    session = TutorSession(
        config,
        str(header["goal"]),
        gateway,
        memory=memory,
        provider=provider,
        session_id=str(header["session_id"]),
        jsonl_path=None,
        plan=plan,
    )
    session.recorder.jsonl_path = path  # adopt the existing log; header already present

    question_turns = 0
    for raw in lines[1:]:
        turn = TranscriptTurn.from_dict(raw)
        session.recorder.turns.append(turn)
        if turn.kind is TurnKind.ASSESSMENT_QUESTION:
            question_turns += 1
        if turn.kind is TurnKind.FEEDBACK and turn.target and turn.scores:
            if "proficiency" in turn.scores:
                session.model.set_proficiency(turn.target, turn.scores["proficiency"])
            elif "overall" in turn.scores:
                session.model.set_proficiency(turn.target, turn.scores["overall"])

    # A session is idle at a turn boundary or awaiting learner input; those
    # are the only log tails that can be resumed exactly.
    last = session.transcript[-1] if session.transcript else None
    if last is None:
        session.turn_index = 0
    elif last.kind is TurnKind.ASSESSMENT_QUESTION:
        session.resume_stage = "question_wait"
        session.turn_index = question_turns - 1
        session.pending_question = Question(
            text=last.content,
            target_sub_goal=last.target or "",
            target_level=session.model.current_level,
        )
    elif last.kind is TurnKind.PRACTICE_TASK:
        session.resume_stage = "task_wait"
        session.turn_index = question_turns - 1
    elif _at_turn_boundary(last):
        session.turn_index = question_turns
    else:
        raise TutorError(f"{path}: log ends mid-step ({last.kind.value}); cannot resume exactly")
    session.done = session.turn_index >= config.turns
    return session


def _at_turn_boundary(last: TranscriptTurn) -> bool:
    if last.kind is TurnKind.LESSON:
        return True
    if last.kind is TurnKind.FEEDBACK and last.module in ("TRM", "orchestrator"):
        return True
    # active/mixed delivery ends on the learner's dialogue reply
    return last.kind is TurnKind.LEARNER_ANSWER and last.module == "TRM"
