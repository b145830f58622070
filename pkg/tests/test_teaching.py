import json
import random

import pytest

from bloomtutor import (
    BloomLevel,
    InteractionMode,
    LessonPlan,
    QuestionFrequency,
    QuestionType,
    Role,
    SessionConfig,
    TurnKind,
    deliver,
    evaluate_task,
    follow_up,
    generate_task,
    initial_state,
    update,
)
from bloomtutor.assessment import Assessment, MetricScore
from bloomtutor.errors import EvaluationParseError, TaskParseError
from bloomtutor.gateway import ScriptEntry, scripted_gateway
from bloomtutor.orchestrator import TurnRecorder
from bloomtutor.teaching import PracticeTask, Severity, extract_code

RUBRIC_OK = json.dumps(
    {"functionality": 0.8, "code_quality": 0.9, "performance": 0.7, "maintainability": 0.6, "remark": "tidy"}
)


def lesson() -> LessonPlan:
    return LessonPlan(content="lesson body", target_level=BloomLevel.MEMORY)


def recorder() -> TurnRecorder:
    return TurnRecorder(None, deterministic=True)


class TestDeliver:
    def test_passive_single_lesson_turn(self):
        rec = recorder()
        turns = deliver(
            lesson(), InteractionMode.PASSIVE, SessionConfig(), scripted_gateway([]),
            ask_learner=lambda line: "reply", make_turn=rec.emit,
        )
        assert len(turns) == 1
        assert turns[0].kind is TurnKind.LESSON and turns[0].role is Role.TUTOR
        assert turns[0].content == "lesson body"

    def test_active_two_exchanges_make_four_turns(self):
        rec = recorder()
        gw = scripted_gateway([ScriptEntry(tag="TRM.converse", response="Shall we continue?")])
        turns = deliver(
            lesson(), InteractionMode.ACTIVE, SessionConfig(dialogue_exchanges=2), gw,
            ask_learner=lambda line: "sure", make_turn=rec.emit,
        )
        assert len(turns) == 4
        assert [t.role for t in turns] == [Role.TUTOR, Role.LEARNER, Role.TUTOR, Role.LEARNER]

    def test_mixed_lesson_plus_one_exchange(self):
        rec = recorder()
        gw = scripted_gateway([ScriptEntry(tag="TRM.converse", response="Any questions?")])
        turns = deliver(
            lesson(), InteractionMode.MIXED, SessionConfig(), gw,
            ask_learner=lambda line: "none", make_turn=rec.emit,
        )
        assert len(turns) == 3
        assert turns[0].kind is TurnKind.LESSON and turns[0].content == "lesson body"


class TestGenerateTask:
    def gateway(self, kind="conceptual", tests=None):
        payload = {"prompt": "do the thing", "kind": kind}
        if tests is not None:
            payload["tests"] = tests
        return scripted_gateway([ScriptEntry(tag="TRM.task", response=json.dumps(payload))])

    def model_with_overall(self, knn_plan, value: float):
        model = initial_state(knn_plan, SessionConfig())
        for sid in model.vertices:
            model.set_proficiency(sid, value)
        return model

    def test_high_performer_gets_advanced_directive(self, knn_plan):
        gw = self.gateway()
        model = self.model_with_overall(knn_plan, 0.69)
        # bump to >= 0.7 overall while keeping a target below threshold at current level
        for s in knn_plan.sub_goals[1:]:
            model.set_proficiency(s.id, 0.95)
        assert model.overall >= 0.7
        generate_task(model, knn_plan, SessionConfig(), gw, turn_index=1)
        assert "advanced" in gw.call_log[0][0].text

    def test_low_performer_gets_foundational_directive(self, knn_plan):
        gw = self.gateway()
        model = self.model_with_overall(knn_plan, 0.1)
        generate_task(model, knn_plan, SessionConfig(), gw, turn_index=1)
        assert "foundational" in gw.call_log[0][0].text

    def test_low_frequency_skips_even_turns(self, knn_plan):
        gw = self.gateway()
        model = self.model_with_overall(knn_plan, 0.1)
        cfg = SessionConfig(question_frequency=QuestionFrequency.LOW)
        assert generate_task(model, knn_plan, cfg, gw, turn_index=2) is None
        assert generate_task(model, knn_plan, cfg, gw, turn_index=3) is not None

    def test_high_frequency_every_turn(self, knn_plan):
        gw = self.gateway()
        model = self.model_with_overall(knn_plan, 0.1)
        cfg = SessionConfig(question_frequency=QuestionFrequency.HIGH)
        assert all(
            generate_task(model, knn_plan, cfg, gw, turn_index=i) is not None for i in (1, 2, 3, 4)
        )

    def test_code_task_requires_tests(self, knn_plan):
        gw = self.gateway(kind="code")  # no tests included
        model = self.model_with_overall(knn_plan, 0.1)
        with pytest.raises(TaskParseError):
            generate_task(model, knn_plan, SessionConfig(question_type=QuestionType.CODE_IMPLEMENTATION), gw, 1)

    def test_code_task_parses_cases(self, knn_plan):
        gw = self.gateway(kind="code", tests=[{"call": "f(1)", "expected": "2"}])
        model = self.model_with_overall(knn_plan, 0.1)
        task = generate_task(model, knn_plan, SessionConfig(question_type=QuestionType.CODE_IMPLEMENTATION), gw, 1)
        assert task.kind == "code" and task.tests == [{"call": "f(1)", "expected": "2"}]


def code_task(cases) -> PracticeTask:
    return PracticeTask(
        id="task-1", prompt="implement inc", target_level=BloomLevel.APPLICATION,
        kind="code", target_sub_goal="sg", tests=cases,
    )


FOUR_CASES = [
    {"call": "inc(0)", "expected": "1"},
    {"call": "inc(1)", "expected": "2"},
    {"call": "inc(-1)", "expected": "0"},
    {"call": "inc(10)", "expected": "11"},
]


class TestEvaluateTask:
    def rubric_gateway(self):
        return scripted_gateway([ScriptEntry(tag="TRM.evaluate", response=RUBRIC_OK)])

    def test_all_cases_pass_is_negligible(self):
        result = evaluate_task(code_task(FOUR_CASES), "def inc(x):\n    return x + 1", SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == 1.0
        assert result.severity is Severity.NEGLIGIBLE

    def test_zero_passes_is_fatal(self):
        result = evaluate_task(code_task(FOUR_CASES), "def inc(x):\n    return x - 1", SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == 0.0
        assert result.severity is Severity.FATAL

    def test_three_of_four_fraction(self):
        # passes every case except inc(10)
        code = "def inc(x):\n    return x + 1 if x < 10 else 0"
        result = evaluate_task(code_task(FOUR_CASES), code, SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == pytest.approx(3 / 4, abs=0)
        assert result.severity is Severity.SMALL

    def test_broken_code_is_fatal_with_stderr(self):
        result = evaluate_task(code_task(FOUR_CASES), "def inc(x) return", SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == 0.0
        assert result.severity is Severity.FATAL

    def test_overall_is_mean_of_criteria(self):
        result = evaluate_task(code_task(FOUR_CASES), "def inc(x):\n    return x + 1", SessionConfig(), self.rubric_gateway())
        expected = (1.0 + 0.9 + 0.7 + 0.6) / 4
        assert result.overall == pytest.approx(expected, abs=1e-12)

    def test_conceptual_task_fully_rubric_scored(self):
        task = PracticeTask("task-2", "explain", BloomLevel.MEMORY, "conceptual", "sg")
        result = evaluate_task(task, "my explanation", SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == 0.8
        assert result.severity is Severity.SMALL

    def test_malformed_rubric_raises(self):
        task = PracticeTask("task-2", "explain", BloomLevel.MEMORY, "conceptual", "sg")
        gw = scripted_gateway([ScriptEntry(tag="TRM.evaluate", response=json.dumps({"remark": "missing scores"}))])
        with pytest.raises(EvaluationParseError):
            evaluate_task(task, "text", SessionConfig(), gw)

    def test_severity_functionality_consistency_random(self):
        rng = random.Random(9)
        for _ in range(50):
            total = rng.randint(1, 6)
            passing = rng.randint(0, total)
            cases = [
                {"call": f"inc({i})", "expected": str(i + 1) if i < passing else "-999"}
                for i in range(total)
            ]
            result = evaluate_task(code_task(cases), "def inc(x):\n    return x + 1", SessionConfig(), self.rubric_gateway())
            assert (result.severity is Severity.FATAL) == (result.scores["functionality"] == 0.0)
            assert result.scores["functionality"] == pytest.approx(passing / total)

    def test_fenced_submission_extracted(self):
        submission = "Here you go:\n```python\ndef inc(x):\n    return x + 1\n```\nthanks"
        result = evaluate_task(code_task(FOUR_CASES), submission, SessionConfig(), self.rubric_gateway())
        assert result.scores["functionality"] == 1.0

    def test_extract_code_without_fences_is_identity(self):
        assert extract_code("def f():\n    pass") == "def f():\n    pass"


class TestFollowUp:
    def test_question_targets_updated_level(self, knn_plan):
        gw = scripted_gateway([ScriptEntry(tag="LAM.question", response="next question?")])
        model = initial_state(knn_plan, SessionConfig())
        for s in knn_plan.by_level(BloomLevel.MEMORY):
            update(model, s.id, Assessment(BloomLevel.MEMORY, 0.9, [MetricScore("accuracy", 1.0, 0.9)]))
        q = follow_up(model, knn_plan, SessionConfig(), gw)
        assert q.target_level is BloomLevel.COMPREHENSION
