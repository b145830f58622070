"""Benchmark protocol: tutor a simulated learner per task, then let it solve.

Each task gets a fresh learner with an empty knowledge base. After the
tutoring session the learner is asked for the complete solution, the answer's
code is executed in the sandbox, and pass@1 aggregates the all-cases-passed
verdicts. A zero-turn run skips tutoring entirely and measures the untaught
baseline.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Sequence

from ..domain import SessionConfig
from ..errors import TutorError
from ..gateway import Gateway, scripted_gateway
from ..learner import SimulatedLearner
from ..orchestrator import SimulatorEndpoint, run_session
from ..scripted import build_teaching_script
from ..teaching import extract_code
from .metrics import pass_at_1
from .quality import render_transcript, score_quality
from .sandbox import CaseResults, run_cases, run_program
from .tasks import BenchmarkTask, load_suite

SOLVE_PROMPT = (
    "Now write the complete code for the function `{entry_point}`.\n"
    "Specification:\n{prompt}\n"
    "Reply with the full implementation in a fenced code block."
)


@dataclass
class TaskReport:
    id: str
    passed: bool
    turns: int
    cases_passed: int
    cases_total: int
    quality: dict[str, int] = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "passed": self.passed,
            "turns": self.turns,
            "cases": {"passed": self.cases_passed, "total": self.cases_total},
        }
        if self.quality:
            data["quality"] = dict(self.quality)
        if self.error:
            data["error"] = self.error
        return data


@dataclass
class Report:
    suite: str
    config_digest: str
    pass_at_1: float
    label: str
    tasks: list[TaskReport]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "config_digest": self.config_digest,
            "label": self.label,
            "pass_at_1": self.pass_at_1,
            "tasks": [t.to_dict() for t in self.tasks],
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")


def run_candidate(code: str, task: BenchmarkTask, timeout_s: float = 10.0) -> CaseResults:
    """Execute candidate code against the task's cases or test program."""
    if task.cases:
        return run_cases(code, task.cases, timeout_s=timeout_s)
    return run_program(code, task.test, task.entry_point, timeout_s=timeout_s)


def solve_with_learner(learner: SimulatedLearner, task: BenchmarkTask) -> str:
    answer = learner.respond(SOLVE_PROMPT.format(entry_point=task.entry_point, prompt=task.prompt))
    return extract_code(answer)


GatewayFactory = Callable[[BenchmarkTask], Gateway]


def run_benchmark(
    suite: str | Path | Sequence[BenchmarkTask],
    config: SessionConfig,
    ablation: str | None = None,
    turns: int | None = None,
    gateway_factory: GatewayFactory | None = None,
    quality_metrics: Sequence[str] = (),
    timeout_s: float = 10.0,
    max_workers: int = 4,
    repeats: int = 1,
) -> Report:
    """Tutor-then-solve over a suite; turns=0 measures the untaught baseline."""
    if isinstance(suite, (str, Path)):
        tasks = load_suite(suite)
        suite_name = str(suite)
    else:
        tasks = list(suite)
        suite_name = f"<{len(tasks)} tasks>"

    effective_turns = config.turns if turns is None else turns
    run_config = replace(
        config,
        turns=max(1, effective_turns),
        ablations=frozenset({ablation} if ablation else set()),
    )
    run_config.validate()
    if gateway_factory is None:
        gateway_factory = lambda task: scripted_gateway(build_teaching_script(task))  # noqa: E731

    def one_task(task: BenchmarkTask) -> TaskReport:
        gateway = gateway_factory(task)
        learner = SimulatedLearner(gateway)
        transcript = []
        try:
            if effective_turns > 0:
                result = run_session(
                    run_config,
                    task.topic,
                    SimulatorEndpoint(learner),
                    gateway,
                    session_id=f"bench-{task.id}",
                )
                transcript = result.transcript
            code = solve_with_learner(learner, task)
            cases = run_candidate(code, task, timeout_s=timeout_s)
        except TutorError as exc:
            return TaskReport(task.id, False, effective_turns, 0, 0, error=str(exc))
        quality: dict[str, int] = {}
        for metric in quality_metrics:
            quality[metric] = score_quality(render_transcript(transcript), metric, gateway).score
        return TaskReport(
            task.id,
            cases.all_passed,
            effective_turns,
            cases.passed,
            cases.total,
            quality=quality,
        )

    rates: list[float] = []
    reports: list[TaskReport] = []
    for _ in range(max(1, repeats)):
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                reports = list(pool.map(one_task, tasks))
        else:
            reports = [one_task(t) for t in tasks]
        reports.sort(key=lambda r: r.id)
        rates.append(pass_at_1([r.passed for r in reports]))

    digest = hashlib.sha256(
        json.dumps(run_config.to_dict(), sort_keys=True).encode("utf-8")
    ).hexdigest()[:12]
    return Report(
        suite=suite_name,
        config_digest=digest,
        pass_at_1=sum(rates) / len(rates),
        label=f"w/o {ablation}" if ablation else "full",
        tasks=reports,
    )


def benchmark_zero_turn(
    suite: str | Path | Sequence[BenchmarkTask],
    config: SessionConfig,
    timeout_s: float = 10.0,
) -> Report:
    """Baseline with tutoring skipped: the untaught learner answers directly."""
    return run_benchmark(suite, config, turns=0, timeout_s=timeout_s)
