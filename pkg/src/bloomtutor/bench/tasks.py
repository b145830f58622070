"""Benchmark task model and JSONL suite loading."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import SuiteParseError


@dataclass
class BenchmarkTask:
    id: str
    prompt: str
    entry_point: str
    canonical_solution: str | None = None
    test: str = ""  # check()-style test program
    cases: list[dict] = field(default_factory=list)  # {call, expected} pairs
    topic: str = ""

    def __post_init__(self) -> None:
        if not self.test and not self.cases:
            raise SuiteParseError(f"task {self.id}: no tests")
        if not self.topic:
            head = self.prompt.strip().splitlines()[0] if self.prompt.strip() else self.id
            self.topic = f"{self.entry_point}: {head}"


def load_suite(path: str | Path) -> list[BenchmarkTask]:
    """Parse a JSONL suite with fields task_id, prompt, canonical_solution,
    test (and/or cases), entry_point."""
    tasks: list[BenchmarkTask] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SuiteParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        try:
            tasks.append(
                BenchmarkTask(
                    id=str(raw["task_id"]),
                    prompt=str(raw["prompt"]),
                    entry_point=str(raw["entry_point"]),
                    canonical_solution=raw.get("canonical_solution"),
                    test=str(raw.get("test", "")),
                    cases=list(raw.get("cases", [])),
                    topic=str(raw.get("topic", "")),
                )
            )
        except KeyError as exc:
            raise SuiteParseError(f"{path}:{lineno}: missing field {exc}") from exc
    if not tasks:
        raise SuiteParseError(f"{path}: suite is empty")
    return tasks
