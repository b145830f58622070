"""Benchmark command line: run suites, score quality, recompute pass@1."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..config import build_gateway, load_config
from ..domain import SessionConfig, TranscriptTurn
from ..gateway import Gateway, ScriptEntry, scripted_gateway
from .quality import METRICS, render_transcript, score_quality
from .runner import run_benchmark


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="bench", description="Tutoring benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Run a benchmark suite")
    run_p.add_argument("--suite", required=True, help="Path to a JSONL task suite")
    run_p.add_argument("--ablate", choices=["CDM", "LAM", "DSM", "TRM", "KEMM"], default=None)
    run_p.add_argument("--turns", type=int, default=None, help="Tutoring turns (0 = untaught baseline)")
    run_p.add_argument("--backend", choices=["scripted", "remote"], default="scripted")
    run_p.add_argument("--out", required=True, help="Report JSON output path")
    run_p.add_argument("--timeout", type=float, default=10.0, help="Sandbox timeout per task (s)")
    run_p.add_argument("--repeats", type=int, default=1)
    run_p.add_argument("--quality", action="append", default=[], choices=list(METRICS))
    run_p.add_argument("--workers", type=int, default=4)

    quality_p = sub.add_parser("quality", help="Score a session transcript on a rubric metric")
    quality_p.add_argument("--transcript", required=True, help="Session JSONL path")
    quality_p.add_argument("--metric", required=True, choices=list(METRICS))
    quality_p.add_argument("--backend", choices=["scripted", "remote"], default="remote")

    passk_p = sub.add_parser("passk", help="Recompute pass@1 from a report")
    passk_p.add_argument("--report", required=True)

    args = parser.parse_args(argv)

    if args.command == "run":
        config = SessionConfig(turns=args.turns if args.turns and args.turns > 0 else 10)
        gateway_factory = None
        if args.backend == "remote":
            service_cfg = load_config()
            service_cfg.backend_kind = "remote"
            gateway_factory = lambda task: build_gateway(service_cfg)  # noqa: E731
        report = run_benchmark(
            args.suite,
            config,
            ablation=args.ablate,
            turns=args.turns,
            gateway_factory=gateway_factory,
            quality_metrics=args.quality,
            timeout_s=args.timeout,
            max_workers=args.workers,
            repeats=args.repeats,
        )
        report.write(args.out)
        print(f"{report.label}: pass@1 = {report.pass_at_1:.1f} over {len(report.tasks)} tasks -> {args.out}")
        return 0

    if args.command == "quality":
        turns = _load_transcript(args.transcript)
        gateway = _quality_gateway(args.backend)
        result = score_quality(render_transcript(turns), args.metric, gateway)
        print(json.dumps({"metric": result.metric, "score": result.score, "rationale": result.rationale}))
        return 0

    if args.command == "passk":
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
        tasks = report.get("tasks", [])
        if not tasks:
            print("report has no tasks", file=sys.stderr)
            return 1
        rate = 100.0 * sum(1 for t in tasks if t.get("passed")) / len(tasks)
        print(f"pass@1 = {rate:.1f} ({sum(1 for t in tasks if t.get('passed'))}/{len(tasks)})")
        return 0

    return 1


def _load_transcript(path: str) -> list[TranscriptTurn]:
    turns = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        if raw.get("type") == "header":
            continue
        turns.append(TranscriptTurn.from_dict(raw))
    return turns


def _quality_gateway(backend: str) -> Gateway:
    if backend == "scripted":
        # deterministic stub evaluator for offline runs
        return scripted_gateway([ScriptEntry(tag="bench.quality", response="4")])
    cfg = load_config()
    cfg.backend_kind = "remote"
    return build_gateway(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
