from .metrics import pass_at_1
from .quality import QualityScore, build_quality_prompt, render_transcript, score_quality, truncate_words
from .sandbox import CaseResults, run_cases, run_program
from .tasks import BenchmarkTask, load_suite

__all__ = [
    "BenchmarkTask",
    "CaseResults",
    "QualityScore",
    "build_quality_prompt",
    "load_suite",
    "pass_at_1",
    "render_transcript",
    "run_cases",
    "run_program",
    "score_quality",
    "truncate_words",
]
