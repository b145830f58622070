"""Aggregate metrics over per-task outcomes."""

from __future__ import annotations

from typing import Sequence

from ..errors import EmptyResultsError


def pass_at_1(results: Sequence[bool]) -> float:
    """Percentage of tasks whose first solution passed every test case."""
    if not results:
        raise EmptyResultsError("pass@1 needs at least one task result")
    return 100.0 * sum(1 for r in results if r) / len(results)
