"""Canned scripts for fully offline, deterministic sessions.

Each builder returns ScriptEntry lists for the scripted backend: the KNN
script drives the standard ten-turn demo session, the goal-parameterized demo
script backs the HTTP service in scripted mode, and the per-task teaching
script lets the benchmark harness tutor a solution into the simulated
learner's knowledge base.
"""

from __future__ import annotations

import json

from .bench.tasks import BenchmarkTask
from .gateway import ScriptEntry

KNN_GOAL = "KNN algorithm"

KNN_PLAN = {
    "memory": [
        "Remember the basic concepts of KNN, such as 'distance metric', 'k value', "
        "'classification', and 'regression'.",
        "Memorize the input and output format of the KNN algorithm.",
    ],
    "comprehension": [
        "Understand how KNN works: using the nearest neighbors to classify or regress data points.",
        "Understand the impact of selecting the 'k' value on the KNN algorithm's performance.",
        "Understand how to measure distances between data points using different distance "
        "metrics (e.g., Euclidean, Manhattan).",
    ],
    "application": [
        "Apply KNN to simple datasets for classification or regression tasks.",
        "Choose an appropriate 'k' value and experiment with different values.",
        "Implement a basic KNN algorithm and validate its output.",
    ],
    "analysis": [
        "Analyze the effect of different 'k' values and distance metrics on the KNN "
        "algorithm's results.",
        "Compare KNN with other machine learning algorithms (e.g., Decision Trees, SVM) "
        "and evaluate their pros and cons.",
        "Identify and analyze the challenges of using KNN in high-dimensional data "
        "(e.g., the curse of dimensionality).",
    ],
    "evaluation": [
        "Evaluate the performance of a KNN model using metrics such as cross-validation, "
        "confusion matrix, accuracy, and recall.",
        "Tune the KNN model by adjusting the 'k' value and other parameters based on "
        "performance evaluations.",
    ],
    "creation": [
        "Design optimized versions of the KNN algorithm, considering improvements in "
        "computational efficiency (e.g., KD-Tree or Ball-Tree).",
        "Implement variations of the KNN algorithm, such as Weighted KNN or KNN for "
        "regression tasks.",
        "Explore how to handle large datasets with KNN and overcome related challenges.",
    ],
}


def build_knn_script() -> list[ScriptEntry]:
    """Ten full turns: no level ever reaches the advancement threshold."""
    lesson = (
        "KNN (k-nearest neighbors) classifies a point by the majority vote of its k "
        "closest training points under a distance metric such as Euclidean distance. "
        "Choosing k trades off noise sensitivity (small k) against over-smoothing "
        "(large k); distances should be computed on scaled features."
    )
    return [
        ScriptEntry(tag="CDM.decompose", response=json.dumps(KNN_PLAN)),
        ScriptEntry(
            tag="LAM.question",
            response="What are the basic concepts of KNN, such as the distance metric and the k value?",
        ),
        ScriptEntry(
            tag="LAM.assess",
            response=json.dumps(
                {
                    "level": "memory",
                    "scores": {"accuracy": 0.6, "understanding": 0.65, "application": 0.55},
                    "remark": "Recalls the core ideas; application detail is still thin.",
                }
            ),
        ),
        ScriptEntry(tag="DSM.expand", response=json.dumps({"kind": "teach", "content": lesson})),
        ScriptEntry(tag="DSM.value", response="8"),
        ScriptEntry(tag="DSM.reflect", response="Focus on concrete distance examples next time."),
        ScriptEntry(tag="DSM.compile", response=lesson),
        ScriptEntry(tag="DSM.summarize", response="Notes covering KNN distances and k selection."),
        ScriptEntry(
            tag="TRM.task",
            response=json.dumps(
                {
                    "prompt": "Explain in your own words how the choice of k changes KNN predictions.",
                    "kind": "conceptual",
                }
            ),
        ),
        ScriptEntry(
            tag="TRM.evaluate",
            response=json.dumps(
                {
                    "code_quality": 0.6,
                    "performance": 0.6,
                    "maintainability": 0.6,
                    "functionality": 0.6,
                    "remark": "Reasonable grasp of the basics.",
                }
            ),
        ),
        ScriptEntry(tag="TRM.converse", response="Let us walk through one neighbor vote together. Ready?"),
        ScriptEntry(tag="learner.grade", response="yes"),
        ScriptEntry(
            tag="learner.respond",
            response=(
                "KNN classifies a point by the majority vote of its k nearest neighbors, "
                "measured with a distance metric."
            ),
        ),
    ]


def build_demo_script(goal: str) -> list[ScriptEntry]:
    """Goal-parameterized script with quick mastery so progress is visible."""
    plan = {
        "memory": [f"Know the core terms of {goal}."],
        "comprehension": [f"Explain how {goal} works in your own words."],
        "application": [f"Use {goal} on a small worked example."],
        "analysis": [f"Compare {goal} against an alternative approach."],
        "evaluation": [f"Judge when {goal} performs well or poorly."],
        "creation": [f"Design an improvement or extension of {goal}."],
    }
    lesson = (
        f"Today's lesson on {goal}: we start from the core definitions, walk through a "
        "worked example, and finish with the main trade-offs to remember."
    )
    return [
        ScriptEntry(tag="CDM.decompose", response=json.dumps(plan)),
        ScriptEntry(tag="LAM.question", response=f"To begin: what are the core terms of {goal}?"),
        ScriptEntry(
            tag="LAM.assess",
            response=json.dumps(
                {
                    "level": "memory",
                    "scores": {"accuracy": 0.8, "understanding": 0.8, "application": 0.8},
                    "remark": "Strong answer.",
                }
            ),
        ),
        ScriptEntry(tag="DSM.expand", response=json.dumps({"kind": "teach", "content": lesson})),
        ScriptEntry(tag="DSM.value", response="8"),
        ScriptEntry(tag="DSM.reflect", response="Add a second worked example."),
        ScriptEntry(tag="DSM.compile", response=lesson),
        ScriptEntry(tag="DSM.summarize", response=f"Uploaded notes about {goal}."),
        ScriptEntry(
            tag="TRM.task",
            response=json.dumps(
                {
                    "prompt": f"Apply what you just read: summarize {goal} in two sentences.",
                    "kind": "conceptual",
                }
            ),
        ),
        ScriptEntry(
            tag="TRM.evaluate",
            response=json.dumps(
                {
                    "functionality": 0.8,
                    "code_quality": 0.8,
                    "performance": 0.8,
                    "maintainability": 0.8,
                    "remark": "Clear and complete.",
                }
            ),
        ),
        ScriptEntry(tag="TRM.converse", response="Which part should we look at more closely?"),
        ScriptEntry(tag="learner.grade", response="yes"),
        ScriptEntry(tag="learner.respond", response=f"Here is what I understood about {goal} so far."),
    ]


def build_teaching_script(task: BenchmarkTask, turns: int = 3) -> list[ScriptEntry]:
    """Script a session that teaches a benchmark task's canonical solution.

    The lesson embeds the solution code, the simulated learner absorbs it into
    its knowledge base, and its final scripted reply hands the code back, so
    the sandbox verdict measures what was taught.
    """
    if not task.canonical_solution:
        raise ValueError(f"task {task.id} has no canonical solution to teach")
    solution = task.canonical_solution
    plan = {
        level: [f"{level} objective for {task.entry_point}"]
        for level in ("memory", "comprehension", "application", "analysis", "evaluation", "creation")
    }
    lesson = (
        f"We are implementing `{task.entry_point}`. Specification:\n{task.prompt}\n"
        f"A correct reference implementation is:\n```python\n{solution}\n```\n"
        "Study the structure before writing your own."
    )
    answer_with_code = f"Based on my notes, the implementation is:\n```python\n{solution}\n```"
    return [
        ScriptEntry(tag="CDM.decompose", response=json.dumps(plan)),
        ScriptEntry(tag="LAM.question", response=f"What should `{task.entry_point}` compute?"),
        ScriptEntry(
            tag="LAM.assess",
            response=json.dumps(
                {
                    "level": "memory",
                    "scores": {"accuracy": 0.5, "understanding": 0.5, "application": 0.5},
                    "remark": "Partial recall.",
                }
            ),
        ),
        ScriptEntry(tag="DSM.expand", response=json.dumps({"kind": "teach", "content": lesson})),
        ScriptEntry(tag="DSM.value", response="9"),
        ScriptEntry(tag="DSM.reflect", response="Show the failing edge case first."),
        ScriptEntry(tag="DSM.compile", response=lesson),
        ScriptEntry(
            tag="TRM.task",
            response=json.dumps(
                {"prompt": f"Describe the approach used by `{task.entry_point}`.", "kind": "conceptual"}
            ),
        ),
        ScriptEntry(
            tag="TRM.evaluate",
            response=json.dumps(
                {
                    "functionality": 0.6,
                    "code_quality": 0.6,
                    "performance": 0.6,
                    "maintainability": 0.6,
                    "remark": "On track.",
                }
            ),
        ),
        ScriptEntry(tag="learner.grade", response="yes"),
        # the solve prompt names the entry point; route it to the code answer
        ScriptEntry(tag="learner.respond", contains="write the complete code", response=answer_with_code),
        ScriptEntry(
            tag="learner.respond",
            response=f"I am studying `{task.entry_point}` and its reference implementation.",
        ),
    ]
