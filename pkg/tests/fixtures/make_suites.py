"""Regenerates the JSONL benchmark fixtures. Run from this directory."""

import json
from pathlib import Path

MINI = [
    {
        "task_id": "mini/0",
        "entry_point": "add",
        "prompt": "def add(a, b):\n    \"\"\"Return the sum of a and b.\"\"\"\n",
        "canonical_solution": "def add(a, b):\n    return a + b\n",
        "test": "def check(candidate):\n    assert candidate(2, 3) == 5\n    assert candidate(-1, 1) == 0\n    assert candidate(0, 0) == 0\n",
    },
    {
        "task_id": "mini/1",
        "entry_point": "reverse_string",
        "prompt": "def reverse_string(s):\n    \"\"\"Return s reversed.\"\"\"\n",
        "canonical_solution": "def reverse_string(s):\n    return s[::-1]\n",
        "test": "def check(candidate):\n    assert candidate('abc') == 'cba'\n    assert candidate('') == ''\n    assert candidate('aa') == 'aa'\n",
    },
    {
        "task_id": "mini/2",
        "entry_point": "fib",
        "prompt": "def fib(n):\n    \"\"\"Return the n-th Fibonacci number, fib(0) == 0.\"\"\"\n",
        "canonical_solution": "def fib(n):\n    a, b = 0, 1\n    for _ in range(n):\n        a, b = b, a + b\n    return a\n",
        "test": "def check(candidate):\n    assert candidate(0) == 0\n    assert candidate(1) == 1\n    assert candidate(10) == 55\n",
    },
    {
        "task_id": "mini/3",
        "entry_point": "is_palindrome",
        "prompt": "def is_palindrome(s):\n    \"\"\"True iff s reads the same forwards and backwards.\"\"\"\n",
        "canonical_solution": "def is_palindrome(s):\n    return s == s[::-1]\n",
        "test": "def check(candidate):\n    assert candidate('level') is True\n    assert candidate('python') is False\n    assert candidate('') is True\n",
    },
    {
        "task_id": "mini/4",
        "entry_point": "gcd",
        "prompt": "def gcd(a, b):\n    \"\"\"Greatest common divisor of two non-negative integers.\"\"\"\n",
        "canonical_solution": "def gcd(a, b):\n    while b:\n        a, b = b, a % b\n    return a\n",
        "test": "def check(candidate):\n    assert candidate(12, 18) == 6\n    assert candidate(7, 13) == 1\n    assert candidate(0, 5) == 5\n",
    },
    {
        "task_id": "mini/5",
        "entry_point": "max_of_list",
        "prompt": "def max_of_list(xs):\n    \"\"\"Largest element of a non-empty list.\"\"\"\n",
        "canonical_solution": "def max_of_list(xs):\n    best = xs[0]\n    for x in xs[1:]:\n        if x > best:\n            best = x\n    return best\n",
        "test": "def check(candidate):\n    assert candidate([1, 5, 3]) == 5\n    assert candidate([-2, -7]) == -2\n    assert candidate([4]) == 4\n",
    },
    {
        "task_id": "mini/6",
        "entry_point": "count_vowels",
        "prompt": "def count_vowels(s):\n    \"\"\"Number of vowels (aeiou, lowercase) in s.\"\"\"\n",
        "canonical_solution": "def count_vowels(s):\n    return sum(1 for ch in s if ch in 'aeiou')\n",
        "test": "def check(candidate):\n    assert candidate('banana') == 3\n    assert candidate('xyz') == 0\n    assert candidate('') == 0\n",
    },
    {
        "task_id": "mini/7",
        "entry_point": "factorial",
        "prompt": "def factorial(n):\n    \"\"\"n! for n >= 0.\"\"\"\n",
        "canonical_solution": "def factorial(n):\n    out = 1\n    for k in range(2, n + 1):\n        out *= k\n    return out\n",
        "test": "def check(candidate):\n    assert candidate(0) == 1\n    assert candidate(5) == 120\n    assert candidate(1) == 1\n",
    },
    {
        "task_id": "mini/8",
        "entry_point": "merge_sorted",
        "prompt": "def merge_sorted(a, b):\n    \"\"\"Merge two sorted lists into one sorted list.\"\"\"\n",
        "canonical_solution": "def merge_sorted(a, b):\n    out = []\n    i = j = 0\n    while i < len(a) and j < len(b):\n        if a[i] <= b[j]:\n            out.append(a[i]); i += 1\n        else:\n            out.append(b[j]); j += 1\n    out.extend(a[i:])\n    out.extend(b[j:])\n    return out\n",
        "test": "def check(candidate):\n    assert candidate([1, 3], [2, 4]) == [1, 2, 3, 4]\n    assert candidate([], [1]) == [1]\n    assert candidate([1, 1], [1]) == [1, 1, 1]\n",
    },
    {
        "task_id": "mini/9",
        "entry_point": "clamp",
        "prompt": "def clamp(x, low, high):\n    \"\"\"Clamp x into [low, high].\"\"\"\n",
        "canonical_solution": "def clamp(x, low, high):\n    return max(low, min(high, x))\n",
        "test": "def check(candidate):\n    assert candidate(5, 0, 3) == 3\n    assert candidate(-1, 0, 3) == 0\n    assert candidate(2, 0, 3) == 2\n",
    },
]

TEACH = [
    {
        "task_id": "teach/add_numbers",
        "entry_point": "add_numbers",
        "prompt": "def add_numbers(a, b):\n    \"\"\"Return the sum of two numbers.\"\"\"\n",
        "canonical_solution": "def add_numbers(a, b):\n    return a + b\n",
        "cases": [
            {"call": "add_numbers(2, 3)", "expected": "5"},
            {"call": "add_numbers(-1, 4)", "expected": "3"},
            {"call": "add_numbers(0, 0)", "expected": "0"},
        ],
        "topic": "adding two numbers in code",
    },
    {
        "task_id": "teach/square",
        "entry_point": "square",
        "prompt": "def square(x):\n    \"\"\"Return x squared.\"\"\"\n",
        "canonical_solution": "def square(x):\n    return x * x\n",
        "cases": [
            {"call": "square(3)", "expected": "9"},
            {"call": "square(-2)", "expected": "4"},
        ],
        "topic": "squaring a number in code",
    },
    {
        "task_id": "teach/word_count",
        "entry_point": "word_count",
        "prompt": "def word_count(s):\n    \"\"\"Number of whitespace-separated words.\"\"\"\n",
        "canonical_solution": "def word_count(s):\n    return len(s.split())\n",
        "cases": [
            {"call": "word_count('a b c')", "expected": "3"},
            {"call": "word_count('')", "expected": "0"},
        ],
        "topic": "counting words in a string",
    },
]


def main() -> None:
    here = Path(__file__).parent
    with (here / "mini_suite.jsonl").open("w", encoding="utf-8") as fh:
        for row in MINI:
            fh.write(json.dumps(row) + "\n")
    with (here / "teach_suite.jsonl").open("w", encoding="utf-8") as fh:
        for row in TEACH:
            fh.write(json.dumps(row) + "\n")


if __name__ == "__main__":
    main()
