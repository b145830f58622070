"""Isolated execution of untrusted candidate code.

Programs run in a fresh `python -I` subprocess with its own session group,
CPU/memory/file-size rlimits, a scratch working directory and a minimal
environment; network isolation is attempted via a new network namespace where
the platform allows it. A wall-clock timeout kills the whole process group and
counts every case without a verdict as failed.
"""

from __future__ import annotations

import ctypes
import os
import re
import signal
import subprocess
import sys
import tempfile
from dataclasses import dataclass

from ..errors import SandboxUnavailableError

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_MEMORY_MB = 512
CLONE_NEWNET = 0x40000000

_CASE_MARKER = re.compile(r"^##CASE (\d+) (PASS|FAIL)$", re.MULTILINE)

_sandbox_checked = False


@dataclass
class CaseResults:
    passed: int
    total: int
    stderr: str
    timed_out: bool = False

    @property
    def all_passed(self) -> bool:
        return self.total > 0 and self.passed == self.total


def _child_setup(timeout_s: float, memory_mb: int):
    def inner() -> None:
        import resource

        os.setsid()
        cpu = max(1, int(timeout_s) + 1)
        resource.setrlimit(resource.RLIMIT_CPU, (cpu, cpu))
        mem = memory_mb * 1024 * 1024
        try:
            resource.setrlimit(resource.RLIMIT_AS, (mem, mem))
        except (ValueError, OSError):
            pass
        resource.setrlimit(resource.RLIMIT_FSIZE, (16 * 1024 * 1024, 16 * 1024 * 1024))
        try:
            libc = ctypes.CDLL("libc.so.6", use_errno=True)
            libc.unshare(CLONE_NEWNET)
        except Exception:  # noqa: BLE001 - isolation is best-effort off Linux/root
            pass

    return inner


def _execute(program: str, timeout_s: float, memory_mb: int) -> tuple[str, str, bool]:
    """Run a program; returns (stdout, stderr, timed_out)."""
    with tempfile.TemporaryDirectory(prefix="sandbox-") as workdir:
        path = os.path.join(workdir, "prog.py")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(program)
        proc = subprocess.Popen(
            [sys.executable, "-I", path],
            cwd=workdir,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            env={"PATH": os.environ.get("PATH", "/usr/bin:/bin")},
            preexec_fn=_child_setup(timeout_s, memory_mb),
        )
        try:
            out, err = proc.communicate(timeout=timeout_s)
            return out.decode("utf-8", "replace"), err.decode("utf-8", "replace"), False
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)
            except (ProcessLookupError, PermissionError):
                proc.kill()
            out, err = proc.communicate()
            return (
                out.decode("utf-8", "replace"),
                err.decode("utf-8", "replace") + "\n[timed out]",
                True,
            )


def check_sandbox() -> None:
    """Verify a trivial program runs; raise SandboxUnavailableError otherwise."""
    global _sandbox_checked
    if _sandbox_checked:
        return
    out, err, timed_out = _execute("print('##CASE 0 PASS')", 10.0, DEFAULT_MEMORY_MB)
    if timed_out or "##CASE 0 PASS" not in out:
        raise SandboxUnavailableError(f"sandbox probe failed: {err.strip()[:200]}")
    _sandbox_checked = True


def run_cases(
    code: str,
    cases: list[dict],
    timeout_s: float = DEFAULT_TIMEOUT_S,
    memory_mb: int = DEFAULT_MEMORY_MB,
) -> CaseResults:
    """Evaluate {call, expected} pairs against the candidate code."""
    check_sandbox()
    pairs = [(str(c["call"]), str(c["expected"])) for c in cases]
    driver = [
        "",
        "import sys as __sys",
        f"__cases = {pairs!r}",
        "for __i, (__call, __want) in enumerate(__cases):",
        "    try:",
        "        if eval(__call) == eval(__want):",
        "            print('##CASE %d PASS' % __i)",
        "        else:",
        "            print('##CASE %d FAIL' % __i)",
        "    except BaseException as __exc:",
        "        print('##CASE %d FAIL' % __i)",
        "        print('case %d error: %r' % (__i, __exc), file=__sys.stderr)",
        "    __sys.stdout.flush()",
    ]
    program = code + "\n".join(driver)
    out, err, timed_out = _execute(program, timeout_s, memory_mb)
    passed = sum(1 for _, verdict in _CASE_MARKER.findall(out) if verdict == "PASS")
    return CaseResults(passed=passed, total=len(pairs), stderr=err.strip(), timed_out=timed_out)


def run_program(
    code: str,
    test_program: str,
    entry_point: str,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    memory_mb: int = DEFAULT_MEMORY_MB,
) -> CaseResults:
    """Run a check()-style test program; all-or-nothing single case."""
    check_sandbox()
    program = "\n".join(
        [
            code,
            "",
            test_program,
            "",
            f"check({entry_point})",
            "print('##CASE 0 PASS')",
        ]
    )
    out, err, timed_out = _execute(program, timeout_s, memory_mb)
    passed = 1 if "##CASE 0 PASS" in out else 0
    return CaseResults(passed=passed, total=1, stderr=err.strip(), timed_out=timed_out)
