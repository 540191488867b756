"""Subprocess client for any solver speaking SMT-LIB 2 over stdio.

Each check gets a fresh logical session via ``(reset)``; the process itself
is kept alive across checks to amortize startup. A check that exceeds its
budget kills the process and reports unknown; the next check respawns.
"""

from __future__ import annotations

import queue
import shutil
import subprocess
import sys
import threading
import time

from ..errors import SolverCrash
from ..status import Status

_STATUS_LINES = {"sat": Status.SAT, "unsat": Status.UNSAT, "unknown": Status.UNKNOWN}


def default_solver_cmd() -> list[str]:
    """Prefer a real SMT solver on PATH; fall back to the bundled one."""
    z3 = shutil.which("z3")
    if z3:
        return [z3, "-in"]
    return [sys.executable, "-m", "ssv.smtfd"]


class SolverClient:
    """One persistent solver process, confined to a single caller thread."""

    def __init__(self, cmd: list[str] | None = None):
        self.cmd = list(cmd) if cmd else default_solver_cmd()
        self._proc: subprocess.Popen | None = None
        self._lines: queue.Queue | None = None
        self._counter = 0

    def _spawn(self) -> None:
        try:
            self._proc = subprocess.Popen(
                self.cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
            )
        except OSError as exc:
            raise SolverCrash(f"cannot start solver {self.cmd!r}: {exc}") from exc
        self._lines = queue.Queue()

        def pump(proc: subprocess.Popen, out: queue.Queue) -> None:
            for line in proc.stdout:
                out.put(line.rstrip("\n"))
            out.put(None)

        threading.Thread(target=pump, args=(self._proc, self._lines),
                         daemon=True).start()

    def _ensure_alive(self) -> None:
        if self._proc is None or self._proc.poll() is not None:
            self._kill()
            self._spawn()

    def _kill(self) -> None:
        if self._proc is not None:
            try:
                self._proc.kill()
                self._proc.wait(timeout=5)
            except OSError:
                pass
            except subprocess.TimeoutExpired:  # pragma: no cover
                pass
        self._proc = None
        self._lines = None

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            try:
                self._proc.stdin.write("(exit)\n")
                self._proc.stdin.flush()
            except OSError:
                pass
        self._kill()

    def check(self, script: str, budget_ms: float) -> Status:
        """Run one script ending in (check-sat); returns its status.

        The budget is a wall-clock deadline over the whole round trip:
        results arriving after it are discarded as unknown (conservative).
        """
        deadline = time.monotonic() + budget_ms / 1000.0
        self._ensure_alive()
        self._counter += 1
        nonce = f"ssv-done-{self._counter}"
        payload = f"(reset)\n{script}\n(echo \"{nonce}\")\n"
        try:
            self._proc.stdin.write(payload)
            self._proc.stdin.flush()
        except OSError:
            # one respawn attempt; a second failure is a crash
            self._kill()
            self._spawn()
            try:
                self._proc.stdin.write(payload)
                self._proc.stdin.flush()
            except OSError as exc:
                self._kill()
                raise SolverCrash(f"solver pipe broken: {exc}") from exc
        status: Status | None = None
        errors: list[str] = []
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self._kill()
                return Status.UNKNOWN
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                self._kill()
                return Status.UNKNOWN
            if line is None:
                self._kill()
                raise SolverCrash(
                    "solver process exited mid-check"
                    + (f": {errors[-1]}" if errors else ""))
            line = line.strip()
            if line == nonce:
                if status is None:
                    raise SolverCrash(
                        "solver produced no status"
                        + (f": {errors[-1]}" if errors else ""))
                return status
            if line in _STATUS_LINES:
                status = _STATUS_LINES[line]
            elif line.startswith("(error"):
                errors.append(line)
