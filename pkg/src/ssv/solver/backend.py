"""Solver backend: satisfiability checks with caching, budgets, and
program execution over option checks.

Checks are keyed by a canonical digest of the query; SAT/UNSAT results are
cached (budget-independent), UNKNOWN never is. Each worker thread owns one
persistent solver session.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..dsl.ast import (
    CheckType,
    Expr,
    InitSegment,
    Not,
    SegmentedProgram,
)
from ..dsl.printer import print_expr, print_init_body
from ..status import Status
from ..tasks import OptionLabel
from .client import SolverClient, default_solver_cmd
from .smtlib import emit_script

DEFAULT_CHECK_TIMEOUT_MS = 10_000
DEFAULT_GROUNDING_BOUND = 4096


@dataclass(frozen=True)
class CheckResult:
    status: Status
    elapsed_ms: float
    from_cache: bool = False


@dataclass(frozen=True)
class OptionCheck:
    check_type: CheckType
    results: tuple[CheckResult, ...]
    passed: bool


@dataclass
class AnswerOutcome:
    passing: set[OptionLabel]
    answer: OptionLabel | None
    per_option: dict[OptionLabel, OptionCheck] = field(default_factory=dict)


def canonical_key(init: InitSegment, exprs: list[Expr]) -> str:
    """256-bit digest of the canonical (alpha-normalized) query text."""
    parts = [print_init_body(init, canonical=True)]
    parts.extend(print_expr(e, canonical=True) for e in exprs)
    digest = hashlib.sha256("\n".join(parts).encode("utf-8"))
    return digest.hexdigest()


class SolverBackend:
    def __init__(self, solver_cmd: list[str] | None = None,
                 check_timeout_ms: float = DEFAULT_CHECK_TIMEOUT_MS,
                 grounding_bound: int = DEFAULT_GROUNDING_BOUND):
        self.solver_cmd = list(solver_cmd) if solver_cmd else default_solver_cmd()
        self.check_timeout_ms = check_timeout_ms
        self.grounding_bound = grounding_bound
        self._cache: dict[str, Status] = {}
        self._inflight: dict[str, threading.Event] = {}
        self._lock = threading.Lock()
        self._local = threading.local()
        self._clients: list[SolverClient] = []

    # --- sessions ---

    def _client(self) -> SolverClient:
        client = getattr(self._local, "client", None)
        if client is None:
            client = SolverClient(self.solver_cmd)
            self._local.client = client
            with self._lock:
                self._clients.append(client)
        return client

    def close(self) -> None:
        with self._lock:
            clients, self._clients = self._clients, []
        for client in clients:
            client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # --- cache persistence ---

    def save_cache(self, path: str | Path) -> None:
        with self._lock:
            data = {k: v.value for k, v in sorted(self._cache.items())}
        Path(path).write_text(json.dumps(data, indent=0, sort_keys=True),
                              encoding="utf-8")

    def load_cache(self, path: str | Path) -> None:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        with self._lock:
            for key, value in data.items():
                status = Status(value)
                if status is not Status.UNKNOWN:
                    self._cache[key] = status

    @property
    def cache_size(self) -> int:
        with self._lock:
            return len(self._cache)

    # --- checks ---

    def check_sat(self, init: InitSegment, extra: list[Expr] = (),
                  budget_ms: float | None = None) -> CheckResult:
        """SAT iff base preconditions plus extras are jointly satisfiable
        within the budget; UNKNOWN on timeout, never cached."""
        extra = list(extra)
        key = canonical_key(init, extra)
        while True:
            with self._lock:
                cached = self._cache.get(key)
                if cached is not None:
                    return CheckResult(cached, 0.0, from_cache=True)
                event = self._inflight.get(key)
                if event is None:
                    event = threading.Event()
                    self._inflight[key] = event
                    break
            event.wait()
        try:
            started = time.monotonic()
            script = emit_script(init, extra, self.grounding_bound)
            budget = budget_ms if budget_ms is not None else self.check_timeout_ms
            status = self._client().check(script, budget)
            elapsed = (time.monotonic() - started) * 1000.0
            with self._lock:
                if status is not Status.UNKNOWN:
                    self._cache[key] = status
            return CheckResult(status, elapsed, from_cache=False)
        finally:
            with self._lock:
                self._inflight.pop(key, None)
            event.set()

    def is_sat(self, init: InitSegment, preconditions: list[Expr],
               prop: Expr, budget_ms: float | None = None) -> bool:
        result = self.check_sat(init, list(preconditions) + [prop], budget_ms)
        return result.status is Status.SAT

    def is_unsat(self, init: InitSegment, preconditions: list[Expr],
                 prop: Expr, budget_ms: float | None = None) -> bool:
        result = self.check_sat(init, list(preconditions) + [prop], budget_ms)
        return result.status is Status.UNSAT

    def is_valid(self, init: InitSegment, preconditions: list[Expr],
                 prop: Expr, budget_ms: float | None = None) -> bool:
        """Valid iff the precondition set is satisfiable and the negated
        property is not; UNKNOWN anywhere makes this false."""
        base = self.check_sat(init, list(preconditions), budget_ms)
        if base.status is not Status.SAT:
            return False
        negated = self.check_sat(init, list(preconditions) + [Not(prop)],
                                 budget_ms)
        return negated.status is Status.UNSAT

    def execute_program(self, program: SegmentedProgram,
                        budget_ms: float | None = None) -> AnswerOutcome:
        """Run every option check against init plus all constraints; the
        answer exists iff exactly one option passes."""
        preconditions = [e for c in program.constraints for e in c.exprs]
        outcome = AnswerOutcome(passing=set(), answer=None)
        for option in program.options:
            results: list[CheckResult] = []
            if option.check_type is CheckType.SAT:
                r = self.check_sat(program.init, preconditions + [option.check_expr],
                                   budget_ms)
                results.append(r)
                passed = r.status is Status.SAT
            elif option.check_type is CheckType.UNSAT:
                r = self.check_sat(program.init, preconditions + [option.check_expr],
                                   budget_ms)
                results.append(r)
                passed = r.status is Status.UNSAT
            else:  # VALID
                base = self.check_sat(program.init, preconditions, budget_ms)
                results.append(base)
                passed = base.status is Status.SAT
                if passed:
                    negated = self.check_sat(
                        program.init,
                        preconditions + [Not(option.check_expr)], budget_ms)
                    results.append(negated)
                    passed = negated.status is Status.UNSAT
            outcome.per_option[option.label] = OptionCheck(
                option.check_type, tuple(results), passed)
            if passed:
                outcome.passing.add(option.label)
        if len(outcome.passing) == 1:
            outcome.answer = next(iter(outcome.passing))
        return outcome
