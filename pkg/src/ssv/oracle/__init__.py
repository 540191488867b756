"""Brute-force model enumeration over finite-domain programs.

Ground truth for solver testing: the evaluator under this enumeration is the
normative semantics of the constraint language. The hot loop lives in a
compiled extension when available; a pure-python twin is selected otherwise
(``KERNEL`` names the active one).
"""

from __future__ import annotations

from array import array

from ..dsl.ast import EnumSort, Expr, ForAll, Exists, InitSegment
from ..dsl.rewrite import expand_comprehensions, ground_quantifiers, walk
from ..errors import CapExceeded
from ..status import Status
from .compiler import Space, Unsupported, build_space, compile_exprs

try:  # pragma: no cover - exercised via the build
    from . import _kernel as kernel

    KERNEL = "compiled"
except ImportError:  # pragma: no cover
    from . import _kernel_py as kernel

    KERNEL = "python"

MODE_EXISTS = 0
MODE_COUNT = 1
MODE_EVAL = 2

DEFAULT_CAP = 2 ** 24


def _grounded(init: InitSegment, extra: list[Expr]) -> list[Expr]:
    exprs = list(init.preconditions) + list(extra)
    return [ground_quantifiers(expand_comprehensions(e)) for e in exprs]


def _quantifies_infinite(exprs: list[Expr]) -> bool:
    for e in exprs:
        for node in walk(e):
            if isinstance(node, (ForAll, Exists)):
                if any(not isinstance(b.sort, EnumSort) for b in node.binders):
                    return True
    return False


def supports_program(init: InitSegment, extra: list[Expr] = (),
                     cap: int = DEFAULT_CAP) -> bool:
    """True when every reachable sort is a finite enum (or bool) and the
    state space fits under the enumeration cap."""
    try:
        exprs = [expand_comprehensions(e)
                 for e in list(init.preconditions) + list(extra)]
        if _quantifies_infinite(exprs):
            return False
        space = build_space(init, exprs)
    except (Unsupported, CapExceeded):
        return False
    return space.total_states <= cap


def state_count(init: InitSegment, extra: list[Expr] = ()) -> int:
    exprs = [expand_comprehensions(e)
             for e in list(init.preconditions) + list(extra)]
    return build_space(init, exprs).total_states


def _run(init: InitSegment, extra: list[Expr], mode: int, cap: int):
    try:
        exprs = _grounded(init, extra)
        space = build_space(init, exprs)
    except Unsupported as exc:
        raise CapExceeded(str(exc)) from exc
    if space.total_states > cap:
        raise CapExceeded(
            f"state space {space.total_states} exceeds enumeration cap {cap}")
    code, starts, max_stack = compile_exprs(exprs, space)
    cells = array("q", [0] * space.num_cells)
    return kernel.run(code, starts, space.domains, cells, mode, max_stack)


def oracle_check(init: InitSegment, extra: list[Expr] = (),
                 cap: int = DEFAULT_CAP) -> Status:
    """SAT iff some total assignment satisfies the base preconditions and
    every extra expression; never UNKNOWN."""
    return Status.SAT if _run(init, extra, MODE_EXISTS, cap) else Status.UNSAT


def count_models(init: InitSegment, extra: list[Expr] = (),
                 cap: int = DEFAULT_CAP) -> int:
    """Exact number of satisfying assignments."""
    return int(_run(init, extra, MODE_COUNT, cap))


def evaluate(init: InitSegment, expr: Expr, cells: list[int]) -> int:
    """Value of one expression under an explicit cell assignment (testing
    hook for evaluator-equivalence properties)."""
    grounded = ground_quantifiers(expand_comprehensions(expr))
    space = build_space(init, [grounded])
    code, starts, max_stack = compile_exprs([grounded], space)
    buf = array("q", cells)
    if len(buf) != space.num_cells:
        raise ValueError(f"expected {space.num_cells} cells, got {len(buf)}")
    return int(kernel.run(code, starts, space.domains, buf, MODE_EVAL, max_stack))


def space_of(init: InitSegment, extra: list[Expr] = ()) -> Space:
    exprs = [expand_comprehensions(e)
             for e in list(init.preconditions) + list(extra)]
    return build_space(init, exprs)
