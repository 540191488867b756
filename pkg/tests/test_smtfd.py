import subprocess
import sys
import time

import pytest

from ssv.smtfd.bitblast import Blaster, Unsupported
from ssv.smtfd.cdcl import SatSolver
from ssv.smtfd.sexpr import Reader, Symbol


def run_script(script: str, timeout: float = 60.0) -> list[str]:
    proc = subprocess.run(
        [sys.executable, "-m", "ssv.smtfd"], input=script.encode(),
        capture_output=True, timeout=timeout)
    return proc.stdout.decode().split()


# --- sat core ---

def test_cdcl_simple_sat_unsat():
    solver = SatSolver()
    a, b = solver.new_var(), solver.new_var()
    solver.add_clause([a, b])
    solver.add_clause([-a, b])
    assert solver.solve() is True

    solver = SatSolver()
    a = solver.new_var()
    solver.add_clause([a])
    solver.add_clause([-a])
    assert solver.solve() is False


def _php_clauses(n: int) -> SatSolver:
    solver = SatSolver()
    grid = [[solver.new_var() for _ in range(n)] for _ in range(n + 1)]
    for row in grid:
        solver.add_clause(row)
    for hole in range(n):
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                solver.add_clause([-grid[i][hole], -grid[j][hole]])
    return solver


def test_cdcl_pigeonhole_unsat():
    assert _php_clauses(5).solve() is False


def test_cdcl_deadline_returns_none():
    solver = _php_clauses(11)
    assert solver.solve(deadline=time.monotonic() + 0.05) is None


def test_cdcl_chain_propagation():
    solver = SatSolver()
    vars_ = [solver.new_var() for _ in range(50)]
    for a, b in zip(vars_, vars_[1:]):
        solver.add_clause([-a, b])
    solver.add_clause([vars_[0]])
    assert solver.solve() is True
    assert all(solver.values[v] == 1 for v in vars_)


# --- reader ---

def test_reader_forms():
    chunks = iter([b'(assert (= |x| 3)) (echo "hi there") ; comment\n(exit)', b""])
    reader = Reader(lambda: next(chunks))
    form = reader.read_form()
    assert form == [Symbol("assert"), [Symbol("="), Symbol("x"), 3]]
    assert reader.read_form() == [Symbol("echo"), "hi there"]
    assert reader.read_form() == [Symbol("exit")]
    assert reader.read_form() is None


# --- driver ---

def test_driver_basic_statuses():
    out = run_script(
        "(declare-datatypes ((|c| 0)) (((|x|) (|y|) (|z|))))\n"
        "(declare-const |v| |c|)\n"
        "(assert (distinct |v| |x|))\n"
        "(check-sat)\n"
        "(reset)\n"
        "(declare-datatypes ((|c| 0)) (((|x|) (|y|))))\n"
        "(declare-const |v| |c|)\n"
        "(assert (= |v| |x|))\n(assert (= |v| |y|))\n"
        "(check-sat)\n(exit)\n")
    assert out == ["sat", "unsat"]


def test_driver_unknown_for_integer_symbols():
    out = run_script(
        "(declare-const |n| Int)\n(assert (> |n| 3))\n(check-sat)\n(exit)\n")
    assert out == ["unknown"]


def test_driver_unsat_remains_sound_with_dropped_assertions():
    # the integer assertion is dropped, but the boolean core is already unsat
    out = run_script(
        "(declare-const |n| Int)\n(declare-const |p| Bool)\n"
        "(assert (> |n| 3))\n(assert |p|)\n(assert (not |p|))\n"
        "(check-sat)\n(exit)\n")
    assert out == ["unsat"]


def test_driver_quantifier_grounding():
    out = run_script(
        "(declare-datatypes ((|d| 0)) (((|a|) (|b|) (|c|))))\n"
        "(declare-fun |f| (|d|) Bool)\n"
        "(assert (forall ((|t| |d|)) (|f| |t|)))\n"
        "(assert (not (|f| |b|)))\n"
        "(check-sat)\n(exit)\n")
    assert out == ["unsat"]


def test_driver_uninterpreted_sort_unknown():
    out = run_script(
        "(declare-sort |u| 0)\n(declare-const |a| |u|)\n(declare-const |b| |u|)\n"
        "(assert (distinct |a| |b|))\n(check-sat)\n(exit)\n")
    assert out == ["unknown"]


def test_driver_echo_and_reset_isolation():
    out = run_script(
        "(declare-const |p| Bool)\n(assert |p|)\n(assert (not |p|))\n"
        "(check-sat)\n(echo \"marker-1\")\n(reset)\n"
        "(declare-const |p| Bool)\n(assert |p|)\n(check-sat)\n(exit)\n")
    assert out == ["unsat", "marker-1", "sat"]


def test_driver_arithmetic_chain():
    out = run_script(
        "(declare-const |p| Bool)\n(declare-const |q| Bool)\n"
        "(assert (= (+ (ite |p| 1 0) (ite |q| 1 0)) 2))\n"
        "(assert (not |p|))\n(check-sat)\n"
        "(reset)\n"
        "(declare-const |p| Bool)\n(declare-const |q| Bool)\n"
        "(assert (= (+ (ite |p| 1 0) (ite |q| 1 0)) 2))\n"
        "(check-sat)\n(exit)\n")
    assert out == ["unsat", "sat"]


def test_driver_subtraction_and_comparisons():
    out = run_script(
        "(declare-const |p| Bool)\n"
        "(assert (< (- (ite |p| 1 0) 5) (- 3)))\n(check-sat)\n(exit)\n")
    assert out == ["sat"]  # p arbitrary: 1-5=-4 < -3, 0-5=-5 < -3


# --- blaster unit behavior ---

def _blaster():
    return Blaster({"c": ("x", "y", "z")}, {"f": (("c",), "Bool")})


def test_blaster_enum_equality_folds():
    blaster = _blaster()
    x = blaster.enum_const("c", 0)
    y = blaster.enum_const("c", 1)
    assert blaster.enum_eq(x, x) == blaster.TRUE
    assert blaster.enum_eq(x, y) == blaster.FALSE


def test_blaster_int_interval_folds():
    blaster = _blaster()
    three = blaster.int_const(3)
    five = blaster.int_const(5)
    assert blaster.int_lt(three, five) == blaster.TRUE
    assert blaster.int_eq(three, five) == blaster.FALSE
    assert blaster.int_eq(blaster.int_add(three, blaster.int_const(2)),
                          five) == blaster.TRUE


def test_blaster_unsupported_symbol():
    blaster = _blaster()
    with pytest.raises(Unsupported):
        blaster.term(Symbol("nonexistent"))
