import json
from array import array

import pytest

from corpus import random_program
from conftest import FIXTURES
from ssv import oracle
from ssv.dsl import Not, parse_expr, parse_program, scope_of_init
from ssv.errors import CapExceeded
from ssv.oracle import _kernel_py
from ssv.oracle.compiler import build_space, compile_exprs
from ssv.status import Status


def _constraints(program):
    return [e for c in program.constraints for e in c.exprs]


@pytest.fixture(scope="module")
def goldens():
    return json.loads((FIXTURES / "golden_counts.json").read_text())


# --- support predicate ---

def test_supports_technicians(technicians):
    assert oracle.supports_program(technicians.init)
    assert oracle.state_count(technicians.init) == 2 ** 18


def test_integer_program_unsupported():
    program = parse_program(
        "#INIT: parking spaces\nenum employees { R, S }\n"
        "fn space(employees) -> int\n"
        "#CONSTRAINT: distinct spaces\nassert space(R) != space(S)\n"
        "#OPTION A sat: o\ncheck space(R) == 1\n")
    assert not oracle.supports_program(program.init, _constraints(program))


def test_empty_program_single_state():
    program = parse_program(
        "#INIT: nothing\n#CONSTRAINT: trivial\nassert True\n"
        "#OPTION A sat: o\ncheck True\n")
    assert oracle.supports_program(program.init)
    assert oracle.state_count(program.init) == 1
    assert oracle.count_models(program.init, []) == 1


def test_cap_exceeded():
    program = parse_program(
        "#INIT: big\nenum big { a, b, c, d }\nfn f(big, big) -> big\n"
        "#CONSTRAINT: c\nassert f(a, a) == a\n#OPTION A sat: o\ncheck True\n")
    assert not oracle.supports_program(program.init, cap=1024)
    with pytest.raises(CapExceeded):
        oracle.count_models(program.init, [], cap=1024)


# --- counting ---

def test_single_bool_constant_counts():
    program = parse_program(
        "#INIT: one flag\nconst flag: bool\n"
        "#CONSTRAINT: free\nassert True\n#OPTION A sat: o\ncheck flag\n")
    assert oracle.count_models(program.init, []) == 2
    flag = parse_expr("flag", scope_of_init(program.init))
    assert oracle.count_models(program.init, [flag]) == 1


def test_count_splits_on_negation(technicians):
    cons = _constraints(technicians)
    total = oracle.count_models(technicians.init, cons[:-1])
    last = cons[-1]
    with_e = oracle.count_models(technicians.init, cons[:-1] + [last])
    without_e = oracle.count_models(technicians.init, cons[:-1] + [Not(last)])
    assert with_e + without_e == total


def test_technicians_goldens(technicians, goldens):
    cons = _constraints(technicians)
    assert oracle.state_count(technicians.init) == goldens["technicians_states"]
    assert oracle.count_models(technicians.init, cons) == goldens["technicians_models"]
    for option in technicians.options:
        status = oracle.oracle_check(technicians.init, cons + [option.check_expr])
        assert status.value == goldens["technicians_options"][option.label.value]


def test_exists_variant_goldens(technicians_exists, goldens):
    cons = _constraints(technicians_exists)
    for option in technicians_exists.options:
        status = oracle.oracle_check(technicians_exists.init,
                                     cons + [option.check_expr])
        assert status.value == goldens["technicians_exists_options"][option.label.value]


def test_witness_assignment_satisfies_constraints(technicians):
    # Stacy={radios}, Urma={radios,TV}, Wim={TV}, Xena={radios,TV},
    # Yolanda={TV,VCR}, Zane=all. Cell order: repairs[t * 3 + m].
    repairs = [
        1, 0, 0,  # Stacy
        1, 1, 0,  # Urma
        0, 1, 0,  # Wim
        1, 1, 0,  # Xena
        0, 1, 1,  # Yolanda
        1, 1, 1,  # Zane
    ]
    for expr in list(technicians.init.preconditions) + _constraints(technicians):
        assert oracle.evaluate(technicians.init, expr, repairs) == 1


def test_fig4b_negative_is_unsat_with_forall(technicians):
    scope = scope_of_init(technicians.init)
    neg = parse_expr(
        "And(repairs(Stacy, televisions) == True, repairs(Yolanda, televisions) == True)",
        scope)
    c3 = list(technicians.constraints[2].exprs)
    assert oracle.oracle_check(technicians.init, c3 + [neg]) is Status.UNSAT


def test_meals_goldens(meals, goldens):
    cons = _constraints(meals)
    assert oracle.count_models(meals.init, cons) == goldens["meals_models"]
    scope = scope_of_init(meals.init)
    can_eat = parse_expr("Exists([m: meals], eats(Vladimir, m) == poached_eggs)",
                         scope)
    status = oracle.oracle_check(meals.init, cons + [can_eat])
    assert status.value == goldens["meals_vladimir_can_eat_poached_eggs"]


# --- kernels ---

def _run_both(program, exprs, mode):
    from ssv.dsl.rewrite import expand_comprehensions, ground_quantifiers

    grounded = [ground_quantifiers(expand_comprehensions(e))
                for e in list(program.init.preconditions) + list(exprs)]
    space = build_space(program.init, grounded)
    code, starts, max_stack = compile_exprs(grounded, space)
    results = []
    for kernel in (oracle.kernel, _kernel_py):
        cells = array("q", [0] * space.num_cells)
        results.append(kernel.run(code, starts, space.domains, cells, mode,
                                  max_stack))
    return results


def test_kernel_parity_on_corpus():
    for seed in range(15):
        program = random_program(seed)
        cons = _constraints(program)
        exists = _run_both(program, cons, oracle.MODE_EXISTS)
        counts = _run_both(program, cons, oracle.MODE_COUNT)
        assert exists[0] == exists[1]
        assert counts[0] == counts[1]


def test_kernel_selection_reported():
    assert oracle.KERNEL in ("compiled", "python")
    assert hasattr(oracle.kernel, "run")


def test_oracle_deterministic(technicians):
    cons = _constraints(technicians)
    first = oracle.count_models(technicians.init, cons)
    second = oracle.count_models(technicians.init, cons)
    assert first == second
