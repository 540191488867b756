import random

import pytest

from corpus import random_program
from ssv.dsl import (
    And,
    BoolLit,
    Comprehension,
    EnumSort,
    Ite,
    Not,
    Ref,
    SumList,
    check_sorts,
    expand_comprehensions,
    free_symbols,
    parse_expr,
    parse_program,
    print_expr,
    print_program,
    scope_of_init,
    sort_of,
)
from ssv.dsl.ast import Apply, Compare, Exists, ForAll, Implies, IntLit, Or, Xor
from ssv.dsl.rewrite import ground_quantifiers, walk
from ssv.errors import (
    ArityMismatch,
    DslSyntaxError,
    DuplicateOptionLabel,
    MissingSegment,
    SortMismatch,
    UnboundedComprehension,
    UnknownSymbol,
)
from conftest import fixture_text


# --- program parsing ---

def test_technicians_structure(technicians):
    assert len(technicians.constraints) == 6
    assert len(technicians.options) == 5
    enums = [s for s in technicians.init.sorts if isinstance(s, EnumSort)]
    assert len(enums) == 2
    assert len(technicians.init.decls) == 1
    assert all(c.nl_text for c in technicians.constraints)


def test_init_only_is_missing_constraint():
    with pytest.raises(MissingSegment) as err:
        parse_program("#INIT: x\nenum s { a, b }\n")
    assert err.value.kind == "constraint"


def test_missing_option_segment():
    with pytest.raises(MissingSegment) as err:
        parse_program("#INIT: x\nenum s { a, b }\n#CONSTRAINT: c\nassert True\n")
    assert err.value.kind == "option"


def test_duplicate_option_label():
    source = (
        "#INIT: x\nenum s { a, b }\nconst c: s\n"
        "#CONSTRAINT: something\nassert c == a\n"
        "#OPTION A sat: one\ncheck c == a\n"
        "#OPTION A sat: again\ncheck c == b\n"
    )
    with pytest.raises(DuplicateOptionLabel):
        parse_program(source)


def test_constraint_needs_annotation():
    with pytest.raises(DslSyntaxError):
        parse_program("#INIT: x\nenum s { a, b }\n#CONSTRAINT:\nassert True\n")


def test_options_must_follow_constraints():
    source = (
        "#INIT: x\nenum s { a, b }\nconst c: s\n"
        "#OPTION A sat: one\ncheck c == a\n"
        "#CONSTRAINT: late\nassert c == a\n"
    )
    with pytest.raises(DslSyntaxError):
        parse_program(source)


def test_checktype_line_sets_default_and_explicit_overrides():
    source = (
        "#INIT: x\nenum s { a, b }\nconst c: s\n"
        "#CONSTRAINT: something\nassert c == a\n"
        "#CHECKTYPE: unsat because the question says cannot\n"
        "#OPTION A: one\ncheck c == a\n"
        "#OPTION B valid: two\ncheck c == b\n"
    )
    program = parse_program(source)
    assert program.options[0].check_type.value == "unsat"
    assert program.options[1].check_type.value == "valid"


# --- expression parsing ---

@pytest.fixture()
def tech_scope(technicians):
    return scope_of_init(technicians.init)


def test_eq_true_normalizes(tech_scope):
    expr = parse_expr(
        "And(repairs(Urma, VCRs) == True, repairs(Zane, VCRs) == True)", tech_scope)
    assert isinstance(expr, And)
    assert all(isinstance(item, Apply) for item in expr.items)


def test_eq_false_normalizes_to_negation(tech_scope):
    expr = parse_expr("repairs(Urma, VCRs) == False", tech_scope)
    assert isinstance(expr, Not)


def test_true_literal(tech_scope):
    assert parse_expr("True", tech_scope) == BoolLit(True)


def test_arity_mismatch(tech_scope):
    with pytest.raises(ArityMismatch):
        parse_expr("repairs(Urma)", tech_scope)


def test_unknown_symbol_strict_and_lenient(tech_scope):
    with pytest.raises(UnknownSymbol):
        parse_expr("repairs(Urma, Laser)", tech_scope)
    expr = parse_expr("repairs(Urma, Laser)", tech_scope, lenient=True)
    assert free_symbols(expr, tech_scope) == {"Laser"}


def test_sort_mismatch_between_enums(tech_scope):
    with pytest.raises(SortMismatch):
        parse_expr("Urma == radios", tech_scope)


def test_bool_in_arith_position_allowed(tech_scope):
    expr = parse_expr(
        "Sum([repairs(t, radios) for t in technicians]) >= 1 + repairs(Urma, VCRs)",
        tech_scope)
    check_sorts(expr)


# --- comprehension expansion ---

def test_expand_sum_if_form(tech_scope):
    expr = parse_expr(
        "Sum([If(repairs(t, radios), 1, 0) for t in technicians]) == 4", tech_scope)
    expanded = expand_comprehensions(expr)
    assert isinstance(expanded.lhs, SumList)
    assert len(expanded.lhs.items) == 6
    assert all(isinstance(i, Ite) for i in expanded.lhs.items)


def test_expand_empty_collection():
    program = parse_program(
        "#INIT: x\nenum s { a, b }\nconst c: s\nlist none_at_all = []\n"
        "#CONSTRAINT: d\nassert Sum([If(x == 1, 1, 0) for x in none_at_all]) == 0\n"
        "#OPTION A sat: o\ncheck c == a\n")
    expr = expand_comprehensions(program.constraints[0].exprs[0])
    assert expr.lhs == SumList(())


def test_unbounded_comprehension_over_int_constant():
    source = (
        "#INIT: x\nenum s { a, b }\nint n\nconst c: s\n"
        "#CONSTRAINT: d\nassert Sum([If(c == a, 1, 0) for i in n]) == 1\n"
        "#OPTION A sat: o\ncheck c == a\n"
    )
    with pytest.raises(UnboundedComprehension):
        parse_program(source)


def test_range_comprehension():
    program = parse_program(
        "#INIT: x\nint n\n"
        "#CONSTRAINT: d\nassert Sum([If(n == i, 1, 0) for i in range(1, 4)]) == 1\n"
        "#OPTION A sat: o\ncheck n >= 1\n")
    expanded = expand_comprehensions(program.constraints[0].exprs[0])
    assert len(expanded.lhs.items) == 3  # {1, 2, 3}


def test_expansion_removes_binders_from_free_symbols(tech_scope):
    expr = parse_expr(
        "Sum([And(t != Xena, repairs(t, radios)) for t in technicians]) == 3",
        tech_scope)
    assert free_symbols(expr, tech_scope) == set()
    assert free_symbols(expand_comprehensions(expr), tech_scope) == set()


# --- free symbols ---

def test_free_symbols_compositions_scope():
    program = parse_program(
        "#INIT: Eight compositions are performed consecutively.\n"
        "enum compositions { F, H, L, O, P, R, S, T }\n"
        "fn position(compositions) -> int\n"
        "#CONSTRAINT: ordering\nassert position(T) + 1 == position(F)\n"
        "#OPTION A sat: o\ncheck position(T) == 1\n")
    scope = scope_of_init(program.init)
    expr = parse_expr("position(T) == position(F) - 3", scope)
    assert free_symbols(expr, scope) == set()


def test_free_symbols_undeclared(tech_scope):
    expr = parse_expr("b1 == Urma", tech_scope, lenient=True)
    assert free_symbols(expr, tech_scope) == {"b1"}


def test_free_symbols_of_literal(tech_scope):
    assert free_symbols(BoolLit(True), tech_scope) == set()


# --- printing ---

def test_print_parse_round_trip_fixtures(technicians, technicians_exists, meals):
    for program in (technicians, technicians_exists, meals):
        text = print_program(program)
        again = parse_program(text)
        assert again == program
        assert print_program(again) == text


def test_print_parse_round_trip_source():
    source = fixture_text("technicians.ssv")
    parsed = parse_program(source)
    assert parse_program(print_program(parsed)) == parsed


def test_print_deterministic_on_equal_programs():
    source = fixture_text("technicians.ssv")
    assert print_program(parse_program(source)) == print_program(parse_program(source))


def test_canonical_alpha_renaming(tech_scope):
    a = parse_expr("ForAll([m: machines], repairs(Stacy, m))", tech_scope)
    b = parse_expr("ForAll([zz: machines], repairs(Stacy, zz))", tech_scope)
    assert print_expr(a, canonical=True) == print_expr(b, canonical=True)
    assert print_expr(a) != print_expr(b)


def test_round_trip_random_corpus():
    for seed in range(25):
        program = random_program(seed)
        text = print_program(program)
        assert parse_program(text) == program


# --- evaluator-equivalence of expansion and grounding ---

def _reference_eval(expr, model, env=None):
    """Independent recursive evaluator over a symbol model."""
    env = env or {}
    if isinstance(expr, BoolLit):
        return int(expr.value)
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Ref):
        if expr.kind == "bound":
            return env[expr.name]
        if expr.kind == "member":
            return expr.sort.members.index(expr.name)
        return model["consts"][expr.name]
    if isinstance(expr, Apply):
        args = tuple(_reference_eval(a, model, env) for a in expr.args)
        return model["fns"][expr.fn][args]
    if isinstance(expr, Compare):
        lhs = _reference_eval(expr.lhs, model, env)
        rhs = _reference_eval(expr.rhs, model, env)
        return int({"==": lhs == rhs, "!=": lhs != rhs, "<": lhs < rhs,
                    "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[expr.op])
    if expr.__class__.__name__ == "Arith":
        lhs = _reference_eval(expr.lhs, model, env)
        rhs = _reference_eval(expr.rhs, model, env)
        return lhs + rhs if expr.op == "+" else lhs - rhs
    if isinstance(expr, And):
        return int(all(_reference_eval(i, model, env) for i in expr.items))
    if isinstance(expr, Or):
        return int(any(_reference_eval(i, model, env) for i in expr.items))
    if isinstance(expr, Not):
        return int(not _reference_eval(expr.item, model, env))
    if isinstance(expr, Implies):
        return int(not _reference_eval(expr.lhs, model, env)
                   or _reference_eval(expr.rhs, model, env))
    if isinstance(expr, Xor):
        return int(bool(_reference_eval(expr.lhs, model, env))
                   != bool(_reference_eval(expr.rhs, model, env)))
    if isinstance(expr, Ite):
        if _reference_eval(expr.cond, model, env):
            return _reference_eval(expr.then, model, env)
        return _reference_eval(expr.other, model, env)
    if isinstance(expr, SumList):
        return sum(_reference_eval(i, model, env) for i in expr.items)
    if expr.__class__.__name__ == "Distinct":
        values = [_reference_eval(i, model, env) for i in expr.items]
        return int(len(set(values)) == len(values))
    if isinstance(expr, (ForAll, Exists)):
        combos = [{}]
        for binder in expr.binders:
            combos = [{**c, binder.name: i} for c in combos
                      for i in range(len(binder.sort.members))]
        results = (_reference_eval(expr.body, model, {**env, **c}) for c in combos)
        return int(all(results)) if isinstance(expr, ForAll) else int(any(results))
    if isinstance(expr, Comprehension):
        raise AssertionError("reference eval expands comprehensions at list sites")
    raise TypeError(expr)


def _eval_with_comprehensions(expr, model, env=None):
    """Expand comprehensions lazily while evaluating (the independent path)."""
    env = env or {}
    if isinstance(expr, (SumList, And, Or)) or expr.__class__.__name__ == "Distinct":
        items = []
        for item in expr.items:
            if isinstance(item, Comprehension):
                combos = [{}]
                for binder in item.binders:
                    values = []
                    for element in binder.elements:
                        if isinstance(element, IntLit):
                            values.append(element.value)
                        else:
                            values.append(element.sort.members.index(element.name))
                    combos = [{**c, binder.name: v} for c in combos for v in values]
                items.extend(
                    _eval_with_comprehensions(item.template, model, {**env, **c})
                    for c in combos)
            else:
                items.append(_eval_with_comprehensions(item, model, env))
        if isinstance(expr, SumList):
            return sum(items)
        if isinstance(expr, And):
            return int(all(items))
        if isinstance(expr, Or):
            return int(any(items))
        return int(len(set(items)) == len(items))
    if isinstance(expr, (BoolLit, IntLit, Ref)):
        return _reference_eval(expr, model, env)
    # comprehension-free subtrees take the plain reference path
    if not any(isinstance(n, Comprehension) for n in walk(expr)):
        return _reference_eval(expr, model, env)
    if isinstance(expr, Compare):
        lhs = _eval_with_comprehensions(expr.lhs, model, env)
        rhs = _eval_with_comprehensions(expr.rhs, model, env)
        return int({"==": lhs == rhs, "!=": lhs != rhs, "<": lhs < rhs,
                    "<=": lhs <= rhs, ">": lhs > rhs, ">=": lhs >= rhs}[expr.op])
    if isinstance(expr, Not):
        return int(not _eval_with_comprehensions(expr.item, model, env))
    if isinstance(expr, (ForAll, Exists)):
        combos = [{}]
        for binder in expr.binders:
            combos = [{**c, binder.name: i} for c in combos
                      for i in range(len(binder.sort.members))]
        results = (_eval_with_comprehensions(expr.body, model, {**env, **c})
                   for c in combos)
        return int(all(results)) if isinstance(expr, ForAll) else int(any(results))
    if isinstance(expr, Implies):
        return int(not _eval_with_comprehensions(expr.lhs, model, env)
                   or _eval_with_comprehensions(expr.rhs, model, env))
    if isinstance(expr, Xor):
        return int(bool(_eval_with_comprehensions(expr.lhs, model, env))
                   != bool(_eval_with_comprehensions(expr.rhs, model, env)))
    if isinstance(expr, Ite):
        if _eval_with_comprehensions(expr.cond, model, env):
            return _eval_with_comprehensions(expr.then, model, env)
        return _eval_with_comprehensions(expr.other, model, env)
    raise TypeError(expr)


def _random_model(space, rng):
    from ssv import oracle as _  # noqa: F401

    cells = [rng.randrange(size) for size in space.domains]
    model = {"consts": {}, "fns": {}}
    for name, index in space.const_cell.items():
        model["consts"][name] = cells[index]
    for name, (base, arg_sizes) in space.fn_layout.items():
        table = {}
        combos = [()]
        for size in arg_sizes:
            combos = [c + (v,) for c in combos for v in range(size)]
        for offset, combo in enumerate(combos):
            table[combo] = cells[base + offset]
        model["fns"][name] = table
    return cells, model


def test_expansion_preserves_evaluation_under_assignments():
    """Kernel value of the expanded expression equals an independent
    comprehension-aware evaluation, across random assignments."""
    from ssv import oracle

    rng = random.Random(7)
    checked = 0
    for seed in range(12):
        program = random_program(seed)
        exprs = [e for c in program.constraints for e in c.exprs]
        exprs += [o.check_expr for o in program.options]
        space = oracle.space_of(program.init, exprs)
        for expr in exprs:
            for _ in range(5):
                cells, model = _random_model(space, rng)
                expected = _eval_with_comprehensions(expr, model)
                got = oracle.evaluate(program.init, expr, cells)
                assert got == expected, print_expr(expr)
                checked += 1
    assert checked > 100


def test_grounding_preserves_bool_structure(tech_scope):
    expr = parse_expr("ForAll([m: machines], repairs(Stacy, m))", tech_scope)
    grounded = ground_quantifiers(expand_comprehensions(expr))
    assert isinstance(grounded, And)
    assert len(grounded.items) == 3
