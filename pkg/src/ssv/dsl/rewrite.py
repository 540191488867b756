"""Structural passes over expressions: substitution, comprehension
expansion, quantifier grounding, and free-symbol analysis."""

from __future__ import annotations

from ..errors import CapExceeded, UnboundedComprehension
from .ast import (
    And,
    Apply,
    Arith,
    Binder,
    BoolLit,
    Compare,
    Comprehension,
    Distinct,
    EnumSort,
    Exists,
    Expr,
    ForAll,
    IntLit,
    Ite,
    Implies,
    Not,
    Or,
    Ref,
    Scope,
    SumList,
    Xor,
)


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (BoolLit, IntLit, Ref)):
        return ()
    if isinstance(e, Apply):
        return e.args
    if isinstance(e, (Compare, Arith, Implies, Xor)):
        return (e.lhs, e.rhs)
    if isinstance(e, (And, Or, Distinct, SumList)):
        return e.items
    if isinstance(e, Not):
        return (e.item,)
    if isinstance(e, Ite):
        return (e.cond, e.then, e.other)
    if isinstance(e, (ForAll, Exists)):
        return (e.body,)
    if isinstance(e, Comprehension):
        return (e.template,)
    raise TypeError(f"not an expression: {e!r}")


def walk(e: Expr):
    """Yield every node of the expression tree, preorder."""
    yield e
    for child in children(e):
        yield from walk(child)


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Replace bound-variable references by name; binders shadow."""
    if not mapping:
        return e
    if isinstance(e, Ref):
        if e.kind == "bound" and e.name in mapping:
            return mapping[e.name]
        return e
    if isinstance(e, (BoolLit, IntLit)):
        return e
    if isinstance(e, Apply):
        return Apply(e.fn, tuple(substitute(a, mapping) for a in e.args), e.decl)
    if isinstance(e, Compare):
        return Compare(e.op, substitute(e.lhs, mapping), substitute(e.rhs, mapping))
    if isinstance(e, Arith):
        return Arith(e.op, substitute(e.lhs, mapping), substitute(e.rhs, mapping))
    if isinstance(e, And):
        return And(tuple(substitute(i, mapping) for i in e.items))
    if isinstance(e, Or):
        return Or(tuple(substitute(i, mapping) for i in e.items))
    if isinstance(e, Not):
        return Not(substitute(e.item, mapping))
    if isinstance(e, Implies):
        return Implies(substitute(e.lhs, mapping), substitute(e.rhs, mapping))
    if isinstance(e, Xor):
        return Xor(substitute(e.lhs, mapping), substitute(e.rhs, mapping))
    if isinstance(e, Ite):
        return Ite(substitute(e.cond, mapping), substitute(e.then, mapping),
                   substitute(e.other, mapping))
    if isinstance(e, Distinct):
        return Distinct(tuple(substitute(i, mapping) for i in e.items))
    if isinstance(e, SumList):
        return SumList(tuple(substitute(i, mapping) for i in e.items))
    if isinstance(e, (ForAll, Exists)):
        inner = {k: v for k, v in mapping.items()
                 if k not in {b.name for b in e.binders}}
        cls = type(e)
        return cls(e.binders, substitute(e.body, inner))
    if isinstance(e, Comprehension):
        inner = {k: v for k, v in mapping.items()
                 if k not in {b.name for b in e.binders}}
        return Comprehension(substitute(e.template, inner), e.binders)
    raise TypeError(f"not an expression: {e!r}")


def _expand_items(items: tuple[Expr, ...]) -> tuple[Expr, ...]:
    out: list[Expr] = []
    for item in items:
        if isinstance(item, Comprehension):
            out.extend(_expand_comprehension(item))
        else:
            out.append(expand_comprehensions(item))
    return tuple(out)


def _expand_comprehension(comp: Comprehension) -> list[Expr]:
    results: list[Expr] = []

    def rec(binders, mapping):
        if not binders:
            results.append(expand_comprehensions(substitute(comp.template, mapping)))
            return
        binder, rest = binders[0], binders[1:]
        if not binder.elements and binder.range_domain is None and binder.domain_name != "range":
            # declared-empty collections expand to nothing
            pass
        for element in binder.elements:
            rec(rest, {**mapping, binder.name: element})

    rec(list(comp.binders), {})
    return results


def expand_comprehensions(e: Expr) -> Expr:
    """Rewrite to a comprehension-free tree; binder occurrences are
    substituted per element in declaration order."""
    if isinstance(e, (BoolLit, IntLit, Ref)):
        return e
    if isinstance(e, Apply):
        return Apply(e.fn, tuple(expand_comprehensions(a) for a in e.args), e.decl)
    if isinstance(e, Compare):
        return Compare(e.op, expand_comprehensions(e.lhs), expand_comprehensions(e.rhs))
    if isinstance(e, Arith):
        return Arith(e.op, expand_comprehensions(e.lhs), expand_comprehensions(e.rhs))
    if isinstance(e, And):
        return And(_expand_items(e.items))
    if isinstance(e, Or):
        return Or(_expand_items(e.items))
    if isinstance(e, Not):
        return Not(expand_comprehensions(e.item))
    if isinstance(e, Implies):
        return Implies(expand_comprehensions(e.lhs), expand_comprehensions(e.rhs))
    if isinstance(e, Xor):
        return Xor(expand_comprehensions(e.lhs), expand_comprehensions(e.rhs))
    if isinstance(e, Ite):
        return Ite(expand_comprehensions(e.cond), expand_comprehensions(e.then),
                   expand_comprehensions(e.other))
    if isinstance(e, Distinct):
        return Distinct(_expand_items(e.items))
    if isinstance(e, SumList):
        return SumList(_expand_items(e.items))
    if isinstance(e, (ForAll, Exists)):
        return type(e)(e.binders, expand_comprehensions(e.body))
    if isinstance(e, Comprehension):
        raise UnboundedComprehension(
            "comprehension outside a list argument cannot be expanded in place")
    raise TypeError(f"not an expression: {e!r}")


def ground_quantifiers(e: Expr, bound: int | None = None, _budget: list | None = None) -> Expr:
    """Expand quantifiers over enum sorts into finite conjunctions or
    disjunctions.

    ``bound`` limits the per-quantifier instantiation count: beyond it the
    quantifier is kept symbolic (solver decides). Without a bound, grounding
    is mandatory and a non-enum binder raises CapExceeded.
    """
    if isinstance(e, (BoolLit, IntLit, Ref)):
        return e
    if isinstance(e, (ForAll, Exists)):
        total = 1
        for b in e.binders:
            if isinstance(b.sort, EnumSort):
                total *= len(b.sort.members)
            else:
                total = None
                break
        if total is None or (bound is not None and total > bound):
            if bound is None:
                raise CapExceeded(
                    "quantifier over a non-finite sort cannot be grounded")
            return type(e)(e.binders, ground_quantifiers(e.body, bound))
        instances = [{}]
        for b in e.binders:
            instances = [
                {**m, b.name: Ref(member, "member", b.sort)}
                for m in instances
                for member in b.sort.members
            ]
        body = ground_quantifiers(e.body, bound)
        parts = tuple(substitute(body, m) for m in instances)
        return And(parts) if isinstance(e, ForAll) else Or(parts)
    if isinstance(e, Apply):
        return Apply(e.fn, tuple(ground_quantifiers(a, bound) for a in e.args), e.decl)
    if isinstance(e, Compare):
        return Compare(e.op, ground_quantifiers(e.lhs, bound),
                       ground_quantifiers(e.rhs, bound))
    if isinstance(e, Arith):
        return Arith(e.op, ground_quantifiers(e.lhs, bound),
                     ground_quantifiers(e.rhs, bound))
    if isinstance(e, And):
        return And(tuple(ground_quantifiers(i, bound) for i in e.items))
    if isinstance(e, Or):
        return Or(tuple(ground_quantifiers(i, bound) for i in e.items))
    if isinstance(e, Not):
        return Not(ground_quantifiers(e.item, bound))
    if isinstance(e, Implies):
        return Implies(ground_quantifiers(e.lhs, bound),
                       ground_quantifiers(e.rhs, bound))
    if isinstance(e, Xor):
        return Xor(ground_quantifiers(e.lhs, bound),
                   ground_quantifiers(e.rhs, bound))
    if isinstance(e, Ite):
        return Ite(ground_quantifiers(e.cond, bound),
                   ground_quantifiers(e.then, bound),
                   ground_quantifiers(e.other, bound))
    if isinstance(e, Distinct):
        return Distinct(tuple(ground_quantifiers(i, bound) for i in e.items))
    if isinstance(e, SumList):
        return SumList(tuple(ground_quantifiers(i, bound) for i in e.items))
    if isinstance(e, Comprehension):
        raise UnboundedComprehension("expand comprehensions before grounding")
    raise TypeError(f"not an expression: {e!r}")


def free_symbols(e: Expr, scope: Scope) -> set[str]:
    """Names referenced but neither declared in scope nor bound by a
    quantifier or comprehension."""
    free: set[str] = set()

    def rec(node: Expr, bound: frozenset[str]):
        if isinstance(node, Ref):
            if node.name in bound:
                return
            if scope.resolve(node.name) is None:
                free.add(node.name)
            return
        if isinstance(node, Apply):
            if node.decl is None and scope.fn(node.fn) is None:
                free.add(node.fn)
            for a in node.args:
                rec(a, bound)
            return
        if isinstance(node, (ForAll, Exists)):
            rec(node.body, bound | {b.name for b in node.binders})
            return
        if isinstance(node, Comprehension):
            rec(node.template, bound | {b.name for b in node.binders})
            return
        for child in children(node):
            rec(child, bound)

    rec(e, frozenset())
    return free
