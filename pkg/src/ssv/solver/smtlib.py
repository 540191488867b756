"""SMT-LIB 2 script emission from init segments and expressions.

Symbols are always pipe-quoted, enum sorts become nullary datatypes, and
quantifiers over enum sorts are ground-expanded up to the configured bound
before emission. Declaration order is deterministic: init declarations
first, then first appearance in the asserted expressions.
"""

from __future__ import annotations

from ..dsl.ast import (
    BOOL,
    And,
    Apply,
    Arith,
    BoolLit,
    BoolSort,
    Compare,
    ConstDecl,
    Distinct,
    EnumSort,
    Exists,
    Expr,
    FnDecl,
    ForAll,
    InitSegment,
    IntLit,
    IntSort,
    Ite,
    Implies,
    Not,
    OpaqueSort,
    Or,
    Ref,
    SumList,
    Xor,
    sort_of,
)
from ..dsl.rewrite import expand_comprehensions, ground_quantifiers, walk
from ..errors import SortMismatch


def _sym(name: str) -> str:
    return f"|{name}|"


def _sort_text(sort) -> str:
    if isinstance(sort, BoolSort):
        return "Bool"
    if isinstance(sort, IntSort):
        return "Int"
    return _sym(sort.name)


def _term_int(e: Expr) -> str:
    text = term_text(e)
    if isinstance(sort_of(e), BoolSort):
        return f"(ite {text} 1 0)"
    return text


def term_text(e: Expr) -> str:
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, IntLit):
        return str(e.value) if e.value >= 0 else f"(- {-e.value})"
    if isinstance(e, Ref):
        if e.kind == "free":
            raise SortMismatch(f"free symbol {e.name} cannot be emitted")
        return _sym(e.name)
    if isinstance(e, Apply):
        args = " ".join(term_text(a) for a in e.args)
        return f"({_sym(e.fn)} {args})"
    if isinstance(e, Compare):
        lhs_sort, rhs_sort = sort_of(e.lhs), sort_of(e.rhs)
        numeric = isinstance(lhs_sort, IntSort) or isinstance(rhs_sort, IntSort) \
            or e.op in ("<", "<=", ">", ">=")
        if numeric:
            lhs, rhs = _term_int(e.lhs), _term_int(e.rhs)
        else:
            lhs, rhs = term_text(e.lhs), term_text(e.rhs)
        if e.op == "==":
            return f"(= {lhs} {rhs})"
        if e.op == "!=":
            return f"(distinct {lhs} {rhs})"
        return f"({e.op} {lhs} {rhs})"
    if isinstance(e, Arith):
        return f"({e.op} {_term_int(e.lhs)} {_term_int(e.rhs)})"
    if isinstance(e, And):
        if not e.items:
            return "true"
        if len(e.items) == 1:
            return term_text(e.items[0])
        return "(and " + " ".join(term_text(i) for i in e.items) + ")"
    if isinstance(e, Or):
        if not e.items:
            return "false"
        if len(e.items) == 1:
            return term_text(e.items[0])
        return "(or " + " ".join(term_text(i) for i in e.items) + ")"
    if isinstance(e, Not):
        return f"(not {term_text(e.item)})"
    if isinstance(e, Implies):
        return f"(=> {term_text(e.lhs)} {term_text(e.rhs)})"
    if isinstance(e, Xor):
        return f"(xor {term_text(e.lhs)} {term_text(e.rhs)})"
    if isinstance(e, Ite):
        then_sort, other_sort = sort_of(e.then), sort_of(e.other)
        if then_sort != other_sort and (
                isinstance(then_sort, (IntSort, BoolSort))
                and isinstance(other_sort, (IntSort, BoolSort))):
            return f"(ite {term_text(e.cond)} {_term_int(e.then)} {_term_int(e.other)})"
        return (f"(ite {term_text(e.cond)} {term_text(e.then)} "
                f"{term_text(e.other)})")
    if isinstance(e, Distinct):
        if len(e.items) < 2:
            return "true"
        return "(distinct " + " ".join(term_text(i) for i in e.items) + ")"
    if isinstance(e, SumList):
        if not e.items:
            return "0"
        if len(e.items) == 1:
            return _term_int(e.items[0])
        return "(+ " + " ".join(_term_int(i) for i in e.items) + ")"
    if isinstance(e, (ForAll, Exists)):
        word = "forall" if isinstance(e, ForAll) else "exists"
        binders = " ".join(f"({_sym(b.name)} {_sort_text(b.sort)})"
                           for b in e.binders)
        return f"({word} ({binders}) {term_text(e.body)})"
    raise SortMismatch(f"cannot emit {type(e).__name__} to SMT-LIB")


def _collect_symbols(init: InitSegment, exprs: list[Expr]):
    """Sorts, constants, and functions in deterministic first-use order."""
    sorts: dict[str, object] = {}
    consts: dict[str, object] = {}
    fns: dict[str, FnDecl] = {}

    def add_sort(sort):
        if isinstance(sort, (EnumSort, OpaqueSort)) and sort.name not in sorts:
            sorts[sort.name] = sort

    for sort in init.sorts:
        add_sort(sort)
    for decl in init.decls:
        if isinstance(decl, ConstDecl):
            add_sort(decl.sort)
            consts[decl.name] = decl
        elif isinstance(decl, FnDecl):
            for s in decl.arg_sorts:
                add_sort(s)
            add_sort(decl.result)
            fns[decl.name] = decl
    for expr in exprs:
        for node in walk(expr):
            if isinstance(node, Ref):
                if node.sort is not None:
                    add_sort(node.sort)
                if node.kind == "const" and node.name not in consts:
                    consts[node.name] = ConstDecl(node.name, node.sort)
            elif isinstance(node, Apply) and node.decl is not None:
                for s in node.decl.arg_sorts:
                    add_sort(s)
                add_sort(node.decl.result)
                fns.setdefault(node.fn, node.decl)
            elif isinstance(node, (ForAll, Exists)):
                for b in node.binders:
                    add_sort(b.sort)
    return sorts, consts, fns


def emit_script(init: InitSegment, extra: list[Expr],
                grounding_bound: int = 4096) -> str:
    """Full SMT-LIB script asserting base preconditions plus extras,
    ending in (check-sat)."""
    exprs = [
        ground_quantifiers(expand_comprehensions(e), grounding_bound)
        for e in list(init.preconditions) + list(extra)
    ]
    sorts, consts, fns = _collect_symbols(init, exprs)
    lines = ["(set-logic ALL)"]
    for sort in sorts.values():
        if isinstance(sort, EnumSort):
            ctors = " ".join(f"({_sym(m)})" for m in sort.members)
            lines.append(
                f"(declare-datatypes (({_sym(sort.name)} 0)) (({ctors})))")
        else:
            lines.append(f"(declare-sort {_sym(sort.name)} 0)")
    for decl in consts.values():
        lines.append(f"(declare-const {_sym(decl.name)} {_sort_text(decl.sort)})")
    for decl in fns.values():
        args = " ".join(_sort_text(s) for s in decl.arg_sorts)
        lines.append(f"(declare-fun {_sym(decl.name)} ({args}) "
                     f"{_sort_text(decl.result)})")
    for expr in exprs:
        s = sort_of(expr)
        if s is not None and not isinstance(s, BoolSort):
            raise SortMismatch("assertions must be boolean")
        lines.append(f"(assert {term_text(expr)})")
    lines.append("(check-sat)")
    return "\n".join(lines)
