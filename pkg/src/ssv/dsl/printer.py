"""Deterministic text form for programs and expressions.

``print_program(parse_program(src))`` re-parses to a structurally equal
program. The canonical mode additionally renames bound variables to
positional names so alpha-equivalent expressions print identically; it is
what solver-result cache keys are built from.
"""

from __future__ import annotations

from .ast import (
    And,
    Apply,
    Arith,
    BoolLit,
    Collection,
    CompBinder,
    Compare,
    Comprehension,
    ConstDecl,
    ConstraintSegment,
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
    OptionSegment,
    Or,
    Ref,
    SegmentedProgram,
    SumList,
    Xor,
)


class _ExprPrinter:
    def __init__(self, canonical: bool = False):
        self.canonical = canonical
        self.renames: list[dict[str, str]] = []
        self.counter = 0

    def _bind(self, names: list[str]) -> dict[str, str]:
        frame = {}
        for name in names:
            if self.canonical:
                frame[name] = f"_q{self.counter}"
                self.counter += 1
            else:
                frame[name] = name
        self.renames.append(frame)
        return frame

    def _resolve(self, name: str) -> str:
        for frame in reversed(self.renames):
            if name in frame:
                return frame[name]
        return name

    def expr(self, e: Expr, parent: str = "top") -> str:
        if isinstance(e, BoolLit):
            return "True" if e.value else "False"
        if isinstance(e, IntLit):
            return str(e.value)
        if isinstance(e, Ref):
            return self._resolve(e.name) if e.kind == "bound" else e.name
        if isinstance(e, Apply):
            args = ", ".join(self.expr(a) for a in e.args)
            return f"{e.fn}({args})"
        if isinstance(e, Compare):
            text = f"{self.expr(e.lhs, 'cmp')} {e.op} {self.expr(e.rhs, 'cmp')}"
            return f"({text})" if parent in ("cmp", "arith") else text
        if isinstance(e, Arith):
            lhs = self.expr(e.lhs, "arith_l")
            rhs = self.expr(e.rhs, "arith")
            text = f"{lhs} {e.op} {rhs}"
            return f"({text})" if parent == "arith" else text
        if isinstance(e, And):
            return self._nary("And", e.items)
        if isinstance(e, Or):
            return self._nary("Or", e.items)
        if isinstance(e, Not):
            return f"Not({self.expr(e.item)})"
        if isinstance(e, Implies):
            return f"Implies({self.expr(e.lhs)}, {self.expr(e.rhs)})"
        if isinstance(e, Xor):
            return f"Xor({self.expr(e.lhs)}, {self.expr(e.rhs)})"
        if isinstance(e, Ite):
            return (f"If({self.expr(e.cond)}, {self.expr(e.then)}, "
                    f"{self.expr(e.other)})")
        if isinstance(e, Distinct):
            return f"Distinct([{', '.join(self.expr(i) for i in e.items)}])"
        if isinstance(e, SumList):
            if len(e.items) == 1 and isinstance(e.items[0], Comprehension):
                return f"Sum({self.expr(e.items[0])})"
            return f"Sum([{', '.join(self.expr(i) for i in e.items)}])"
        if isinstance(e, (ForAll, Exists)):
            word = "ForAll" if isinstance(e, ForAll) else "Exists"
            frame = self._bind([b.name for b in e.binders])
            binders = ", ".join(f"{frame[b.name]}: {b.sort}" for b in e.binders)
            body = self.expr(e.body)
            self.renames.pop()
            return f"{word}([{binders}], {body})"
        if isinstance(e, Comprehension):
            frame = self._bind([b.name for b in e.binders])
            clauses = " ".join(
                f"for {frame[b.name]} in {self._domain(b)}" for b in e.binders
            )
            template = self.expr(e.template)
            self.renames.pop()
            return f"[{template} {clauses}]"
        raise TypeError(f"not an expression: {e!r}")

    def _nary(self, word: str, items) -> str:
        if len(items) == 1 and isinstance(items[0], Comprehension):
            return f"{word}({self.expr(items[0])})"
        return f"{word}({', '.join(self.expr(i) for i in items)})"

    @staticmethod
    def _domain(binder: CompBinder) -> str:
        if binder.domain_name == "range" and binder.range_domain is not None:
            return f"range({binder.range_domain.lo}, {binder.range_domain.hi})"
        return binder.domain_name


def print_expr(e: Expr, canonical: bool = False) -> str:
    return _ExprPrinter(canonical).expr(e)


def _print_decl(decl, canonical: bool) -> str:
    if isinstance(decl, ConstDecl):
        if isinstance(decl.sort, IntSort):
            return f"int {decl.name}"
        return f"const {decl.name}: {decl.sort}"
    if isinstance(decl, FnDecl):
        args = ", ".join(str(s) for s in decl.arg_sorts)
        return f"fn {decl.name}({args}) -> {decl.result}"
    if isinstance(decl, Collection):
        if decl.range_domain is not None:
            return (f"list {decl.name} = range({decl.range_domain.lo}, "
                    f"{decl.range_domain.hi})")
        elems = ", ".join(print_expr(e, canonical) for e in decl.elements)
        return f"list {decl.name} = [{elems}]"
    raise TypeError(f"not a declaration: {decl!r}")


def print_init_body(init: InitSegment, canonical: bool = False) -> str:
    """Init declarations and base assertions without the segment marker."""
    lines = []
    for sort in init.sorts:
        if isinstance(sort, EnumSort):
            lines.append(f"enum {sort.name} {{ {', '.join(sort.members)} }}")
        elif isinstance(sort, OpaqueSort):
            lines.append(f"sort {sort.name}")
    for decl in init.decls:
        lines.append(_print_decl(decl, canonical))
    for expr in init.preconditions:
        lines.append(f"assert {print_expr(expr, canonical)}")
    return "\n".join(lines)


def print_constraint_body(constraint: ConstraintSegment, canonical: bool = False) -> str:
    lines = [_print_decl(d, canonical) for d in constraint.local_decls]
    lines.extend(f"assert {print_expr(e, canonical)}" for e in constraint.exprs)
    return "\n".join(lines)


def _print_option(option: OptionSegment, canonical: bool) -> str:
    lines = [f"#OPTION {option.label} {option.check_type.value}: {option.nl_check}"]
    lines.extend(_print_decl(d, canonical) for d in option.local_decls)
    lines.append(f"check {print_expr(option.check_expr, canonical)}")
    return "\n".join(lines)


def print_program(program: SegmentedProgram, canonical: bool = False) -> str:
    """Canonical program text; re-parsing yields a structurally equal tree."""
    parts = []
    marker = f"#INIT: {program.init.nl_context}" if program.init.nl_context else "#INIT"
    body = print_init_body(program.init, canonical)
    parts.append(marker + ("\n" + body if body else ""))
    for constraint in program.constraints:
        seg = f"#CONSTRAINT: {constraint.nl_text}"
        body = print_constraint_body(constraint, canonical)
        parts.append(seg + ("\n" + body if body else ""))
    for option in program.options:
        parts.append(_print_option(option, canonical))
    return "\n\n".join(parts) + "\n"
