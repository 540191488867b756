"""Lowers grounded, comprehension-free expressions to a flat stack-machine
program over integer-valued state cells.

Every constant and function over finite enum/bool sorts becomes a block of
cells (one per argument combination); enum values are member ordinals and
booleans are 0/1, which makes the bool-to-int coercion a no-op at runtime.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from ..dsl.ast import (
    And,
    Apply,
    Arith,
    BoolLit,
    BoolSort,
    Compare,
    Comprehension,
    Distinct,
    EnumSort,
    Exists,
    Expr,
    ForAll,
    InitSegment,
    IntLit,
    Ite,
    Implies,
    Not,
    Or,
    Ref,
    SumList,
    Xor,
)
from ..dsl.rewrite import walk
from ..errors import CapExceeded

OP_PUSH = 1
OP_LOAD = 2
OP_LOADF = 3
OP_EQ = 4
OP_NE = 5
OP_LT = 6
OP_LE = 7
OP_GT = 8
OP_GE = 9
OP_ADD = 10
OP_SUB = 11
OP_NOT = 12
OP_AND = 13
OP_OR = 14
OP_SUM = 15
OP_DISTINCT = 16
OP_IMPLIES = 17
OP_XOR = 18
OP_ITE = 19

_CMP_OPS = {"==": OP_EQ, "!=": OP_NE, "<": OP_LT, "<=": OP_LE,
            ">": OP_GT, ">=": OP_GE}


def finite_size(sort) -> int | None:
    """Domain size of a finitely enumerable sort, else None."""
    if isinstance(sort, BoolSort):
        return 2
    if isinstance(sort, EnumSort):
        return len(sort.members)
    return None


@dataclass
class Space:
    """Cell layout of a finite-domain program state."""

    domains: array  # int32 domain size per cell
    const_cell: dict[str, int]
    fn_layout: dict[str, tuple[int, tuple[int, ...]]]  # name -> (base, arg sizes)
    total_states: int
    cell_names: tuple[str, ...]

    @property
    def num_cells(self) -> int:
        return len(self.domains)


class Unsupported(Exception):
    """Program uses sorts outside the finite enum/bool fragment."""


def _symbol_decls(init: InitSegment, exprs: list[Expr]):
    """Constants and functions referenced, init decls first, in order."""
    consts: dict[str, object] = {}
    fns: dict[str, object] = {}
    for decl in init.decls:
        kind = type(decl).__name__
        if kind == "ConstDecl":
            consts[decl.name] = decl
        elif kind == "FnDecl":
            fns[decl.name] = decl
    for expr in exprs:
        for node in walk(expr):
            if isinstance(node, Ref) and node.kind == "const" and node.name not in consts:
                consts[node.name] = node
            elif isinstance(node, Ref) and node.kind == "free":
                raise Unsupported(f"free symbol {node.name}")
            elif isinstance(node, Apply):
                if node.decl is None:
                    raise Unsupported(f"undeclared function {node.fn}")
                fns.setdefault(node.fn, node.decl)
    return consts, fns


def build_space(init: InitSegment, exprs: list[Expr]) -> Space:
    """Cell layout for init symbols plus anything extra the exprs mention.

    Raises Unsupported when any symbol involves a non-finite sort.
    """
    consts, fns = _symbol_decls(init, exprs)
    domains = array("i")
    const_cell: dict[str, int] = {}
    fn_layout: dict[str, tuple[int, tuple[int, ...]]] = {}
    names: list[str] = []
    total = 1
    for name, decl in consts.items():
        size = finite_size(decl.sort)
        if size is None:
            raise Unsupported(f"constant {name} has non-finite sort {decl.sort}")
        const_cell[name] = len(domains)
        domains.append(size)
        names.append(name)
        total *= size
    for name, decl in fns.items():
        arg_sizes = []
        for sort in decl.arg_sorts:
            size = finite_size(sort)
            if size is None:
                raise Unsupported(f"{name} argument sort {sort} is not finite")
            arg_sizes.append(size)
        result_size = finite_size(decl.result)
        if result_size is None:
            raise Unsupported(f"{name} result sort {decl.result} is not finite")
        ncells = 1
        for s in arg_sizes:
            ncells *= s
        fn_layout[name] = (len(domains), tuple(arg_sizes))
        for i in range(ncells):
            domains.append(result_size)
            names.append(f"{name}[{i}]")
        total *= result_size ** ncells
    return Space(domains, const_cell, fn_layout, total, tuple(names))


class _Emitter:
    def __init__(self, space: Space):
        self.space = space
        self.code = array("q")
        self.depth = 0
        self.max_depth = 0

    def _push(self, n: int = 1):
        self.depth += n
        self.max_depth = max(self.max_depth, self.depth)

    def _pop(self, n: int):
        self.depth -= n

    def emit(self, e: Expr) -> None:
        if isinstance(e, BoolLit):
            self.code.extend((OP_PUSH, 1 if e.value else 0))
            self._push()
            return
        if isinstance(e, IntLit):
            self.code.extend((OP_PUSH, e.value))
            self._push()
            return
        if isinstance(e, Ref):
            if e.kind == "member":
                assert isinstance(e.sort, EnumSort)
                self.code.extend((OP_PUSH, e.sort.members.index(e.name)))
                self._push()
                return
            if e.kind == "const":
                self.code.extend((OP_LOAD, self.space.const_cell[e.name]))
                self._push()
                return
            raise Unsupported(f"unresolved reference {e.name} ({e.kind})")
        if isinstance(e, Apply):
            base, arg_sizes = self.space.fn_layout[e.fn]
            static = self._static_index(e.args, arg_sizes)
            if static is not None:
                self.code.extend((OP_LOAD, base + static))
                self._push()
                return
            for a in e.args:
                self.emit(a)
            self.code.extend((OP_LOADF, len(e.args), base))
            self.code.extend(arg_sizes[1:])
            self._pop(len(e.args))
            self._push()
            return
        if isinstance(e, Compare):
            self.emit(e.lhs)
            self.emit(e.rhs)
            self.code.append(_CMP_OPS[e.op])
            self._pop(1)
            return
        if isinstance(e, Arith):
            self.emit(e.lhs)
            self.emit(e.rhs)
            self.code.append(OP_ADD if e.op == "+" else OP_SUB)
            self._pop(1)
            return
        if isinstance(e, Not):
            self.emit(e.item)
            self.code.append(OP_NOT)
            return
        if isinstance(e, (And, Or, SumList, Distinct)):
            for item in e.items:
                self.emit(item)
            op = {And: OP_AND, Or: OP_OR, SumList: OP_SUM,
                  Distinct: OP_DISTINCT}[type(e)]
            self.code.extend((op, len(e.items)))
            self._pop(len(e.items))
            self._push()
            return
        if isinstance(e, Implies):
            self.emit(e.lhs)
            self.emit(e.rhs)
            self.code.append(OP_IMPLIES)
            self._pop(1)
            return
        if isinstance(e, Xor):
            self.emit(e.lhs)
            self.emit(e.rhs)
            self.code.append(OP_XOR)
            self._pop(1)
            return
        if isinstance(e, Ite):
            self.emit(e.cond)
            self.emit(e.then)
            self.emit(e.other)
            self.code.append(OP_ITE)
            self._pop(2)
            return
        if isinstance(e, (ForAll, Exists, Comprehension)):
            raise Unsupported("quantifiers must be grounded before compilation")
        raise TypeError(f"not an expression: {e!r}")

    @staticmethod
    def _ordinal(e: Expr) -> int | None:
        if isinstance(e, BoolLit):
            return 1 if e.value else 0
        if isinstance(e, IntLit):
            return e.value
        if isinstance(e, Ref) and e.kind == "member" and isinstance(e.sort, EnumSort):
            return e.sort.members.index(e.name)
        return None

    def _static_index(self, args, arg_sizes) -> int | None:
        index = 0
        for arg, size in zip(args, arg_sizes):
            value = self._ordinal(arg)
            if value is None or not 0 <= value < size:
                return None
            index = index * size + value
        return index


def compile_exprs(exprs: list[Expr], space: Space):
    """Compile each expression to bytecode; returns (code, starts, max_stack)."""
    code = array("q")
    starts = array("i", [0])
    max_stack = 1
    for e in exprs:
        emitter = _Emitter(space)
        emitter.emit(e)
        if emitter.depth != 1:
            raise AssertionError("expression must leave one value")
        code.extend(emitter.code)
        starts.append(len(code))
        max_stack = max(max_stack, emitter.max_depth)
    return code, starts, max_stack
