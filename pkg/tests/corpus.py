"""Seeded random enum-only program generator for oracle/solver agreement
tests. Deterministic per seed; every produced program is well-sorted,
enumerable under a small cap, and print/parse round-trips."""

from __future__ import annotations

import random

from ssv.dsl.ast import (
    And,
    BoolSort,
    Apply,
    Binder,
    BoolLit,
    CheckType,
    CompBinder,
    Compare,
    Comprehension,
    ConstDecl,
    ConstraintSegment,
    EnumSort,
    Exists,
    FnDecl,
    ForAll,
    InitSegment,
    IntLit,
    Ite,
    Implies,
    Not,
    OptionSegment,
    Or,
    Ref,
    SegmentedProgram,
    SumList,
    Xor,
)
from ssv.oracle.compiler import finite_size
from ssv.tasks import OptionLabel

MAX_STATES = 4096


class _Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        count = rng.randint(1, 3)
        self.sorts = []
        for i in range(count):
            members = tuple(f"s{i}m{j}" for j in range(rng.randint(2, 4)))
            self.sorts.append(EnumSort(f"S{i}", members))
        self.consts = [
            ConstDecl(f"c{i}", rng.choice(self.sorts))
            for i in range(rng.randint(0, 2))
        ]
        from ssv.dsl.ast import BOOL

        self.fns = []
        for i in range(rng.randint(1, 3)):
            arity = rng.randint(1, 2)
            args = tuple(rng.choice(self.sorts) for _ in range(arity))
            result = BOOL if rng.random() < 0.8 else rng.choice(self.sorts)
            self.fns.append(FnDecl(f"f{i}", args, result))

    def state_bits(self) -> int:
        total = 1
        for const in self.consts:
            total *= finite_size(const.sort)
        for fn in self.fns:
            cells = 1
            for sort in fn.arg_sorts:
                cells *= finite_size(sort)
            total *= finite_size(fn.result) ** cells
            if total > MAX_STATES:
                return total
        return total

    # --- terms ---

    def enum_term(self, sort: EnumSort, depth: int, env) -> object:
        rng = self.rng
        bound = [name for name, s in env if s == sort]
        choices = ["member"]
        if bound:
            choices += ["bound", "bound"]
        if any(c.sort == sort for c in self.consts):
            choices.append("const")
        if depth > 0 and any(f.result == sort for f in self.fns):
            choices.append("apply")
        if depth > 0:
            choices.append("ite")
        kind = rng.choice(choices)
        if kind == "member":
            return Ref(rng.choice(sort.members), "member", sort)
        if kind == "bound":
            return Ref(rng.choice(bound), "bound", sort)
        if kind == "const":
            const = rng.choice([c for c in self.consts if c.sort == sort])
            return Ref(const.name, "const", const.sort)
        if kind == "apply":
            fn = rng.choice([f for f in self.fns if f.result == sort])
            return self.apply(fn, depth - 1, env)
        return Ite(self.bool_expr(depth - 1, env),
                   self.enum_term(sort, depth - 1, env),
                   self.enum_term(sort, depth - 1, env))

    def apply(self, fn: FnDecl, depth: int, env):
        return Apply(fn.name,
                     tuple(self.enum_term(s, depth, env) for s in fn.arg_sorts),
                     fn)

    def int_term(self, depth: int, env):
        rng = self.rng
        kind = rng.choice(["lit", "sum", "sum"] if depth > 0 else ["lit"])
        if kind == "lit":
            return IntLit(rng.randint(0, 3))
        sort = rng.choice(self.sorts)
        binder_name = f"q{len(env)}"
        inner = env + [(binder_name, sort)]
        template = self.bool_expr(max(depth - 1, 0), inner)
        comp = Comprehension(
            template,
            (CompBinder(binder_name, sort.name,
                        tuple(Ref(m, "member", sort) for m in sort.members),
                        sort),))
        return SumList((comp,))

    def bool_expr(self, depth: int, env) -> object:
        rng = self.rng
        if depth <= 0:
            kind = rng.choice(["apply", "eq", "lit"])
        else:
            kind = rng.choice([
                "apply", "eq", "and", "or", "not", "implies", "xor",
                "quant", "cmp", "apply", "eq",
            ])
        if kind == "lit":
            return BoolLit(rng.random() < 0.5)
        if kind == "apply":
            bools = [f for f in self.fns if isinstance(f.result, BoolSort)]
            if not bools:
                return self.eq(depth, env)
            return self.apply(rng.choice(bools), depth, env)
        if kind == "eq":
            return self.eq(depth, env)
        if kind == "and":
            return And(tuple(self.bool_expr(depth - 1, env)
                             for _ in range(rng.randint(2, 3))))
        if kind == "or":
            return Or(tuple(self.bool_expr(depth - 1, env)
                            for _ in range(rng.randint(2, 3))))
        if kind == "not":
            return Not(self.bool_expr(depth - 1, env))
        if kind == "implies":
            return Implies(self.bool_expr(depth - 1, env),
                           self.bool_expr(depth - 1, env))
        if kind == "xor":
            return Xor(self.bool_expr(depth - 1, env),
                       self.bool_expr(depth - 1, env))
        if kind == "quant":
            sort = rng.choice(self.sorts)
            name = f"q{len(env)}"
            body = self.bool_expr(depth - 1, env + [(name, sort)])
            cls = ForAll if rng.random() < 0.5 else Exists
            return cls((Binder(name, sort),), body)
        # cmp: comprehension sum against a small constant
        op = rng.choice(["<", "<=", ">", ">=", "==", "!="])
        return Compare(op, self.int_term(depth, env),
                       IntLit(rng.randint(0, 3)))

    def eq(self, depth: int, env):
        sort = self.rng.choice(self.sorts)
        op = self.rng.choice(["==", "!="])
        return Compare(op, self.enum_term(sort, max(depth - 1, 0), env),
                       self.enum_term(sort, max(depth - 1, 0), env))

    def program(self) -> SegmentedProgram:
        rng = self.rng
        init = InitSegment(
            nl_context="randomly generated scenario",
            sorts=tuple(self.sorts),
            decls=tuple(self.consts) + tuple(self.fns),
            preconditions=tuple(self.bool_expr(1, [])
                                for _ in range(rng.randint(0, 2))),
        )
        constraints = tuple(
            ConstraintSegment(f"random constraint {i + 1}", (),
                              (self.bool_expr(rng.randint(1, 3), []),))
            for i in range(rng.randint(1, 6))
        )
        labels = "ABCDEFG"
        options = tuple(
            OptionSegment(OptionLabel(labels[i]), f"random option {i + 1}",
                          rng.choice(list(CheckType)),
                          self.bool_expr(rng.randint(1, 2), []))
            for i in range(rng.randint(2, 4))
        )
        return SegmentedProgram(init, constraints, options)


def random_program(seed: int) -> SegmentedProgram:
    """Deterministic random enum-only program with a bounded state space."""
    for attempt in range(64):
        gen = _Gen(random.Random(seed * 1009 + attempt))
        if gen.state_bits() <= MAX_STATES:
            return gen.program()
    raise AssertionError("could not fit a random program under the cap")
