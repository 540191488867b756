"""Translates SMT-LIB terms over enum datatypes, booleans, and bounded
integer arithmetic into CNF.

Enums are bit-vectors of member ordinals; integers appear only as literals
and ite-coercions of booleans combined with +/-, so every integer term has a
computable interval and blasts to a signed two's-complement vector. Anything
outside this fragment (uninterpreted sorts, declared Int symbols, unbounded
quantifiers) raises Unsupported, which the driver reports conservatively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cdcl import SatSolver
from .sexpr import Symbol

GROUND_CAP = 65536  # instantiations per quantifier block
SELECT_CAP = 4096  # argument grid for symbolic function application


class Unsupported(Exception):
    pass


class SortError(Exception):
    pass


@dataclass(frozen=True)
class EnumVal:
    sort: str
    bits: tuple[int, ...]


@dataclass(frozen=True)
class IntVal:
    bits: tuple[int, ...]  # two's complement, little-endian
    lo: int
    hi: int


def _width_for(lo: int, hi: int) -> int:
    w = 1
    while not (-(1 << (w - 1)) <= lo and hi <= (1 << (w - 1)) - 1):
        w += 1
    return w


def _enum_width(size: int) -> int:
    return max(1, (size - 1).bit_length()) if size > 1 else 0


class Blaster:
    def __init__(self, datatypes: dict[str, tuple[str, ...]],
                 funs: dict[str, tuple[tuple[str, ...], str]]):
        self.datatypes = datatypes
        self.ctor_of: dict[str, tuple[str, int]] = {}
        for sort, ctors in datatypes.items():
            for i, name in enumerate(ctors):
                self.ctor_of[name] = (sort, i)
        self.funs = funs
        self.solver = SatSolver()
        self.TRUE = self.solver.new_var()
        self.solver.add_clause([self.TRUE])
        self.FALSE = -self.TRUE
        self._gates: dict = {}
        self._cells: dict[tuple[str, tuple[int, ...]], object] = {}

    # --- gates ---

    def g_and(self, lits) -> int:
        out = []
        for lit in lits:
            if lit == self.FALSE:
                return self.FALSE
            if lit == self.TRUE:
                continue
            out.append(lit)
        if not out:
            return self.TRUE
        out = sorted(set(out))
        for lit in out:
            if -lit in out:
                return self.FALSE
        if len(out) == 1:
            return out[0]
        key = ("and", tuple(out))
        cached = self._gates.get(key)
        if cached is not None:
            return cached
        v = self.solver.new_var()
        for lit in out:
            self.solver.add_clause([-v, lit])
        self.solver.add_clause([v] + [-lit for lit in out])
        self._gates[key] = v
        return v

    def g_or(self, lits) -> int:
        return -self.g_and([-lit for lit in lits])

    def g_not(self, lit: int) -> int:
        return -lit

    def g_xor(self, a: int, b: int) -> int:
        if a == self.TRUE:
            return -b
        if a == self.FALSE:
            return b
        if b == self.TRUE:
            return -a
        if b == self.FALSE:
            return a
        if a == b:
            return self.FALSE
        if a == -b:
            return self.TRUE
        key = ("xor", tuple(sorted((a, b))))
        cached = self._gates.get(key)
        if cached is not None:
            return cached
        v = self.solver.new_var()
        self.solver.add_clause([-v, a, b])
        self.solver.add_clause([-v, -a, -b])
        self.solver.add_clause([v, -a, b])
        self.solver.add_clause([v, a, -b])
        self._gates[key] = v
        return v

    def g_iff(self, a: int, b: int) -> int:
        return -self.g_xor(a, b)

    def g_ite(self, c: int, t: int, e: int) -> int:
        if c == self.TRUE:
            return t
        if c == self.FALSE:
            return e
        if t == e:
            return t
        if t == self.TRUE and e == self.FALSE:
            return c
        if t == self.FALSE and e == self.TRUE:
            return -c
        key = ("ite", c, t, e)
        cached = self._gates.get(key)
        if cached is not None:
            return cached
        v = self.solver.new_var()
        self.solver.add_clause([-v, -c, t])
        self.solver.add_clause([-v, c, e])
        self.solver.add_clause([v, -c, -t])
        self.solver.add_clause([v, c, -e])
        self._gates[key] = v
        return v

    # --- integer vectors ---

    def int_const(self, value: int) -> IntVal:
        return IntVal((), value, value)

    def _const_bits(self, value: int, width: int) -> tuple[int, ...]:
        bits = []
        v = value & ((1 << width) - 1)
        for i in range(width):
            bits.append(self.TRUE if (v >> i) & 1 else self.FALSE)
        return tuple(bits)

    def _extend(self, iv: IntVal, width: int) -> tuple[int, ...]:
        if iv.lo == iv.hi:
            return self._const_bits(iv.lo, width)
        bits = list(iv.bits)
        sign = bits[-1]
        while len(bits) < width:
            bits.append(sign)
        return tuple(bits[:width])

    def int_add(self, a: IntVal, b: IntVal) -> IntVal:
        lo, hi = a.lo + b.lo, a.hi + b.hi
        if lo == hi:
            return self.int_const(lo)
        w = _width_for(lo, hi)
        xs, ys = self._extend(a, w), self._extend(b, w)
        bits, carry = [], self.FALSE
        for x, y in zip(xs, ys):
            bits.append(self.g_xor(self.g_xor(x, y), carry))
            carry = self.g_or([self.g_and([x, y]), self.g_and([carry, self.g_xor(x, y)])])
        return IntVal(tuple(bits), lo, hi)

    def int_neg(self, a: IntVal) -> IntVal:
        return self.int_sub(self.int_const(0), a)

    def int_sub(self, a: IntVal, b: IntVal) -> IntVal:
        lo, hi = a.lo - b.hi, a.hi - b.lo
        if lo == hi:
            return self.int_const(lo)
        w = _width_for(lo, hi)
        xs, ys = self._extend(a, w), self._extend(b, w)
        bits, carry = [], self.TRUE  # a + ~b + 1
        for x, y in zip(xs, ys):
            ny = -y
            bits.append(self.g_xor(self.g_xor(x, ny), carry))
            carry = self.g_or([self.g_and([x, ny]), self.g_and([carry, self.g_xor(x, ny)])])
        return IntVal(tuple(bits), lo, hi)

    def int_ite(self, c: int, a: IntVal, b: IntVal) -> IntVal:
        if c == self.TRUE:
            return a
        if c == self.FALSE:
            return b
        lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
        if lo == hi:
            return self.int_const(lo)
        w = _width_for(lo, hi)
        xs, ys = self._extend(a, w), self._extend(b, w)
        return IntVal(tuple(self.g_ite(c, x, y) for x, y in zip(xs, ys)), lo, hi)

    def int_eq(self, a: IntVal, b: IntVal) -> int:
        if a.hi < b.lo or b.hi < a.lo:
            return self.FALSE
        if a.lo == a.hi == b.lo == b.hi:
            return self.TRUE
        w = max(_width_for(a.lo, a.hi), _width_for(b.lo, b.hi))
        xs, ys = self._extend(a, w), self._extend(b, w)
        return self.g_and([self.g_iff(x, y) for x, y in zip(xs, ys)])

    def int_lt(self, a: IntVal, b: IntVal) -> int:
        if a.hi < b.lo:
            return self.TRUE
        if a.lo >= b.hi:
            return self.FALSE
        diff = self.int_sub(a, b)
        if diff.lo == diff.hi:
            return self.TRUE if diff.lo < 0 else self.FALSE
        return diff.bits[-1]  # sign bit

    # --- enums ---

    def enum_const(self, sort: str, ordinal: int) -> EnumVal:
        width = _enum_width(len(self.datatypes[sort]))
        return EnumVal(sort, self._const_bits(ordinal, width))

    def enum_cell(self, sort: str) -> EnumVal:
        size = len(self.datatypes[sort])
        width = _enum_width(size)
        bits = tuple(self.solver.new_var() for _ in range(width))
        for forbidden in range(size, 1 << width):
            clause = []
            for i in range(width):
                clause.append(-bits[i] if (forbidden >> i) & 1 else bits[i])
            self.solver.add_clause(clause)
        return EnumVal(sort, bits)

    def enum_eq(self, a: EnumVal, b: EnumVal) -> int:
        if a.sort != b.sort:
            raise SortError(f"comparing {a.sort} with {b.sort}")
        if not a.bits:
            return self.TRUE
        return self.g_and([self.g_iff(x, y) for x, y in zip(a.bits, b.bits)])

    def enum_ite(self, c: int, a: EnumVal, b: EnumVal) -> EnumVal:
        if a.sort != b.sort:
            raise SortError(f"ite branches {a.sort} vs {b.sort}")
        return EnumVal(a.sort, tuple(self.g_ite(c, x, y) for x, y in zip(a.bits, b.bits)))

    # --- function cells and application ---

    def _cell(self, name: str, args: tuple[int, ...]):
        key = (name, args)
        cell = self._cells.get(key)
        if cell is not None:
            return cell
        ret = self.funs[name][1]
        if ret == "Bool":
            cell = self.solver.new_var()
        elif ret in self.datatypes:
            cell = self.enum_cell(ret)
        else:
            raise Unsupported(f"function {name} has unsupported result sort {ret}")
        self._cells[key] = cell
        return cell

    @staticmethod
    def _const_ordinal(blaster: "Blaster", value) -> int | None:
        if isinstance(value, EnumVal):
            ordinal = 0
            for i, bit in enumerate(value.bits):
                if bit == blaster.TRUE:
                    ordinal |= 1 << i
                elif bit != blaster.FALSE:
                    return None
            return ordinal
        if isinstance(value, int):  # boolean literal
            if value == blaster.TRUE:
                return 1
            if value == blaster.FALSE:
                return 0
            return None
        return None

    def apply(self, name: str, arg_values: list):
        arg_sorts, _ = self.funs[name]
        ordinals = []
        static = True
        for value in arg_values:
            ordinal = self._const_ordinal(self, value)
            if ordinal is None:
                static = False
                break
            ordinals.append(ordinal)
        if static:
            return self._cell(name, tuple(ordinals))
        # symbolic arguments: select over the full argument grid
        grid = 1
        domains = []
        for sort in arg_sorts:
            if sort == "Bool":
                domains.append(2)
            elif sort in self.datatypes:
                domains.append(len(self.datatypes[sort]))
            else:
                raise Unsupported(f"function {name} argument sort {sort}")
            grid *= domains[-1]
        if grid > SELECT_CAP:
            raise Unsupported(f"symbolic application of {name} over {grid} cells")
        result = None
        combo = [0] * len(domains)
        for _ in range(grid):
            conds = []
            for value, sort, ordinal in zip(arg_values, arg_sorts, combo):
                if sort == "Bool":
                    conds.append(value if ordinal else -value)
                else:
                    conds.append(self.enum_eq(value, self.enum_const(sort, ordinal)))
            hit = self.g_and(conds)
            cell = self._cell(name, tuple(combo))
            if result is None:
                result = cell
            elif isinstance(cell, int):
                result = self.g_ite(hit, cell, result)
            else:
                result = self.enum_ite(hit, cell, result)
            for k in range(len(combo)):
                combo[k] += 1
                if combo[k] < domains[k]:
                    break
                combo[k] = 0
        return result

    # --- terms ---

    def term(self, form, env: dict | None = None) -> object:
        env = env or {}
        return self._term(form, env)

    def bool_term(self, form, env: dict | None = None) -> int:
        value = self.term(form, env)
        if not isinstance(value, int):
            raise SortError(f"expected a boolean term: {form!r}")
        return value

    def _term(self, form, env: dict):
        if isinstance(form, bool):  # pragma: no cover - reader yields ints
            return self.TRUE if form else self.FALSE
        if isinstance(form, int):
            return self.int_const(form)
        if isinstance(form, Symbol):
            name = str(form)
            if name in env:
                return env[name]
            if name == "true":
                return self.TRUE
            if name == "false":
                return self.FALSE
            if name in self.ctor_of:
                sort, ordinal = self.ctor_of[name]
                return self.enum_const(sort, ordinal)
            if name in self.funs:
                arg_sorts, ret = self.funs[name]
                if arg_sorts:
                    raise SortError(f"function {name} used without arguments")
                return self.apply(name, [])
            raise Unsupported(f"unknown symbol {name}")
        if not isinstance(form, list) or not form:
            raise Unsupported(f"cannot interpret term {form!r}")
        head = form[0]
        if isinstance(head, list):
            raise Unsupported(f"higher-order term {form!r}")
        op = str(head)
        args = form[1:]
        if op == "let":
            bindings, body = args
            inner = dict(env)
            for name, value in bindings:
                inner[str(name)] = self._term(value, env)
            return self._term(body, inner)
        if op in ("forall", "exists"):
            return self._quantifier(op, args, env)
        if op == "not":
            return -self.bool_term(args[0], env)
        if op == "and":
            return self.g_and([self.bool_term(a, env) for a in args])
        if op == "or":
            return self.g_or([self.bool_term(a, env) for a in args])
        if op == "=>":
            lits = [self.bool_term(a, env) for a in args]
            result = lits[-1]
            for lit in reversed(lits[:-1]):
                result = self.g_or([-lit, result])
            return result
        if op == "xor":
            lits = [self.bool_term(a, env) for a in args]
            result = lits[0]
            for lit in lits[1:]:
                result = self.g_xor(result, lit)
            return result
        if op == "ite":
            c = self.bool_term(args[0], env)
            t = self._term(args[1], env)
            e = self._term(args[2], env)
            if isinstance(t, int) and isinstance(e, int):
                return self.g_ite(c, t, e)
            if isinstance(t, IntVal) and isinstance(e, IntVal):
                return self.int_ite(c, t, e)
            if isinstance(t, EnumVal) and isinstance(e, EnumVal):
                return self.enum_ite(c, t, e)
            raise SortError(f"ite branches disagree: {form!r}")
        if op == "=":
            values = [self._term(a, env) for a in args]
            return self.g_and([self._eq(values[i], values[i + 1])
                               for i in range(len(values) - 1)])
        if op == "distinct":
            values = [self._term(a, env) for a in args]
            lits = []
            for i in range(len(values)):
                for j in range(i + 1, len(values)):
                    lits.append(-self._eq(values[i], values[j]))
            return self.g_and(lits)
        if op in ("<", "<=", ">", ">="):
            values = [self._int(self._term(a, env)) for a in args]
            lits = []
            for a, b in zip(values, values[1:]):
                if op == "<":
                    lits.append(self.int_lt(a, b))
                elif op == "<=":
                    lits.append(-self.int_lt(b, a))
                elif op == ">":
                    lits.append(self.int_lt(b, a))
                else:
                    lits.append(-self.int_lt(a, b))
            return self.g_and(lits)
        if op == "+":
            values = [self._int(self._term(a, env)) for a in args]
            result = values[0]
            for value in values[1:]:
                result = self.int_add(result, value)
            return result
        if op == "-":
            values = [self._int(self._term(a, env)) for a in args]
            if len(values) == 1:
                return self.int_neg(values[0])
            result = values[0]
            for value in values[1:]:
                result = self.int_sub(result, value)
            return result
        if op == "*":
            values = [self._int(self._term(a, env)) for a in args]
            consts = [v for v in values if v.lo == v.hi]
            if len(consts) == len(values):
                product = 1
                for v in consts:
                    product *= v.lo
                return self.int_const(product)
            raise Unsupported("non-constant multiplication")
        if op in self.funs:
            values = [self._term(a, env) for a in args]
            return self.apply(op, values)
        raise Unsupported(f"operator {op}")

    def _int(self, value) -> IntVal:
        if isinstance(value, IntVal):
            return value
        if isinstance(value, int):  # boolean in arithmetic position
            return self.int_ite(value, self.int_const(1), self.int_const(0))
        raise SortError(f"expected an integer term, got {value!r}")

    def _eq(self, a, b) -> int:
        if isinstance(a, int) and isinstance(b, int):
            return self.g_iff(a, b)
        if isinstance(a, EnumVal) and isinstance(b, EnumVal):
            return self.enum_eq(a, b)
        if isinstance(a, (IntVal, int)) and isinstance(b, (IntVal, int)):
            return self.int_eq(self._int(a), self._int(b))
        raise SortError(f"cannot equate {a!r} with {b!r}")

    def _quantifier(self, op: str, args, env: dict) -> int:
        binders, body = args
        names = []
        domains = []
        total = 1
        for name, sort in binders:
            sort_name = str(sort)
            if sort_name not in self.datatypes:
                raise Unsupported(f"quantifier over sort {sort_name}")
            names.append(str(name))
            domains.append(sort_name)
            total *= len(self.datatypes[sort_name])
        if total > GROUND_CAP:
            raise Unsupported(f"quantifier grounding over {total} instances")
        lits = []
        combo = [0] * len(names)
        sizes = [len(self.datatypes[d]) for d in domains]
        for _ in range(total):
            inner = dict(env)
            for name, sort_name, ordinal in zip(names, domains, combo):
                inner[name] = self.enum_const(sort_name, ordinal)
            lits.append(self.bool_term(body, inner))
            for k in range(len(combo)):
                combo[k] += 1
                if combo[k] < sizes[k]:
                    break
                combo[k] = 0
        return self.g_and(lits) if op == "forall" else self.g_or(lits)
