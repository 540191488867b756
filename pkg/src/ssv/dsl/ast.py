"""AST and scope for the constraint language of generated programs.

Programs are segmented: an init segment with declarations and base
preconditions, natural-language-annotated constraint segments, and option
segments each carrying one solver check. Expressions use a closed vocabulary
of boolean, arithmetic and finite-quantifier forms; booleans coerce to {0,1}
in arithmetic positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import DuplicateOptionLabel, MissingSegment, SortMismatch
from ..tasks import OptionLabel

# --- sorts ---


class Sort:
    pass


@dataclass(frozen=True)
class BoolSort(Sort):
    def __str__(self):
        return "bool"


@dataclass(frozen=True)
class IntSort(Sort):
    def __str__(self):
        return "int"


@dataclass(frozen=True)
class EnumSort(Sort):
    name: str
    members: tuple[str, ...]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class OpaqueSort(Sort):
    """Uninterpreted sort: solver-only, not finitely enumerable."""

    name: str

    def __str__(self):
        return self.name


BOOL = BoolSort()
INT = IntSort()


# --- declarations ---


@dataclass(frozen=True)
class ConstDecl:
    name: str
    sort: Sort


@dataclass(frozen=True)
class FnDecl:
    name: str
    arg_sorts: tuple[Sort, ...]
    result: Sort


@dataclass(frozen=True)
class RangeDomain:
    """Integer range ``range(lo, hi)`` denoting {lo, .., hi-1}."""

    lo: int
    hi: int

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(range(self.lo, self.hi))


@dataclass(frozen=True)
class Collection:
    """A declared finite list of elements (constant refs or integers)."""

    name: str
    element_sort: Sort
    elements: tuple["Expr", ...]
    range_domain: RangeDomain | None = None


Decl = ConstDecl | FnDecl | Collection


# --- expressions ---


class Expr:
    pass


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class Ref(Expr):
    """Resolved name: an enum member, a declared constant, a bound variable,
    or a free (undeclared) symbol kept for diagnostics."""

    name: str
    kind: str  # "member" | "const" | "bound" | "free"
    sort: Sort | None


@dataclass(frozen=True)
class Apply(Expr):
    fn: str
    args: tuple[Expr, ...]
    decl: FnDecl | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # "==", "!=", "<", "<=", ">", ">="
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Arith(Expr):
    op: str  # "+", "-"
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class And(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Or(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Not(Expr):
    item: Expr


@dataclass(frozen=True)
class Implies(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Xor(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Ite(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass(frozen=True)
class Distinct(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class SumList(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Binder:
    name: str
    sort: Sort


@dataclass(frozen=True)
class ForAll(Expr):
    binders: tuple[Binder, ...]
    body: Expr


@dataclass(frozen=True)
class Exists(Expr):
    binders: tuple[Binder, ...]
    body: Expr


@dataclass(frozen=True)
class CompBinder:
    """Comprehension binder over a finite domain."""

    name: str
    domain_name: str  # enum sort name, collection name, or "range"
    elements: tuple[Expr, ...]
    element_sort: Sort
    range_domain: RangeDomain | None = None


@dataclass(frozen=True)
class Comprehension(Expr):
    """List-producing template expansion; valid only inside list arguments."""

    template: Expr
    binders: tuple[CompBinder, ...]


# --- program segments ---


class CheckType(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    VALID = "valid"


@dataclass(frozen=True)
class InitSegment:
    nl_context: str
    sorts: tuple[Sort, ...]
    decls: tuple[Decl, ...]
    preconditions: tuple[Expr, ...]


@dataclass(frozen=True)
class ConstraintSegment:
    nl_text: str
    local_decls: tuple[Decl, ...]
    exprs: tuple[Expr, ...]


@dataclass(frozen=True)
class OptionSegment:
    label: OptionLabel
    nl_check: str
    check_type: CheckType
    check_expr: Expr
    local_decls: tuple[Decl, ...] = ()


@dataclass(frozen=True)
class SegmentedProgram:
    init: InitSegment
    constraints: tuple[ConstraintSegment, ...]
    options: tuple[OptionSegment, ...]

    def __post_init__(self):
        if not self.constraints:
            raise MissingSegment("constraint")
        if not self.options:
            raise MissingSegment("option")
        labels = [o.label for o in self.options]
        if len(set(labels)) != len(labels):
            raise DuplicateOptionLabel(f"duplicate option labels: {[l.value for l in labels]}")
        for c in self.constraints:
            if not c.nl_text.strip():
                raise MissingSegment("constraint annotation")

    def option(self, label: OptionLabel) -> OptionSegment:
        for o in self.options:
            if o.label == label:
                return o
        raise KeyError(label)


# --- scope ---


class Scope:
    """Flat program namespace plus lexical binder frames."""

    def __init__(self, parent: "Scope | None" = None):
        self.parent = parent
        self.entries: dict[str, object] = {}

    def _lookup(self, name: str):
        scope: Scope | None = self
        while scope is not None:
            if name in scope.entries:
                return scope.entries[name]
            scope = scope.parent
        return None

    def declare(self, name: str, entry: object) -> None:
        if self._lookup(name) is not None:
            raise SortMismatch(f"name '{name}' declared twice")
        self.entries[name] = entry

    def sort(self, name: str) -> Sort | None:
        entry = self._lookup(name)
        return entry if isinstance(entry, Sort) else None

    def const(self, name: str) -> ConstDecl | None:
        entry = self._lookup(name)
        return entry if isinstance(entry, ConstDecl) else None

    def fn(self, name: str) -> FnDecl | None:
        entry = self._lookup(name)
        return entry if isinstance(entry, FnDecl) else None

    def collection(self, name: str) -> Collection | None:
        entry = self._lookup(name)
        return entry if isinstance(entry, Collection) else None

    def member(self, name: str) -> tuple[EnumSort, int] | None:
        entry = self._lookup(name)
        return entry if isinstance(entry, tuple) else None

    def resolve(self, name: str):
        return self._lookup(name)

    def child(self) -> "Scope":
        return Scope(parent=self)

    def add_sort(self, sort: EnumSort | OpaqueSort) -> None:
        self.declare(sort.name, sort)
        if isinstance(sort, EnumSort):
            for i, member in enumerate(sort.members):
                self.declare(member, (sort, i))

    def iter_symbols(self):
        """Constants and functions in declaration order, innermost last."""
        scopes = []
        scope: Scope | None = self
        while scope is not None:
            scopes.append(scope)
            scope = scope.parent
        for scope in reversed(scopes):
            for entry in scope.entries.values():
                if isinstance(entry, (ConstDecl, FnDecl)):
                    yield entry


def scope_of_init(init: InitSegment) -> Scope:
    scope = Scope()
    for sort in init.sorts:
        scope.add_sort(sort)
    for decl in init.decls:
        scope.declare(decl.name, decl)
    return scope


def constraint_scope(init_scope: Scope, constraint: ConstraintSegment) -> Scope:
    scope = init_scope.child()
    for decl in constraint.local_decls:
        scope.declare(decl.name, decl)
    return scope


# --- sort computation and checking ---

_NUMERIC = (IntSort, BoolSort)


def _numeric(sort: Sort | None) -> bool:
    return sort is None or isinstance(sort, _NUMERIC)


def sort_of(expr: Expr) -> Sort | None:
    """Sort of an expression; None when free symbols leave it unknown."""
    if isinstance(expr, BoolLit):
        return BOOL
    if isinstance(expr, IntLit):
        return INT
    if isinstance(expr, Ref):
        return expr.sort
    if isinstance(expr, Apply):
        return expr.decl.result if expr.decl else None
    if isinstance(expr, (Compare, And, Or, Not, Implies, Xor, ForAll, Exists)):
        return BOOL
    if isinstance(expr, (Arith, SumList)):
        return INT
    if isinstance(expr, Ite):
        a, b = sort_of(expr.then), sort_of(expr.other)
        if a is None or b is None:
            return None
        if a == b:
            return a
        if _numeric(a) and _numeric(b):
            return INT
        return None
    if isinstance(expr, Distinct):
        return BOOL
    if isinstance(expr, Comprehension):
        return None  # list-valued; only legal inside list arguments
    raise TypeError(f"not an expression: {expr!r}")


def check_sorts(expr: Expr) -> None:
    """Raise SortMismatch unless the expression is well-sorted.

    Unknown sorts (from free symbols under lenient parsing) are skipped;
    boolean operands are accepted wherever integers are expected.
    """

    def require_bool(e: Expr, where: str):
        s = sort_of(e)
        if s is not None and not isinstance(s, BoolSort):
            raise SortMismatch(f"{where} expects a boolean, got {s}")

    def require_numeric(e: Expr, where: str):
        s = sort_of(e)
        if not _numeric(s):
            raise SortMismatch(f"{where} expects an integer, got {s}")

    def walk(e: Expr):
        if isinstance(e, (BoolLit, IntLit, Ref)):
            return
        if isinstance(e, Apply):
            for a in e.args:
                walk(a)
            if e.decl is not None:
                for i, (a, want) in enumerate(zip(e.args, e.decl.arg_sorts)):
                    got = sort_of(a)
                    if got is not None and got != want:
                        raise SortMismatch(
                            f"argument {i + 1} of {e.fn} expects {want}, got {got}"
                        )
            return
        if isinstance(e, Compare):
            walk(e.lhs)
            walk(e.rhs)
            a, b = sort_of(e.lhs), sort_of(e.rhs)
            if e.op in ("<", "<=", ">", ">="):
                require_numeric(e.lhs, e.op)
                require_numeric(e.rhs, e.op)
            else:
                if a is not None and b is not None and a != b:
                    if not (_numeric(a) and _numeric(b)):
                        raise SortMismatch(f"cannot compare {a} with {b}")
            return
        if isinstance(e, Arith):
            walk(e.lhs)
            walk(e.rhs)
            require_numeric(e.lhs, e.op)
            require_numeric(e.rhs, e.op)
            return
        if isinstance(e, (And, Or)):
            for item in e.items:
                walk(item)
                require_bool(item, type(e).__name__)
            return
        if isinstance(e, Not):
            walk(e.item)
            require_bool(e.item, "Not")
            return
        if isinstance(e, (Implies, Xor)):
            walk(e.lhs)
            walk(e.rhs)
            require_bool(e.lhs, type(e).__name__)
            require_bool(e.rhs, type(e).__name__)
            return
        if isinstance(e, Ite):
            walk(e.cond)
            walk(e.then)
            walk(e.other)
            require_bool(e.cond, "If")
            a, b = sort_of(e.then), sort_of(e.other)
            if a is not None and b is not None and a != b:
                if not (_numeric(a) and _numeric(b)):
                    raise SortMismatch(f"If branches disagree: {a} vs {b}")
            return
        if isinstance(e, Distinct):
            sorts = set()
            for item in e.items:
                walk(item)
                s = sort_of(item)
                if s is not None:
                    sorts.add(s)
            if len(sorts) > 1 and not all(_numeric(s) for s in sorts):
                raise SortMismatch(f"Distinct over mixed sorts: {sorts}")
            return
        if isinstance(e, SumList):
            for item in e.items:
                walk(item)
                require_numeric(item, "Sum")
            return
        if isinstance(e, (ForAll, Exists)):
            walk(e.body)
            require_bool(e.body, "quantifier body")
            return
        if isinstance(e, Comprehension):
            walk(e.template)
            return
        raise TypeError(f"not an expression: {e!r}")

    walk(expr)
