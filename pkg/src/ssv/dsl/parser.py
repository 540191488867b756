"""Parser for the constraint language: expressions, segments, programs.

The surface form is line-oriented. Segment markers start with ``#``;
statements (declarations, ``assert``, ``check``) may continue across lines
while brackets remain open. Expressions use call syntax for connectives
(``And``, ``Or``, ``Not``, ``Implies``, ``Xor``, ``If``, ``Distinct``,
``Sum``, ``AtMost``, ``ForAll``, ``Exists``) and infix comparison/arithmetic
operators. ``Sum([e for x in xs])`` style comprehensions range over declared
finite collections, enum sorts, or literal integer ranges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import (
    ArityMismatch,
    DslSyntaxError,
    DuplicateOptionLabel,
    MissingSegment,
    SortMismatch,
    UnknownSymbol,
)
from ..tasks import OptionLabel
from .ast import (
    BOOL,
    INT,
    And,
    Apply,
    Arith,
    Binder,
    BoolLit,
    CheckType,
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
    Ite,
    Implies,
    Not,
    OpaqueSort,
    OptionSegment,
    Or,
    RangeDomain,
    Ref,
    Scope,
    SegmentedProgram,
    Sort,
    SumList,
    Xor,
    check_sorts,
    scope_of_init,
    sort_of,
)

KEYWORDS = {
    "enum", "int", "sort", "const", "fn", "list", "assert", "check",
    "for", "in", "range", "True", "False",
}
BUILTIN_CALLS = {
    "And", "Or", "Not", "Implies", "Xor", "If", "Distinct", "Sum",
    "AtMost", "ForAll", "Exists",
}
RESERVED = KEYWORDS | BUILTIN_CALLS

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|==|!=|<=|>=|[()\[\]{},:<>+\-=])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str  # "int" | "ident" | "op" | "eof"
    value: str
    line: int
    col: int


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    col = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.next()
        if tok.value != value:
            raise DslSyntaxError(f"expected {value!r}, got {tok.value or 'end of input'!r}",
                                 tok.line, tok.col)
        return tok

    def at(self, value: str) -> bool:
        return self.peek().value == value

    def error(self, message: str) -> DslSyntaxError:
        tok = self.peek()
        return DslSyntaxError(message, tok.line, tok.col)


class ExprParser:
    """Recursive-descent expression parser over a token stream.

    In lenient mode undeclared names become free refs instead of raising,
    which lets callers attach ill-formedness diagnostics to LLM output.
    """

    def __init__(self, stream: _TokenStream, scope: Scope, lenient: bool = False):
        self.stream = stream
        self.scope = scope
        self.lenient = lenient
        self.bound: list[dict[str, Sort]] = []

    # entry

    def parse(self) -> Expr:
        expr = self.comparison()
        return expr

    # precedence levels

    def comparison(self) -> Expr:
        lhs = self.additive()
        tok = self.stream.peek()
        if tok.value in ("==", "!=", "<", "<=", ">", ">="):
            self.stream.next()
            rhs = self.additive()
            return self._normalize_bool_compare(tok.value, lhs, rhs)
        return lhs

    def _normalize_bool_compare(self, op: str, lhs: Expr, rhs: Expr) -> Expr:
        # `t == True` and friends collapse to the boolean term itself.
        if op in ("==", "!="):
            for a, b in ((lhs, rhs), (rhs, lhs)):
                if isinstance(b, BoolLit) and isinstance(sort_of(a), type(BOOL)):
                    positive = b.value == (op == "==")
                    return a if positive else Not(a)
        return Compare(op, lhs, rhs)

    def additive(self) -> Expr:
        lhs = self.unary()
        while self.stream.peek().value in ("+", "-"):
            op = self.stream.next().value
            rhs = self.unary()
            lhs = Arith(op, lhs, rhs)
        return lhs

    def unary(self) -> Expr:
        if self.stream.at("-"):
            tok = self.stream.next()
            operand = self.unary()
            if isinstance(operand, IntLit):
                return IntLit(-operand.value)
            return Arith("-", IntLit(0), operand)
        return self.atom()

    def atom(self) -> Expr:
        tok = self.stream.peek()
        if tok.kind == "int":
            self.stream.next()
            return IntLit(int(tok.value))
        if tok.value == "(":
            self.stream.next()
            inner = self.parse()
            self.stream.expect(")")
            return inner
        if tok.kind == "ident":
            return self.ident_or_call()
        raise self.stream.error(f"unexpected token {tok.value!r} in expression")

    def ident_or_call(self) -> Expr:
        tok = self.stream.next()
        name = tok.value
        if name == "True":
            return BoolLit(True)
        if name == "False":
            return BoolLit(False)
        if name in BUILTIN_CALLS:
            self.stream.expect("(")
            return self.builtin_call(name, tok)
        if self.stream.at("("):
            self.stream.next()
            args = []
            if not self.stream.at(")"):
                args.append(self.parse())
                while self.stream.at(","):
                    self.stream.next()
                    args.append(self.parse())
            self.stream.expect(")")
            decl = self.scope.fn(name)
            if decl is None:
                if not self.lenient:
                    raise UnknownSymbol(name, tok.line)
                return Apply(name, tuple(args), None)
            if len(args) != len(decl.arg_sorts):
                raise ArityMismatch(
                    f"{name} takes {len(decl.arg_sorts)} argument(s), got {len(args)}"
                )
            return Apply(name, tuple(args), decl)
        return self.name_ref(name, tok)

    def name_ref(self, name: str, tok: Token) -> Expr:
        for frame in reversed(self.bound):
            if name in frame:
                return Ref(name, "bound", frame[name])
        member = self.scope.member(name)
        if member is not None:
            return Ref(name, "member", member[0])
        const = self.scope.const(name)
        if const is not None:
            return Ref(name, "const", const.sort)
        entry = self.scope.resolve(name)
        if entry is not None:
            raise self.stream.error(f"'{name}' is not usable as a value here")
        if not self.lenient:
            raise UnknownSymbol(name, tok.line)
        return Ref(name, "free", None)

    # builtin forms

    def builtin_call(self, name: str, tok: Token) -> Expr:
        if name in ("ForAll", "Exists"):
            return self.quantifier(name)
        if name == "Not":
            arg = self.parse()
            self.stream.expect(")")
            return Not(arg)
        if name in ("Implies", "Xor"):
            a = self.parse()
            self.stream.expect(",")
            b = self.parse()
            self.stream.expect(")")
            return Implies(a, b) if name == "Implies" else Xor(a, b)
        if name == "If":
            c = self.parse()
            self.stream.expect(",")
            a = self.parse()
            self.stream.expect(",")
            b = self.parse()
            self.stream.expect(")")
            return Ite(c, a, b)
        # list-splicing forms
        items = self.call_items()
        if name == "And":
            return And(tuple(items))
        if name == "Or":
            return Or(tuple(items))
        if name == "Distinct":
            return Distinct(tuple(items))
        if name == "Sum":
            return SumList(tuple(items))
        if name == "AtMost":
            if not items:
                raise self.stream.error("AtMost needs at least a bound argument")
            bound = items[-1]
            return Compare("<=", SumList(tuple(items[:-1])), bound)
        raise self.stream.error(f"unhandled builtin {name}")  # pragma: no cover

    def call_items(self) -> list[Expr]:
        """Arguments of a list-accepting builtin; list literals and
        comprehensions are spliced into one item sequence."""
        items: list[Expr] = []
        if self.stream.at(")"):
            self.stream.next()
            return items
        while True:
            if self.stream.at("["):
                items.extend(self.list_argument())
            else:
                items.append(self.parse())
            if self.stream.at(","):
                self.stream.next()
                continue
            self.stream.expect(")")
            return items

    def list_argument(self) -> list[Expr]:
        """A ``[...]`` argument: explicit list or comprehension."""
        self.stream.expect("[")
        if self.stream.at("]"):
            self.stream.next()
            return []
        # Look ahead for a top-level `for` to detect a comprehension.
        depth = 0
        is_comprehension = False
        pos = self.stream.pos
        while True:
            tok = self.stream.tokens[pos]
            if tok.kind == "eof":
                break
            if tok.value in ("(", "["):
                depth += 1
            elif tok.value in (")", "]"):
                if depth == 0:
                    break
                depth -= 1
            elif tok.value == "for" and depth == 0:
                is_comprehension = True
                break
            pos += 1
        if is_comprehension:
            return [self.comprehension()]
        items = [self.parse()]
        while self.stream.at(","):
            self.stream.next()
            items.append(self.parse())
        self.stream.expect("]")
        return items

    def comprehension(self) -> Expr:
        # Binders come after the template textually, so scan them first.
        start = self.stream.pos
        depth = 0
        for_positions: list[int] = []
        end = start
        while True:
            tok = self.stream.tokens[end]
            if tok.kind == "eof":
                raise self.stream.error("unterminated comprehension")
            if tok.value in ("(", "["):
                depth += 1
            elif tok.value in (")", "]"):
                if depth == 0:
                    break
                depth -= 1
            elif tok.value == "for" and depth == 0:
                for_positions.append(end)
            end += 1
        binders: list[CompBinder] = []
        saved = self.stream.pos
        self.stream.pos = for_positions[0]
        while self.stream.at("for"):
            binders.append(self.comp_binder())
        if self.stream.pos != end:
            raise self.stream.error("malformed comprehension clauses")
        frame = {b.name: b.element_sort for b in binders}
        self.bound.append(frame)
        try:
            self.stream.pos = saved
            template = self.parse()
            if self.stream.pos != for_positions[0]:
                raise self.stream.error("malformed comprehension template")
        finally:
            self.bound.pop()
        self.stream.pos = end
        self.stream.expect("]")
        return Comprehension(template, tuple(binders))

    def comp_binder(self) -> CompBinder:
        self.stream.expect("for")
        name_tok = self.stream.next()
        if name_tok.kind != "ident" or name_tok.value in RESERVED:
            raise DslSyntaxError("expected binder name", name_tok.line, name_tok.col)
        self.stream.expect("in")
        dom_tok = self.stream.next()
        if dom_tok.value == "range":
            self.stream.expect("(")
            lo = self._int_literal()
            self.stream.expect(",")
            hi = self._int_literal()
            self.stream.expect(")")
            rng = RangeDomain(lo, hi)
            elements = tuple(IntLit(v) for v in rng.values)
            return CompBinder(name_tok.value, "range", elements, INT, rng)
        if dom_tok.kind != "ident":
            raise DslSyntaxError("expected collection name or range(lo, hi)",
                                 dom_tok.line, dom_tok.col)
        entry = self.scope.resolve(dom_tok.value)
        if isinstance(entry, EnumSort):
            elements = tuple(Ref(m, "member", entry) for m in entry.members)
            return CompBinder(name_tok.value, dom_tok.value, elements, entry)
        if isinstance(entry, Collection):
            return CompBinder(
                name_tok.value, dom_tok.value, entry.elements,
                entry.element_sort, entry.range_domain,
            )
        from ..errors import UnboundedComprehension

        raise UnboundedComprehension(
            f"'{dom_tok.value}' is not a finite collection, enum, or range"
        )

    def quantifier(self, name: str) -> Expr:
        self.stream.expect("[")
        binders: list[Binder] = []
        while True:
            name_tok = self.stream.next()
            if name_tok.kind != "ident" or name_tok.value in RESERVED:
                raise DslSyntaxError("expected binder name", name_tok.line, name_tok.col)
            if not self.stream.at(":"):
                raise DslSyntaxError(
                    f"quantifier binder '{name_tok.value}' needs a sort annotation, "
                    f"e.g. {name}([{name_tok.value}: <sort>], ...)",
                    name_tok.line, name_tok.col,
                )
            self.stream.next()
            sort_tok = self.stream.next()
            sort = self._binder_sort(sort_tok)
            binders.append(Binder(name_tok.value, sort))
            if self.stream.at(","):
                self.stream.next()
                continue
            self.stream.expect("]")
            break
        self.stream.expect(",")
        self.bound.append({b.name: b.sort for b in binders})
        try:
            body = self.parse()
        finally:
            self.bound.pop()
        self.stream.expect(")")
        cls = ForAll if name == "ForAll" else Exists
        return cls(tuple(binders), body)

    def _binder_sort(self, tok: Token) -> Sort:
        if tok.value == "int":
            return INT
        if tok.value == "bool":
            return BOOL
        sort = self.scope.sort(tok.value)
        if sort is None:
            raise UnknownSymbol(tok.value, tok.line)
        return sort

    def _int_literal(self) -> int:
        neg = False
        if self.stream.at("-"):
            self.stream.next()
            neg = True
        tok = self.stream.next()
        if tok.kind != "int":
            raise DslSyntaxError("expected integer literal", tok.line, tok.col)
        return -int(tok.value) if neg else int(tok.value)


def parse_expr(source: str, scope: Scope, lenient: bool = False, line: int = 1) -> Expr:
    """Parse one expression in the given scope.

    Strict mode raises UnknownSymbol/ArityMismatch/SortMismatch; lenient mode
    keeps undeclared names as free refs and skips checks they would block.
    """
    stream = _TokenStream(tokenize(source, line))
    parser = ExprParser(stream, scope, lenient=lenient)
    expr = parser.parse()
    tok = stream.peek()
    if tok.kind != "eof":
        raise DslSyntaxError(f"trailing input {tok.value!r}", tok.line, tok.col)
    check_sorts(expr)
    return expr


# --- statements and segments ---


_MARKER_INIT = re.compile(r"#INIT\s*(?::\s*(.*))?$")
_MARKER_CONSTRAINT = re.compile(r"#CONSTRAINT\s*:\s*(.*)$")
_MARKER_OPTION = re.compile(r"#OPTION\s+\(?([A-Ga-g])\)?\s*(sat|unsat|valid|SAT|UNSAT|VALID)?\s*:\s*(.*)$")
_MARKER_CHECKTYPE = re.compile(r"#CHECKTYPE\s*:\s*(\w+)\s*(.*)$")


@dataclass
class _Marker:
    kind: str  # "init" | "constraint" | "option" | "checktype"
    nl: str
    line: int
    label: OptionLabel | None = None
    check_type: CheckType | None = None


@dataclass
class _Statement:
    text: str
    line: int


@dataclass
class _Segment:
    marker: _Marker
    statements: list[_Statement] = field(default_factory=list)


def _bracket_delta(text: str) -> int:
    return sum(text.count(c) for c in "([{") - sum(text.count(c) for c in ")]}")


def _scan_segments(source: str) -> list[_Segment]:
    segments: list[_Segment] = []
    pending: list[str] = []
    pending_line = 0
    depth = 0

    def flush():
        nonlocal pending, depth
        if pending:
            text = "\n".join(pending)
            if depth != 0:
                raise DslSyntaxError("unbalanced brackets in statement", pending_line, 1)
            if not segments:
                raise DslSyntaxError("statement before any segment marker", pending_line, 1)
            segments[-1].statements.append(_Statement(text, pending_line))
            pending = []

    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.strip()
        if depth > 0:
            pending.append(line)
            depth += _bracket_delta(line)
            if depth == 0:
                flush()
            continue
        if not stripped:
            continue
        if stripped.startswith("#"):
            flush()
            segments.append(_Segment(_parse_marker(stripped, line_no)))
            continue
        pending = [line]
        pending_line = line_no
        depth = _bracket_delta(line)
        if depth == 0:
            flush()
        elif depth < 0:
            raise DslSyntaxError("unbalanced brackets", line_no, 1)
    flush()
    if depth != 0:
        raise DslSyntaxError("unbalanced brackets at end of input", pending_line, 1)
    return segments


def _parse_marker(line: str, line_no: int) -> _Marker:
    m = _MARKER_INIT.match(line)
    if m:
        return _Marker("init", (m.group(1) or "").strip(), line_no)
    m = _MARKER_CONSTRAINT.match(line)
    if m:
        nl = m.group(1).strip()
        if not nl:
            raise DslSyntaxError("#CONSTRAINT needs a natural-language annotation",
                                 line_no, 1)
        return _Marker("constraint", nl, line_no)
    m = _MARKER_OPTION.match(line)
    if m:
        label = OptionLabel(m.group(1).upper())
        check = CheckType(m.group(2).lower()) if m.group(2) else None
        return _Marker("option", m.group(3).strip(), line_no, label=label,
                       check_type=check)
    m = _MARKER_CHECKTYPE.match(line)
    if m:
        word = m.group(1).lower()
        if word not in ("sat", "unsat", "valid"):
            raise DslSyntaxError(f"unknown check type {word!r}", line_no, 1)
        return _Marker("checktype", m.group(2).strip(), line_no,
                       check_type=CheckType(word))
    raise DslSyntaxError(f"unrecognized marker line: {line}", line_no, 1)


class _SegmentBodyParser:
    """Parses declarations and assert/check statements of one segment."""

    def __init__(self, scope: Scope, global_scope: Scope):
        self.scope = scope
        self.global_scope = global_scope

    def parse_statement(self, stmt: _Statement):
        tokens = tokenize(stmt.text, stmt.line)
        stream = _TokenStream(tokens)
        head = stream.peek()
        if head.kind != "ident":
            raise DslSyntaxError(f"expected a statement, got {head.value!r}",
                                 head.line, head.col)
        kind = head.value
        if kind == "enum":
            return self._enum(stream)
        if kind == "sort":
            return self._opaque(stream)
        if kind == "int":
            return self._int_const(stream)
        if kind == "const":
            return self._const(stream)
        if kind == "fn":
            return self._fn(stream)
        if kind == "list":
            return self._list(stream)
        if kind in ("assert", "check"):
            stream.next()
            parser = ExprParser(stream, self.scope)
            expr = parser.parse()
            tok = stream.peek()
            if tok.kind != "eof":
                raise DslSyntaxError(f"trailing input {tok.value!r}", tok.line, tok.col)
            check_sorts(expr)
            s = sort_of(expr)
            if s is not None and s != BOOL:
                raise SortMismatch(f"{kind} expects a boolean expression, got {s}")
            return (kind, expr)
        raise DslSyntaxError(f"unknown statement {kind!r}", head.line, head.col)

    def _name(self, stream: _TokenStream) -> str:
        tok = stream.next()
        if tok.kind != "ident" or tok.value in RESERVED:
            raise DslSyntaxError(f"expected a fresh name, got {tok.value!r}",
                                 tok.line, tok.col)
        return tok.value

    def _sort_name(self, stream: _TokenStream) -> Sort:
        tok = stream.next()
        if tok.value == "bool":
            return BOOL
        if tok.value == "int":
            return INT
        sort = self.scope.sort(tok.value)
        if sort is None:
            raise UnknownSymbol(tok.value, tok.line)
        return sort

    def _enum(self, stream: _TokenStream):
        stream.expect("enum")
        name = self._name(stream)
        stream.expect("{")
        members = [self._name(stream)]
        while stream.at(","):
            stream.next()
            members.append(self._name(stream))
        stream.expect("}")
        if len(set(members)) != len(members):
            raise SortMismatch(f"enum {name}: duplicate members")
        sort = EnumSort(name, tuple(members))
        self.scope.add_sort(sort)
        return ("sortdecl", sort)

    def _opaque(self, stream: _TokenStream):
        stream.expect("sort")
        name = self._name(stream)
        sort = OpaqueSort(name)
        self.scope.add_sort(sort)
        return ("sortdecl", sort)

    def _int_const(self, stream: _TokenStream):
        stream.expect("int")
        name = self._name(stream)
        decl = ConstDecl(name, INT)
        self.scope.declare(name, decl)
        return ("decl", decl)

    def _const(self, stream: _TokenStream):
        stream.expect("const")
        name = self._name(stream)
        stream.expect(":")
        sort = self._sort_name(stream)
        decl = ConstDecl(name, sort)
        self.scope.declare(name, decl)
        return ("decl", decl)

    def _fn(self, stream: _TokenStream):
        stream.expect("fn")
        name = self._name(stream)
        stream.expect("(")
        args = [self._sort_name(stream)]
        while stream.at(","):
            stream.next()
            args.append(self._sort_name(stream))
        stream.expect(")")
        stream.expect("->")
        result = self._sort_name(stream)
        decl = FnDecl(name, tuple(args), result)
        self.scope.declare(name, decl)
        return ("decl", decl)

    def _list(self, stream: _TokenStream):
        stream.expect("list")
        name = self._name(stream)
        stream.expect("=")
        if stream.at("range"):
            stream.next()
            stream.expect("(")
            parser = ExprParser(stream, self.scope)
            lo = parser._int_literal()
            stream.expect(",")
            hi = parser._int_literal()
            stream.expect(")")
            rng = RangeDomain(lo, hi)
            coll = Collection(name, INT, tuple(IntLit(v) for v in rng.values), rng)
            self.scope.declare(name, coll)
            return ("decl", coll)
        stream.expect("[")
        parser = ExprParser(stream, self.scope)
        elements: list[Expr] = []
        if not stream.at("]"):
            elements.append(parser.atom())
            while stream.at(","):
                stream.next()
                elements.append(parser.atom())
        stream.expect("]")
        sorts = {sort_of(e) for e in elements}
        if len(sorts) > 1:
            raise SortMismatch(f"list {name}: mixed element sorts {sorts}")
        element_sort = sorts.pop() if sorts else INT
        coll = Collection(name, element_sort, tuple(elements))
        self.scope.declare(name, coll)
        return ("decl", coll)


@dataclass
class Fragment:
    """A parsed partial program, as produced by incremental generation."""

    init: InitSegment | None
    constraints: list[ConstraintSegment]
    options: list[OptionSegment]
    default_check_type: CheckType | None
    scope: Scope


def _parse_segments(segments: list[_Segment], base_scope: Scope | None) -> Fragment:
    init: InitSegment | None = None
    constraints: list[ConstraintSegment] = []
    options: list[OptionSegment] = []
    default_check: CheckType | None = None
    scope = base_scope if base_scope is not None else Scope()
    seen_option = False
    seen_constraint = False

    for segment in segments:
        marker = segment.marker
        if marker.kind == "checktype":
            default_check = marker.check_type
            if segment.statements:
                raise DslSyntaxError("#CHECKTYPE carries no statements",
                                     marker.line, 1)
            continue
        if marker.kind == "init":
            if init is not None or seen_constraint or seen_option:
                raise DslSyntaxError("#INIT must come first and appear once",
                                     marker.line, 1)
            if base_scope is not None and base_scope.entries:
                raise DslSyntaxError("#INIT not allowed with a preset scope",
                                     marker.line, 1)
            body = _SegmentBodyParser(scope, scope)
            sorts: list[Sort] = []
            decls = []
            preconditions = []
            for stmt in segment.statements:
                kind, value = body.parse_statement(stmt)
                if kind == "sortdecl":
                    sorts.append(value)
                elif kind == "decl":
                    decls.append(value)
                elif kind == "assert":
                    preconditions.append(value)
                else:
                    raise DslSyntaxError("'check' is only valid in option segments",
                                         stmt.line, 1)
            init = InitSegment(marker.nl, tuple(sorts), tuple(decls),
                               tuple(preconditions))
            continue
        if marker.kind == "constraint":
            if seen_option:
                raise DslSyntaxError("constraints must precede options", marker.line, 1)
            seen_constraint = True
            local = scope.child()
            body = _SegmentBodyParser(local, scope)
            local_decls = []
            exprs = []
            for stmt in segment.statements:
                kind, value = body.parse_statement(stmt)
                if kind in ("decl", "sortdecl"):
                    local_decls.append(value)
                elif kind == "assert":
                    exprs.append(value)
                else:
                    raise DslSyntaxError("'check' is only valid in option segments",
                                         stmt.line, 1)
            constraints.append(ConstraintSegment(marker.nl, tuple(local_decls),
                                                 tuple(exprs)))
            continue
        if marker.kind == "option":
            seen_option = True
            local = scope.child()
            body = _SegmentBodyParser(local, scope)
            local_decls = []
            check_expr: Expr | None = None
            for stmt in segment.statements:
                kind, value = body.parse_statement(stmt)
                if kind in ("decl", "sortdecl"):
                    local_decls.append(value)
                elif kind == "check":
                    if check_expr is not None:
                        raise DslSyntaxError("option has more than one check",
                                             stmt.line, 1)
                    check_expr = value
                else:
                    raise DslSyntaxError("'assert' is only valid in init/constraints",
                                         stmt.line, 1)
            if check_expr is None:
                raise DslSyntaxError(
                    f"option {marker.label} has no check statement", marker.line, 1)
            options.append(OptionSegment(
                marker.label, marker.nl,
                marker.check_type or default_check or CheckType.SAT,
                check_expr, tuple(local_decls),
            ))
            continue
        raise AssertionError(marker.kind)  # pragma: no cover

    return Fragment(init, constraints, options, default_check, scope)


def parse_fragment(source: str, base_scope: Scope | None = None) -> Fragment:
    """Parse an init/constraint/option fragment.

    When ``base_scope`` is given, the fragment may reference its symbols and
    must not re-declare an init segment.
    """
    return _parse_segments(_scan_segments(source), base_scope)


def parse_program(source: str) -> SegmentedProgram:
    """Parse a complete segmented program.

    Raises MissingSegment when init, constraints, or options are absent,
    DuplicateOptionLabel on repeated labels, and syntax/sort errors with
    source positions.
    """
    fragment = _parse_segments(_scan_segments(source), None)
    if fragment.init is None:
        raise MissingSegment("init")
    if not fragment.constraints:
        raise MissingSegment("constraint")
    if not fragment.options:
        raise MissingSegment("option")
    labels = [o.label for o in fragment.options]
    if len(set(labels)) != len(labels):
        raise DuplicateOptionLabel(
            f"duplicate option labels: {[l.value for l in labels]}")
    return SegmentedProgram(fragment.init, tuple(fragment.constraints),
                            tuple(fragment.options))


def parse_init_body(code: str, nl_context: str) -> InitSegment:
    """Parse init-section statements (no marker line) into an InitSegment."""
    source = f"#INIT: {nl_context}\n{code}" if nl_context else f"#INIT\n{code}"
    fragment = parse_fragment(source)
    if fragment.init is None:  # pragma: no cover - marker always present
        raise MissingSegment("init")
    return fragment.init


def parse_constraint_body(code: str, init_scope: Scope, nl_text: str) -> ConstraintSegment:
    """Parse constraint-section statements against an init scope."""
    source = f"#CONSTRAINT: {nl_text}\n{code}"
    fragment = parse_fragment(source, base_scope=init_scope)
    if len(fragment.constraints) != 1 or fragment.options or fragment.init:
        raise DslSyntaxError("expected exactly one constraint body", 1, 1)
    return fragment.constraints[0]
