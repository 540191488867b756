"""Constraint language: AST, parser, printer, and structural passes."""

from .ast import (
    BOOL,
    INT,
    And,
    Apply,
    Arith,
    Binder,
    BoolLit,
    BoolSort,
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
    IntSort,
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
    constraint_scope,
    scope_of_init,
    sort_of,
)
from .parser import (
    Fragment,
    parse_constraint_body,
    parse_expr,
    parse_fragment,
    parse_init_body,
    parse_program,
)
from .printer import (
    print_constraint_body,
    print_expr,
    print_init_body,
    print_program,
)
from .rewrite import (
    expand_comprehensions,
    free_symbols,
    ground_quantifiers,
    substitute,
    walk,
)
