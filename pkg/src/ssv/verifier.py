"""Semantic verification of a program against concrete instantiations, plus
the well-formedness checks (structure, single answer, degenerate
constraints).

Each instantiation is checked against init plus its own constraint only:
a positive example must be jointly satisfiable with the constraint, a
negative one jointly unsatisfiable. Unknown solver results fail
conservatively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .dsl.ast import (
    And,
    ConstraintSegment,
    Exists,
    Expr,
    ForAll,
    Implies,
    InitSegment,
    Not,
    SegmentedProgram,
    scope_of_init,
)
from .dsl.rewrite import free_symbols, walk
from .solver.backend import AnswerOutcome, SolverBackend
from .status import Status


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class FailReason(str, Enum):
    POS_UNSAT = "pos_unsat"
    NEG_SAT = "neg_sat"
    ILL_FORMED_EXAMPLE = "ill_formed_example"
    TIMEOUT = "timeout"


class DegeneracyFlag(str, Enum):
    TAUTOLOGY = "tautology"
    CONTRADICTION = "contradiction"
    VACUOUS_IMPLICATION = "vacuous_implication"
    TIMEOUT_DEGENERATE = "timeout_degenerate"


@dataclass(frozen=True)
class Instantiation:
    """A concrete example for one constraint (or option, when enabled).

    ``expr`` is absent for NONE instantiations and for ill-formed code; the
    original code text is kept for repair prompts.
    """

    constraint_index: int
    polarity: Polarity
    description: str | None = None
    expr: Expr | None = None
    ill_formed: bool = False
    source_code: str | None = None
    target: str = "constraint"  # "constraint" | "option"

    @property
    def is_none(self) -> bool:
        return self.description is None and self.expr is None and not self.ill_formed


@dataclass(frozen=True)
class VerificationOutcome:
    passed: bool
    failing: Instantiation | None = None
    reason: FailReason | None = None
    checked: int = 0
    skipped: int = 0

    def to_obj(self) -> dict:
        obj = {"status": "pass" if self.passed else "fail",
               "checked": self.checked, "skipped": self.skipped}
        if self.failing is not None:
            obj["failing"] = {
                "constraint_index": self.failing.constraint_index,
                "polarity": self.failing.polarity.value,
                "description": self.failing.description,
                "code": self.failing.source_code,
                "target": self.failing.target,
            }
        if self.reason is not None:
            obj["reason"] = self.reason.value
        return obj


@dataclass(frozen=True)
class WellFormedReport:
    structure_ok: bool
    single_answer_ok: bool
    degenerate: tuple[tuple[int, DegeneracyFlag], ...] = ()

    @property
    def ok(self) -> bool:
        return self.structure_ok and self.single_answer_ok and not self.degenerate

    def to_obj(self) -> dict:
        return {
            "structure_ok": self.structure_ok,
            "single_answer_ok": self.single_answer_ok,
            "degenerate": [[i, flag.value] for i, flag in self.degenerate],
            "ok": self.ok,
        }

    def describe(self) -> str:
        problems = []
        if not self.structure_ok:
            problems.append("the program does not follow the required segment structure")
        if not self.single_answer_ok:
            problems.append("the option checks do not single out exactly one answer")
        for index, flag in self.degenerate:
            problems.append(f"constraint {index + 1} is degenerate ({flag.value})")
        return "; ".join(problems) if problems else "well-formed"


class Verifier:
    def __init__(self, backend: SolverBackend, budget_ms: float | None = None):
        self.backend = backend
        self.budget_ms = budget_ms

    # --- instantiation verification ---

    def verify_instantiations(self, program: SegmentedProgram,
                              instantiations: list[Instantiation]) -> VerificationOutcome:
        """First failing instantiation in (index, positive-first) order;
        NONE entries are skipped, ill-formed ones fail immediately."""
        for inst in instantiations:
            limit = len(program.options) if inst.target == "option" \
                else len(program.constraints)
            if not 0 <= inst.constraint_index < limit:
                raise ValueError(
                    f"instantiation references {inst.target} {inst.constraint_index} "
                    f"out of range")
        scope = scope_of_init(program.init)
        ordered = sorted(
            instantiations,
            key=lambda i: (0 if i.target == "constraint" else 1,
                           i.constraint_index,
                           0 if i.polarity is Polarity.POSITIVE else 1))
        checked = skipped = 0
        for inst in ordered:
            if inst.is_none:
                skipped += 1
                continue
            if inst.ill_formed or inst.expr is None:
                return VerificationOutcome(False, inst, FailReason.ILL_FORMED_EXAMPLE,
                                           checked, skipped)
            if free_symbols(inst.expr, scope):
                return VerificationOutcome(False, inst, FailReason.ILL_FORMED_EXAMPLE,
                                           checked, skipped)
            if inst.target == "option":
                context = [program.options[inst.constraint_index].check_expr]
            else:
                context = list(program.constraints[inst.constraint_index].exprs)
            result = self.backend.check_sat(program.init, context + [inst.expr],
                                            self.budget_ms)
            checked += 1
            if result.status is Status.UNKNOWN:
                return VerificationOutcome(False, inst, FailReason.TIMEOUT,
                                           checked, skipped)
            if inst.polarity is Polarity.POSITIVE and result.status is not Status.SAT:
                return VerificationOutcome(False, inst, FailReason.POS_UNSAT,
                                           checked, skipped)
            if inst.polarity is Polarity.NEGATIVE and result.status is not Status.UNSAT:
                return VerificationOutcome(False, inst, FailReason.NEG_SAT,
                                           checked, skipped)
        return VerificationOutcome(True, None, None, checked, skipped)

    # --- well-formedness ---

    def degeneracy_check(self, init: InitSegment,
                         constraint: ConstraintSegment) -> list[DegeneracyFlag]:
        """Tautology/contradiction relative to init, and vacuous universal
        implications; unknowns flag conservatively."""
        flags: list[DegeneracyFlag] = []
        conj = And(tuple(constraint.exprs))
        taut = self.backend.check_sat(init, [Not(conj)], self.budget_ms)
        if taut.status is Status.UNSAT:
            flags.append(DegeneracyFlag.TAUTOLOGY)
        contra = self.backend.check_sat(init, list(constraint.exprs), self.budget_ms)
        if contra.status is Status.UNSAT:
            flags.append(DegeneracyFlag.CONTRADICTION)
        unknown = taut.status is Status.UNKNOWN or contra.status is Status.UNKNOWN
        vacuous = False
        for expr in constraint.exprs:
            for node in walk(expr):
                if isinstance(node, ForAll) and isinstance(node.body, Implies):
                    witness = self.backend.check_sat(
                        init, [Exists(node.binders, node.body.lhs)], self.budget_ms)
                    if witness.status is Status.UNSAT:
                        vacuous = True
                    elif witness.status is Status.UNKNOWN:
                        unknown = True
        if vacuous:
            flags.append(DegeneracyFlag.VACUOUS_IMPLICATION)
        if unknown:
            flags.append(DegeneracyFlag.TIMEOUT_DEGENERATE)
        return flags

    def is_well_formed(self, program: SegmentedProgram,
                       answer_outcome: AnswerOutcome) -> WellFormedReport:
        structure_ok = (
            len(program.constraints) >= 1
            and len(program.options) >= 1
            and all(c.nl_text.strip() for c in program.constraints)
        )
        single_answer_ok = len(answer_outcome.passing) == 1
        degenerate: list[tuple[int, DegeneracyFlag]] = []
        for index, constraint in enumerate(program.constraints):
            for flag in self.degeneracy_check(program.init, constraint):
                degenerate.append((index, flag))
        return WellFormedReport(structure_ok, single_answer_ok, tuple(degenerate))
