"""End-to-end orchestration: program generation with error refinement and a
compositional fallback, the verify-and-repair inner loop per temperature,
and chain-of-thought fallback when no program is obtained.

The inner loop follows the published control flow; whether repair runs on
any verification failure or only when no answer was produced is the
``repair_policy`` switch (default: any verification failure).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .dsl.ast import OptionSegment, SegmentedProgram
from .dsl.parser import parse_program
from .dsl.printer import (
    print_constraint_body,
    print_expr,
    print_init_body,
    print_program,
)
from .errors import ConfigError, DslError, FormatError, GatewayError
from .llm.gateway import LlmGateway, LlmRequest, PromptKind
from .llm.parsers import (
    extract_answer_label,
    parse_decomposition,
    parse_instantiations,
    parse_refined_program,
    parse_repair_patch,
    strip_fences,
)
from .llm.prompts import format_options, format_task, render_prompt
from .solver.backend import SolverBackend
from .tasks import OptionLabel, ReasoningTask, normalize_label
from .verifier import Instantiation, Polarity, Verifier, WellFormedReport

log = logging.getLogger(__name__)

MAX_DECOMPOSED_CONSTRAINTS = 32


@dataclass(frozen=True)
class SsvConfig:
    temperatures: tuple[float, ...] = (0.0, 0.3, 0.4, 0.5)
    max_repairs: int = 2
    max_error_refines: int = 2
    check_timeout_ms: float = 10_000.0
    grounding_bound: int = 4096
    model: str = "gpt-4"
    provider: str = "replay"  # replay | record | live
    transcripts_path: str | None = None
    endpoint: str | None = None
    max_tokens: int = 4096
    repair_policy: str = "on_verification_failure"  # | on_missing_answer
    verify_option_instantiations: bool = False
    solver_cmd: tuple[str, ...] | None = None
    solver_cache_path: str | None = None
    parallelism: int | None = None

    def __post_init__(self):
        if not self.temperatures:
            raise ConfigError("temperatures must be non-empty")
        if any(not 0.0 <= t <= 1.0 for t in self.temperatures):
            raise ConfigError("temperatures must lie in [0, 1]")
        if self.max_repairs < 0 or self.max_error_refines < 0:
            raise ConfigError("repair/refine counts must be non-negative")
        if self.repair_policy not in ("on_verification_failure", "on_missing_answer"):
            raise ConfigError(f"unknown repair_policy {self.repair_policy!r}")
        if self.provider not in ("replay", "record", "live"):
            raise ConfigError(f"unknown provider {self.provider!r}")

    @classmethod
    def from_obj(cls, obj: dict) -> "SsvConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(obj)
        if "temperatures" in kwargs:
            kwargs["temperatures"] = tuple(float(t) for t in kwargs["temperatures"])
        if "solver_cmd" in kwargs and kwargs["solver_cmd"] is not None:
            kwargs["solver_cmd"] = tuple(kwargs["solver_cmd"])
        return cls(**kwargs)

    def to_obj(self) -> dict:
        return {
            "temperatures": list(self.temperatures),
            "max_repairs": self.max_repairs,
            "max_error_refines": self.max_error_refines,
            "check_timeout_ms": self.check_timeout_ms,
            "grounding_bound": self.grounding_bound,
            "model": self.model,
            "provider": self.provider,
            "transcripts_path": self.transcripts_path,
            "endpoint": self.endpoint,
            "max_tokens": self.max_tokens,
            "repair_policy": self.repair_policy,
            "verify_option_instantiations": self.verify_option_instantiations,
            "solver_cmd": list(self.solver_cmd) if self.solver_cmd else None,
            "solver_cache_path": self.solver_cache_path,
            "parallelism": self.parallelism,
        }

    def call_budget(self) -> int:
        """Hard per-task bound on LLM calls."""
        gen_budget = 1 + self.max_error_refines + 2 + MAX_DECOMPOSED_CONSTRAINTS
        per_temp = gen_budget + (1 + self.max_repairs) + self.max_repairs
        return len(self.temperatures) * per_temp + 1


@dataclass
class AttemptLog:
    temperature: float
    repair_round: int
    answer: str | None
    passing: list[str]
    verification: dict
    well_formed: dict


@dataclass
class SsvTrace:
    temperature_used: float | None = None
    repairs_used: int = 0
    used_fallback: bool = False
    attempts: list[AttemptLog] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    llm_calls: int = 0
    program_text: str | None = None

    def to_obj(self) -> dict:
        return {
            "temperature_used": self.temperature_used,
            "repairs_used": self.repairs_used,
            "used_fallback": self.used_fallback,
            "llm_calls": self.llm_calls,
            "notes": list(self.notes),
            "attempts": [
                {
                    "temperature": a.temperature,
                    "repair_round": a.repair_round,
                    "answer": a.answer,
                    "passing": a.passing,
                    "verification": a.verification,
                    "well_formed": a.well_formed,
                }
                for a in self.attempts
            ],
            "program": self.program_text,
        }


@dataclass
class SsvResult:
    answer: OptionLabel | None
    verified: bool
    trace: SsvTrace

    def __post_init__(self):
        if self.verified and self.answer is None:
            raise ValueError("a verified result must carry an answer")
        if self.trace.used_fallback and self.verified:
            raise ValueError("fallback answers are never verified")

    def to_obj(self) -> dict:
        return {
            "answer": self.answer.value if self.answer else None,
            "verified": self.verified,
            "trace": self.trace.to_obj(),
        }


class BudgetExhausted(GatewayError):
    pass


class SsvPipeline:
    def __init__(self, gateway: LlmGateway, backend: SolverBackend,
                 config: SsvConfig):
        self.gateway = gateway
        self.backend = backend
        self.config = config
        self.verifier = Verifier(backend)
        self._calls_used = 0
        self._call_cap = 0

    # --- LLM plumbing ---

    def _call(self, kind: PromptKind, temperature: float, **slots) -> str:
        if self._calls_used >= self._call_cap:
            raise BudgetExhausted(
                f"per-task LLM call budget of {self._call_cap} exhausted")
        self._calls_used += 1
        request = LlmRequest(
            kind=kind,
            prompt=render_prompt(kind, **slots),
            model=self.config.model,
            temperature=temperature,
            max_tokens=self.config.max_tokens,
        )
        return self.gateway.complete(request)

    # --- program generation ---

    def _try_parse(self, text: str, task: ReasoningTask):
        """(program, None) on success, (None, error text) on failure."""
        try:
            program = parse_program(strip_fences(text))
        except DslError as exc:
            return None, str(exc)
        task_labels = set(task.labels)
        bad = [o.label.value for o in program.options if o.label not in task_labels]
        if bad:
            return None, f"option labels {bad} do not appear in the task"
        return program, None

    def gen_program(self, task: ReasoningTask,
                    temperature: float) -> SegmentedProgram | None:
        """Direct prompt, then error refinement, then the compositional
        path; None when every route fails. Gateway errors propagate."""
        problem = format_task(task)
        text = self._call(PromptKind.DIRECT_PROGRAM, temperature, problem=problem)
        program, error = self._try_parse(text, task)
        if program is not None:
            return program
        program_text = strip_fences(text)
        for _ in range(self.config.max_error_refines):
            response = self._call(PromptKind.ERROR_REFINE, temperature,
                                  existing_program=program_text,
                                  error_message=error)
            try:
                program_text = parse_refined_program(response)
            except FormatError:
                break
            program, error = self._try_parse(program_text, task)
            if program is not None:
                return program
        return self._compositional(task, temperature)

    def _compositional(self, task: ReasoningTask,
                       temperature: float) -> SegmentedProgram | None:
        problem = format_task(task)
        try:
            context, constraint_nls = parse_decomposition(
                self._call(PromptKind.DECOMPOSE, temperature, problem=problem))
        except FormatError:
            return None
        if len(constraint_nls) > MAX_DECOMPOSED_CONSTRAINTS:
            return None
        program_text = f"#INIT: {context}" if context else "#INIT:"
        for nl in constraint_nls:
            try:
                response = self._call(PromptKind.INCREMENTAL_CONSTRAINT, temperature,
                                      existing_program=program_text,
                                      new_constraint=nl)
            except BudgetExhausted:
                return None
            fragment = strip_fences(response).strip()
            if "#CONSTRAINT" not in fragment and "#INIT" not in fragment:
                fragment = f"#CONSTRAINT: {nl}\n{fragment}"
            program_text = f"{program_text}\n\n{fragment}"
        options_resp = self._call(PromptKind.OPTIONS_CODE, temperature,
                                  problem=context or task.context,
                                  existing_program=program_text,
                                  question=task.question,
                                  options=format_options(task))
        program_text = f"{program_text}\n\n{strip_fences(options_resp).strip()}"
        program, _error = self._try_parse(program_text, task)
        return program

    # --- instantiations ---

    def gen_instantiations(self, program: SegmentedProgram,
                           temperature: float) -> list[Instantiation]:
        """Two entries (possibly NONE) per constraint; an unparseable
        response degrades to an empty suite."""
        nls = [c.nl_text for c in program.constraints]
        if self.config.verify_option_instantiations:
            nls.extend(o.nl_check for o in program.options)
        response = self._call(
            PromptKind.INSTANTIATIONS, temperature,
            scenario=program.init.nl_context or "None",
            initialization_code=print_init_body(program.init),
            constraints="\n###\n".join(nls),
        )
        try:
            return parse_instantiations(
                response, program,
                include_options=self.config.verify_option_instantiations)
        except FormatError as exc:
            log.warning("instantiation response rejected: %s", exc)
            return []

    # --- repair ---

    def repair_program(self, task: ReasoningTask, program: SegmentedProgram,
                       failing: Instantiation | None,
                       report: WellFormedReport | None,
                       temperature: float) -> SegmentedProgram | None:
        """Patch the implicated segment from a repair response; None when
        the patch is unusable or the result does not re-elaborate."""
        if failing is not None:
            index = failing.constraint_index
            target = failing.target
            if target == "option":
                segment = program.options[index]
                description = segment.nl_check
                code = _option_body(segment)
            else:
                segment = program.constraints[index]
                description = segment.nl_text
                code = print_constraint_body(segment)
            example_code = failing.source_code or "pass"
            if failing.polarity is Polarity.NEGATIVE:
                header = "NegativeExampleCode"
                sentence = ("We are also given some code that should implement a "
                            "negative example to the constraint, which should be "
                            "unsatisfiable under that constraint, but it is "
                            "satisfiable.")
            else:
                header = "PositiveExampleCode"
                sentence = ("We are also given some code that should implement a "
                            "positive example to the constraint, which should be "
                            "satisfiable under that constraint, but it is not.")
        else:
            degenerate = report.degenerate if report else ()
            index = degenerate[0][0] if degenerate else 0
            target = "constraint"
            segment = program.constraints[index]
            description = segment.nl_text
            code = print_constraint_body(segment)
            example_code = (report.describe() if report
                            else "the program failed a well-formedness check")
            header = "PositiveExampleCode"
            sentence = ("Instead of a failing concrete example, the program "
                        "failed a general well-formedness check, described "
                        "below in place of the example code.")
        try:
            response = self._call(
                PromptKind.SEMANTIC_REPAIR, temperature,
                scenario=program.init.nl_context or "None",
                initial_code=print_init_body(program.init),
                constraint_description=description,
                constraint_code=code,
                example_code=example_code,
                example_header=header,
                failure_sentence=sentence,
            )
            patch = parse_repair_patch(response)
        except FormatError:
            return None
        if not patch.usable:
            return None
        return self._apply_patch(program, patch, index, target)

    def _apply_patch(self, program: SegmentedProgram, patch, index: int,
                     target: str) -> SegmentedProgram | None:
        marker = (f"#INIT: {program.init.nl_context}"
                  if program.init.nl_context else "#INIT:")
        init_body = patch.init_code or print_init_body(program.init)
        pieces = [f"{marker}\n{init_body}"]
        for i, constraint in enumerate(program.constraints):
            if target == "constraint" and i == index and patch.constraint_code:
                body = strip_fences(patch.constraint_code).strip()
                body = _strip_segment_marker(body, "#CONSTRAINT")
            else:
                body = print_constraint_body(constraint)
            pieces.append(f"#CONSTRAINT: {constraint.nl_text}\n{body}")
        for i, option in enumerate(program.options):
            head = (f"#OPTION {option.label} {option.check_type.value}: "
                    f"{option.nl_check}")
            if target == "option" and i == index and patch.constraint_code:
                body = strip_fences(patch.constraint_code).strip()
                body = _strip_segment_marker(body, "#OPTION")
            else:
                body = _option_body(option)
            pieces.append(f"{head}\n{body}")
        try:
            return parse_program("\n\n".join(pieces) + "\n")
        except DslError:
            return None

    # --- fallback ---

    def infer_fallback_answer(self, task: ReasoningTask) -> OptionLabel | None:
        """Direct chain-of-thought answer; never verified."""
        response = self._call(PromptKind.COT_FALLBACK, self.config.temperatures[0],
                              problem=format_task(task))
        letter = extract_answer_label(response)
        if letter is None:
            return None
        label = normalize_label(letter)
        return label if label in task.labels else None

    # --- the algorithm ---

    def run(self, task: ReasoningTask) -> SsvResult:
        self._calls_used = 0
        self._call_cap = self.config.call_budget()
        trace = SsvTrace()
        a_best: OptionLabel | None = None
        a_best_temp: float | None = None
        total_repairs = 0
        any_program = False
        for temperature in self.config.temperatures:
            try:
                program = self.gen_program(task, temperature)
            except GatewayError as exc:
                trace.notes.append(f"T={temperature}: generation failed ({exc})")
                program = None
            if program is None:
                continue
            any_program = True
            repairs_here = 0
            while program is not None:
                outcome = self.backend.execute_program(program)
                if a_best is None and outcome.answer is not None:
                    a_best = outcome.answer
                    a_best_temp = temperature
                try:
                    instantiations = self.gen_instantiations(program, temperature)
                except GatewayError as exc:
                    trace.notes.append(
                        f"T={temperature}: instantiation call failed ({exc})")
                    instantiations = []
                verification = self.verifier.verify_instantiations(
                    program, instantiations)
                report = self.verifier.is_well_formed(program, outcome)
                trace.attempts.append(AttemptLog(
                    temperature=temperature,
                    repair_round=repairs_here,
                    answer=outcome.answer.value if outcome.answer else None,
                    passing=sorted(l.value for l in outcome.passing),
                    verification=verification.to_obj(),
                    well_formed=report.to_obj(),
                ))
                if verification.passed and report.ok:
                    trace.temperature_used = temperature
                    trace.repairs_used = total_repairs
                    trace.llm_calls = self._calls_used
                    trace.program_text = print_program(program)
                    return SsvResult(outcome.answer, True, trace)
                if repairs_here >= self.config.max_repairs:
                    break
                if (self.config.repair_policy == "on_missing_answer"
                        and outcome.answer is not None):
                    break
                try:
                    repaired = self.repair_program(
                        task, program, verification.failing, report, temperature)
                except GatewayError as exc:
                    trace.notes.append(f"T={temperature}: repair failed ({exc})")
                    repaired = None
                repairs_here += 1
                total_repairs += 1
                if repaired is None or repaired == program:
                    break
                program = repaired
        trace.repairs_used = total_repairs
        if a_best is not None:
            trace.temperature_used = a_best_temp
        elif not any_program:
            # direct inference only when no executable program was obtained
            trace.used_fallback = True
            try:
                a_best = self.infer_fallback_answer(task)
            except GatewayError as exc:
                trace.notes.append(f"fallback failed ({exc})")
                a_best = None
        trace.llm_calls = self._calls_used
        return SsvResult(a_best, False, trace)


def _strip_segment_marker(body: str, marker: str) -> str:
    lines = body.splitlines()
    if lines and lines[0].lstrip().startswith(marker):
        return "\n".join(lines[1:]).strip()
    return body


def _option_body(option: OptionSegment) -> str:
    from .dsl.printer import _print_decl

    lines = [_print_decl(d, False) for d in option.local_decls]
    lines.append(f"check {print_expr(option.check_expr)}")
    return "\n".join(lines)
