"""Parsers for every structured LLM response format.

These are total over the shipped response fixtures; FormatError is reserved
for responses whose block structure is unrecoverable. Markdown fences are
stripped up front since models add them as noise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..dsl.ast import SegmentedProgram, scope_of_init
from ..dsl.parser import parse_expr
from ..dsl.rewrite import free_symbols
from ..errors import DslError, FormatError
from ..verifier import Instantiation, Polarity


def strip_fences(text: str) -> str:
    """Drop markdown code-fence lines, keeping their content."""
    lines = [line for line in text.splitlines()
             if not line.lstrip().startswith("```")]
    return "\n".join(lines)


def _sections(text: str, headers: list[str]) -> list[tuple[str, str]]:
    """Split text into (header, content) runs; content may span lines.

    A header match is a line equal to ``Header:`` (same-line remainders are
    kept as the first content line).
    """
    pattern = re.compile(r"^\s*(" + "|".join(re.escape(h) for h in headers) + r")\s*:\s*(.*)$")
    runs: list[tuple[str, list[str]]] = []
    for line in text.splitlines():
        m = pattern.match(line)
        if m:
            runs.append((m.group(1), [m.group(2)] if m.group(2) else []))
        elif runs:
            runs[-1][1].append(line)
    return [(header, "\n".join(body).strip()) for header, body in runs]


def parse_decomposition(text: str) -> tuple[str | None, list[str]]:
    """(initial context or None, constraint texts) from a decomposition
    response with InitialContext:/Constraints: headers and ### separators."""
    text = strip_fences(text)
    runs = _sections(text, ["InitialContext", "Constraints"])
    context_text = None
    constraints_text = None
    for header, body in runs:
        if header == "InitialContext" and context_text is None:
            context_text = body
        elif header == "Constraints" and constraints_text is None:
            constraints_text = body
    if constraints_text is None:
        raise FormatError("decomposition response lacks a Constraints: header")
    if context_text is None:
        raise FormatError("decomposition response lacks an InitialContext: header")
    context = None if context_text.strip().lower() in ("none", "") else context_text.strip()
    constraints = [
        part.strip()
        for part in re.split(r"^\s*#{3,}\s*$", constraints_text, flags=re.M)
        if part.strip()
    ]
    if not constraints:
        raise FormatError("decomposition response contains no constraints")
    return context, constraints


_INST_HEADERS = [
    "Constraint",
    "PositiveExampleDescription",
    "PositiveExampleCode",
    "NegativeExampleDescription",
    "NegativeExampleCode",
]


def _mk_instantiation(index: int, polarity: Polarity, description: str,
                      code: str, program: SegmentedProgram, scope,
                      target: str) -> Instantiation:
    is_none = description.strip().upper() == "NONE" or code.strip() in ("pass", "")
    if is_none:
        return Instantiation(index, polarity, target=target)
    try:
        expr = parse_expr(code, scope, lenient=True)
    except DslError:
        return Instantiation(index, polarity, description, None,
                             ill_formed=True, source_code=code, target=target)
    if free_symbols(expr, scope):
        return Instantiation(index, polarity, description, None,
                             ill_formed=True, source_code=code, target=target)
    return Instantiation(index, polarity, description, expr,
                         source_code=code, target=target)


def parse_instantiations(text: str, program: SegmentedProgram,
                         include_options: bool = False) -> list[Instantiation]:
    """One positive and one negative instantiation per constraint block.

    Blocks map to constraints in order; unparseable code yields an
    ill-formed-marked instantiation rather than an error.
    """
    text = strip_fences(text)
    runs = _sections(text, _INST_HEADERS)
    blocks: list[dict[str, str]] = []
    for header, body in runs:
        if header == "Constraint":
            blocks.append({})
        elif blocks:
            blocks[-1].setdefault(header, body)
    expected = len(program.constraints) + (len(program.options) if include_options else 0)
    if len(blocks) != expected:
        raise FormatError(
            f"expected {expected} constraint example blocks, got {len(blocks)}")
    scope = scope_of_init(program.init)
    out: list[Instantiation] = []
    for i, block in enumerate(blocks):
        missing = [h for h in _INST_HEADERS[1:] if h not in block]
        if missing:
            raise FormatError(f"example block {i + 1} lacks sections: {missing}")
        if i < len(program.constraints):
            index, target = i, "constraint"
        else:
            index, target = i - len(program.constraints), "option"
        out.append(_mk_instantiation(
            index, Polarity.POSITIVE, block["PositiveExampleDescription"],
            block["PositiveExampleCode"], program, scope, target))
        out.append(_mk_instantiation(
            index, Polarity.NEGATIVE, block["NegativeExampleDescription"],
            block["NegativeExampleCode"], program, scope, target))
    return out


_CORRECTED_RE = re.compile(r">>>\s*CorrectedProgram\s*:\s*\n?", re.IGNORECASE)


def parse_refined_program(text: str) -> str:
    """Program text after the '>>> CorrectedProgram:' marker."""
    text = strip_fences(text)
    m = _CORRECTED_RE.search(text)
    if m is None:
        raise FormatError("refinement response lacks '>>> CorrectedProgram:'")
    corrected = text[m.end():].strip()
    if not corrected:
        raise FormatError("refinement response has an empty corrected program")
    return corrected


@dataclass(frozen=True)
class RepairPatch:
    discussion: str
    init_code: str | None = None
    constraint_code: str | None = None
    example_code: str | None = None

    @property
    def usable(self) -> bool:
        return any(code is not None for code in
                   (self.init_code, self.constraint_code, self.example_code))


_REPAIR_HEADERS = [
    "ProblemDiscussion",
    "RepairedInitialCode",
    "RepairedConstraintCode",
    "RepairedPositiveExampleCode",
    "RepairedNegativeExampleCode",
]


def parse_repair_patch(text: str) -> RepairPatch:
    """Repair response sections; NONE-valued sections map to absent."""
    text = strip_fences(text)
    runs = _sections(text, _REPAIR_HEADERS)
    found = {header: body for header, body in runs}
    if not any(h in found for h in _REPAIR_HEADERS[1:]):
        raise FormatError("repair response lacks Repaired*Code sections")

    def section(name: str) -> str | None:
        body = found.get(name)
        if body is None or body.strip().upper() == "NONE" or not body.strip():
            return None
        return body.strip()

    example = section("RepairedPositiveExampleCode")
    if example is None:
        example = section("RepairedNegativeExampleCode")
    return RepairPatch(
        discussion=found.get("ProblemDiscussion", "").strip(),
        init_code=section("RepairedInitialCode"),
        constraint_code=section("RepairedConstraintCode"),
        example_code=example,
    )


_ANSWER_RE = re.compile(r"Answer\s*:\s*\(?([A-Ga-g])\)?", re.IGNORECASE)


def extract_answer_label(text: str) -> str | None:
    """Final-answer letter per the 'Answer: (X)' convention; last one wins."""
    matches = _ANSWER_RE.findall(strip_fences(text))
    return matches[-1].upper() if matches else None
