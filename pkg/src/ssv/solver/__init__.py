"""SMT solving: script emission, subprocess transport, cached backend."""

from .backend import (
    AnswerOutcome,
    CheckResult,
    OptionCheck,
    SolverBackend,
    canonical_key,
)
from .client import SolverClient, default_solver_cmd
from .smtlib import emit_script, term_text
