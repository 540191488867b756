"""Satisfiability statuses shared by the solver backend and the oracle."""

from enum import Enum


class Status(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value
