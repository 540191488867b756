"""Exception types shared across the package."""

from __future__ import annotations


class SsvError(Exception):
    """Base class for every error raised by this package."""


# --- dataset ingestion ---


class DatasetError(SsvError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class MissingField(DatasetError):
    pass


class DuplicateLabel(DatasetError):
    pass


class InvalidTask(DatasetError):
    pass


class UnreadableFile(DatasetError):
    pass


class UnrecognizedLabel(SsvError):
    pass


# --- constraint language ---


class DslError(SsvError):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


class UnknownSymbol(DslError):
    def __init__(self, name: str, line: int = 0):
        self.name = name
        super().__init__(f"unknown symbol '{name}'" + (f" at line {line}" if line else ""))


class ArityMismatch(DslError):
    pass


class SortMismatch(DslError):
    pass


class MissingSegment(DslError):
    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(f"program is missing a required {kind} segment")


class DuplicateOptionLabel(DslError):
    pass


class UnboundedComprehension(DslError):
    pass


# --- solving ---


class SolverCrash(SsvError):
    pass


class CapExceeded(SsvError):
    pass


# --- LLM gateway ---


class GatewayError(SsvError):
    pass


class MissingTranscript(GatewayError):
    pass


class ProviderError(GatewayError):
    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class FormatError(SsvError):
    """A structured LLM response did not follow its expected format."""


class MissingSlot(SsvError):
    """A prompt template slot was left unfilled."""


class ConfigError(SsvError):
    pass
