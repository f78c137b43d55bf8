from __future__ import annotations


class SvineqError(RuntimeError):
    """Base class for every error raised by the toolkit."""


class ShapeError(SvineqError, ValueError):
    pass


class HypothesisError(SvineqError):
    """An input does not satisfy a stated hypothesis of an inequality or operation."""

    def __init__(
        self,
        hypothesis: str,
        message: str,
        *,
        value: float | None = None,
        part: int | None = None,
    ) -> None:
        super().__init__(message)
        self.hypothesis = hypothesis
        self.value = value
        self.part = part


class ConvergenceError(SvineqError):
    pass


class DomainError(SvineqError, ValueError):
    pass


class ParameterError(SvineqError, ValueError):
    pass


class ContractError(SvineqError):
    pass


class ArityError(SvineqError, ValueError):
    pass


class UnknownInequalityError(SvineqError, LookupError):
    pass


class MatrixParseError(SvineqError):
    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ConfigError(SvineqError):
    pass
