"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class BipcountError(Exception):
    exit_code = 1
    module = "bipcount"


class PreconditionError(BipcountError, ValueError):
    """A documented precondition of an operation does not hold."""

    exit_code = 2


class DomainError(PreconditionError):
    pass


class RegimeError(PreconditionError):
    """Parameters fall outside the regime where the algorithm is guaranteed."""


class ModelError(PreconditionError):
    """A polymer or label is not admissible for the model it was given to."""


class ResourceBudgetError(BipcountError):
    """An exhaustive computation would exceed its configured work budget."""

    exit_code = 3


class MalformedInputError(BipcountError, ValueError):
    exit_code = 4

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
