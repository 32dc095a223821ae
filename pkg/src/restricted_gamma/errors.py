"""Exception hierarchy shared by the library and the CLI."""

from typing import Optional


class RestrictedGammaError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(RestrictedGammaError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ContractError(RestrictedGammaError, ValueError):
    """A documented precondition was violated by the caller."""


class SingularityError(RestrictedGammaError, ArithmeticError):
    """Matrix is singular or not positive definite."""

    exit_code = 3

    def __init__(self, message: str, pivot: Optional[int] = None):
        super().__init__(message)
        self.pivot = pivot


class NumericRangeError(RestrictedGammaError, ArithmeticError):
    """Linear predictor outside the range where exp() is finite."""

    exit_code = 3

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class DegeneratePenaltyError(RestrictedGammaError, ArithmeticError):
    """Ridge penalty rule has a zero or negative denominator."""

    exit_code = 3


class DegenerateTruncationError(RestrictedGammaError, ArithmeticError):
    """Truncation interval carries (numerically) no probability mass."""

    exit_code = 3


class DegeneracyError(RestrictedGammaError, ValueError):
    """Sample or column without variation."""

    exit_code = 3

    def __init__(self, message: str, column: Optional[str] = None):
        super().__init__(message)
        self.column = column


class InfeasibleStateError(ContractError):
    """Chain state violates the restriction system."""

    exit_code = 3


class FeasibilityUnresolvedError(RestrictedGammaError):
    """No point satisfying the restriction system could be located."""

    exit_code = 3

    def __init__(self, message: str, proved_empty: bool = False):
        super().__init__(message)
        self.proved_empty = proved_empty


class ConvergenceError(RestrictedGammaError):
    """A workflow needed a converged fit and did not get one."""

    exit_code = 3


class ConfigurationError(RestrictedGammaError):
    """Configuration file missing or failing validation."""

    exit_code = 2


class IngestionError(RestrictedGammaError):
    """Dataset could not be read into a valid design."""

    exit_code = 2


class MissingFileError(IngestionError):
    """Dataset file does not exist."""


class MissingColumnError(IngestionError):
    """A configured column is not in the header."""

    def __init__(self, message: str, column: str):
        super().__init__(message)
        self.column = column


class NonNumericCellError(IngestionError):
    """A cell could not be parsed as a number."""

    def __init__(self, message: str, row: int, column: str):
        super().__init__(message)
        self.row = row
        self.column = column


class NonPositiveResponseError(IngestionError):
    """Gamma responses must be strictly positive."""

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row


def error_payload(error: BaseException) -> dict[str, object]:
    """
    Build the machine-readable description of an error.

    Args:
        error: Exception raised by a workflow

    Returns:
        Dictionary with error type, message and any location attributes
    """
    payload: dict[str, object] = {
        "error": type(error).__name__,
        "message": str(error),
        "exit_code": getattr(error, "exit_code", 1),
    }
    for attr in ("row", "column", "pivot", "proved_empty"):
        value = getattr(error, attr, None)
        if value is not None:
            payload[attr] = value
    return payload
