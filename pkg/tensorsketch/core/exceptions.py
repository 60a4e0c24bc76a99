"""
Custom exceptions for the tensorsketch package.

Every exception carries an ``exit_code`` that the command-line interface
returns to the shell: 3 for bad data, 4 for numerical failures.
"""

from typing import Optional, Any


DATA_EXIT_CODE = 3
NUMERICAL_EXIT_CODE = 4


class TensorSketchBaseException(Exception):
    """Base exception class for tensorsketch."""

    exit_code: int = DATA_EXIT_CODE

    def __init__(self, message: str, details: Optional[Any] = None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class IndexRangeError(TensorSketchBaseException, IndexError):
    """Raised when a multi-index or linear index falls outside a shape."""
    pass


class ModeError(TensorSketchBaseException, ValueError):
    """Raised for a mode index outside 1..k."""
    pass


class RankError(TensorSketchBaseException, ValueError):
    """Raised for a requested rank outside the admissible range."""
    pass


class ShapeError(TensorSketchBaseException, ValueError):
    """Raised for inconsistent shapes, lengths or non-finite values."""
    pass


class BudgetError(TensorSketchBaseException, ValueError):
    """Raised when a sampling budget is below 1."""
    pass


class SpecError(TensorSketchBaseException, ValueError):
    """Raised for an invalid generator specification."""
    pass


class PlanError(TensorSketchBaseException, ValueError):
    """Raised for an invalid or unloadable sweep plan."""
    pass


class StorageError(TensorSketchBaseException):
    """Raised for file storage errors."""
    pass


class FormatError(StorageError):
    """Raised for malformed tensor files; ``details`` holds the byte offset."""

    def __init__(self, message: str, offset: int, details: Optional[Any] = None):
        self.offset = offset
        super().__init__(f"{message} (at byte offset {offset})", details={"offset": offset, **(details or {})})


class ContractViolationError(TensorSketchBaseException, ValueError):
    """Raised for inputs that cannot occur for a well-formed tensor."""

    exit_code = NUMERICAL_EXIT_CODE


class UndefinedQuantityError(TensorSketchBaseException, ArithmeticError):
    """Raised when a diagnostic is undefined, e.g. stable rank at zero norm."""

    exit_code = NUMERICAL_EXIT_CODE


class FitError(TensorSketchBaseException):
    """Raised when a log-log fit is degenerate."""

    exit_code = NUMERICAL_EXIT_CODE


class GapDegenerateError(TensorSketchBaseException):
    """Raised when an eigengap is too small for subspace comparisons."""

    exit_code = NUMERICAL_EXIT_CODE


class EstimatorError(TensorSketchBaseException):
    """Raised when an estimator cannot be found or run."""

    exit_code = NUMERICAL_EXIT_CODE
