"""Exception hierarchy shared by every module."""


class HinfballError(Exception):
    """Base class for all package errors."""


class ContractViolation(HinfballError, ValueError):
    """An input violates a documented precondition."""


class FrequencyRangeError(ContractViolation):
    """A Fourier frequency falls outside the representable grid range."""


class DegenerateInputError(HinfballError):
    """The input is valid but no construction exists for it.

    ``kind`` distinguishes the cases so the command line can map them
    onto distinct exit statuses.
    """

    INNER = "inner"
    EMPTY_SUBLEVEL = "empty_sublevel"
    EMPTY_KERNEL = "empty_kernel"

    def __init__(self, message: str, kind: str = INNER):
        super().__init__(message)
        self.kind = kind


class ConditioningError(HinfballError):
    """A null-space computation returned a residual above tolerance."""
