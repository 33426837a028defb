"""Exception types shared across the package.

The CLI maps these onto exit codes: ParameterError -> 2, NumericError -> 3,
InvariantViolation -> 1.
"""


class ParameterError(ValueError):
    """An argument violates a documented precondition (domain/parameter error)."""


class UnsupportedDomainError(ParameterError):
    """The requested operation is not defined for this domain variant or axis."""


class IncompleteSpectrumError(ParameterError):
    """An exact evaluation was requested beyond the certified truncation threshold."""


class NumericError(RuntimeError):
    """A numerical procedure (quadrature, root finding) failed to converge."""


class InvariantViolation(AssertionError):
    """A verified inequality came out negative beyond the allowed slack."""
