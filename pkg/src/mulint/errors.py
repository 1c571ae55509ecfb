"""Exception hierarchy shared by the whole package.

Every error carries a ``stage`` label (``parse``, ``track`` or ``quadrature``)
naming the pipeline step that failed; the CLI and the HTTP service surface it
in diagnostics.
"""

from __future__ import annotations


class MulintError(Exception):
    """Base class for all package errors."""

    stage = "track"


class ParseError(MulintError):
    """Source text rejected by the expression or curve parser."""

    stage = "parse"

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position

    def __str__(self) -> str:
        base = super().__str__()
        if self.position is not None:
            return f"{base} (at offset {self.position})"
        return base


class UnknownIdentifierError(ParseError):
    """A name that is neither a declared variable nor a builtin."""


class DomainError(MulintError):
    """A mathematical precondition was violated (exit code 1 in the CLI)."""


class EvaluationError(DomainError):
    """log(0), division by zero, or a non-finite intermediate value."""


class NonDifferentiableError(DomainError):
    """Symbolic differentiation hit an unsupported node kind."""


class ParameterOutOfRangeError(DomainError):
    """Curve parameter outside the curve's [a, b] range."""


class ZeroValueError(DomainError):
    """f(z) vanishes where a multiplicative operation needs f(z) != 0."""


class NonPositiveValueError(DomainError):
    """An integrand that must be positive was <= 0 at an evaluation point."""


class BranchJumpError(DomainError):
    """A finite-difference stencil straddles an unresolvable phase jump."""


class ZeroOnCurveError(DomainError):
    """|f| fell below the zero tolerance at a point of the curve."""


class RefinementExhaustedError(DomainError):
    """Adaptive phase refinement hit its depth limit.

    Signals either a near-zero of the function on the curve or a curve that
    is not smooth enough to track.
    """

    stage = "track"


class IntegralOverflowError(DomainError):
    """exp() of the accumulated log-integral would overflow a float.

    ``log_value`` holds the logarithm of the would-be result, which is the
    faithful datum.
    """

    stage = "quadrature"

    def __init__(self, message: str, log_value: complex):
        super().__init__(message)
        self.log_value = log_value


class ToleranceNotMetError(MulintError):
    """Adaptive quadrature hit max depth before reaching tolerance.

    Carries the best available estimate and its error bound (exit code 3 in
    the CLI).
    """

    stage = "quadrature"

    def __init__(self, message: str, estimate: complex, est_error: float):
        super().__init__(message)
        self.estimate = estimate
        self.est_error = est_error
