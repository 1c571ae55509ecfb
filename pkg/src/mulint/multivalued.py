"""Intensional representation of the multi-valued integral family.

A family is fully determined by its principal member and the endpoint
displacement of the curve: member n equals exp(2*pi*n*delta*i) times the
principal member.  The family is classified as single-valued, finite of
order q, or countable, according to whether the displacement is an integer,
a rational p/q, or anything else.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EvaluationError

TWO_PI = 2.0 * cmath.pi

# Rational detection settings: continued-fraction expansion capped at q_max;
# floating point cannot distinguish rationals with larger denominators.
CARDINALITY_TOL = 1e-9
Q_MAX = 64

# Two family members closer than this (relative) count as the same value.
DISTINCT_TOL = 1e-6


@dataclass(frozen=True)
class Cardinality:
    kind: str  # 'single' | 'finite' | 'countable'
    q: int | None = None

    def to_json(self) -> str | dict[str, int]:
        if self.kind == "finite":
            return {"finite": int(self.q or 0)}
        return self.kind


def classify_cardinality(delta: complex) -> Cardinality:
    """Trichotomy for the displacement: integer, rational p/q (q <= Q_MAX),
    or neither."""
    if abs(delta.imag) > CARDINALITY_TOL:
        return Cardinality("countable")
    x = delta.real
    approx = Fraction(x).limit_denominator(Q_MAX)
    if abs(x - float(approx)) <= CARDINALITY_TOL:
        q = approx.denominator
        return Cardinality("single") if q == 1 else Cardinality("finite", q)
    return Cardinality("countable")


@dataclass(frozen=True)
class MultiValuedIntegral:
    """Principal value plus endpoint displacement; the rest of the family is
    generated on demand.

    ``est_error`` and ``panels`` carry quadrature metadata when the value was
    produced by the integrator (0 otherwise).
    """

    principal: complex
    delta: complex
    cardinality: Cardinality = field(init=False)
    est_error: float = 0.0
    panels: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "cardinality", classify_cardinality(self.delta))

    def value(self, n: int) -> complex:
        return multivalue_at(self, n)

    def values(self, n_lo: int = -8, n_hi: int = 8) -> list[tuple[int, complex]]:
        return [(n, self.value(n)) for n in range(n_lo, n_hi + 1)]


def multivalue_at(result: MultiValuedIntegral, n: int) -> complex:
    """Family member n: exp(2*pi*n*delta*i) * principal."""
    try:
        return cmath.exp(TWO_PI * n * result.delta * 1j) * result.principal
    except OverflowError:
        raise EvaluationError(f"family member n={n} overflows") from None


def distinct_values(
    result: MultiValuedIntegral,
    n_lo: int = -8,
    n_hi: int = 8,
    tol: float = DISTINCT_TOL,
) -> list[complex]:
    """Representatives of the pairwise-distinct members in the index window.

    Two members are identified when they agree within ``tol`` relative to
    their magnitude.
    """
    reps: list[complex] = []
    for _, v in result.values(n_lo, n_hi):
        if all(abs(v - r) > tol * max(abs(v), abs(r)) for r in reps):
            reps.append(v)
    return reps
