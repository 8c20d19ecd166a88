"""Negative Pell equation x^2 - d*y^2 = -1 and the SL(2,Q) torus normalizer.

The continued fraction of sqrt(d) is computed with the exact integer
recurrence on (P, Q) pairs; the equation is solvable precisely when the
period length is odd, and the fundamental solution is the convergent just
before the end of the first period.  All arithmetic is arbitrary precision;
solutions are verified by substitution before being returned.

When a solution (x0, y0) exists, the normalizer of the rational quadratic
torus {[[x, y*d], [y, x]] : x^2 - d*y^2 = 1} inside SL(2,Q) gains a second
coset with representative [[x0, -y0*d], [y0, -x0]]; otherwise it is the
torus alone.  A printed divisibility criterion (d > 0 with no prime divisor
congruent to 3 mod 4) is evaluated alongside and its agreement with actual
solvability is reported, since it is necessary but not sufficient (d = 34
is the smallest disagreement).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator


class PellError(Exception):
    pass


def is_squarefree(d: int) -> bool:
    d = abs(d)
    if d == 0:
        return False
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        while d % f == 0:
            d //= f
        f += 1 if f == 2 else 2
    return True


@dataclass(frozen=True)
class QuadraticCase:
    """A squarefree integer d != 0, 1 defining Q(sqrt(d))."""

    d: int

    def __post_init__(self):
        if self.d in (0, 1):
            raise PellError(f"d must not be 0 or 1, got {self.d}")
        if not is_squarefree(self.d):
            raise PellError(f"d must be squarefree, got {self.d}")


@dataclass(frozen=True)
class PellSolution:
    """Fundamental solution of x^2 - d*y^2 = -1 (minimal y > 0)."""

    d: int
    x: int
    y: int

    def __post_init__(self):
        if self.y <= 0 or self.x * self.x - self.d * self.y * self.y != -1:
            raise PellError(f"({self.x}, {self.y}) does not solve x^2 - {self.d}*y^2 = -1")


def continued_fraction_sqrt(d: int) -> tuple[int, tuple[int, ...]]:
    """(a0, periodic part) of the continued fraction of sqrt(d), d non-square > 1."""
    if d <= 1:
        raise PellError(f"d must be > 1, got {d}")
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise PellError(f"d must not be a perfect square, got {d}")
    period = []
    p, q = 0, 1
    a = a0
    seen_start = None
    while True:
        p = a * q - p
        q = (d - p * p) // q
        a = (a0 + p) // q
        if seen_start is None:
            seen_start = (p, q)
        elif (p, q) == seen_start and period:
            break
        period.append(a)
        if q == 1:
            break
    return a0, tuple(period)


def _convergent(terms: list[int]) -> tuple[int, int]:
    h_prev, h = 1, terms[0]
    k_prev, k = 0, 1
    for a in terms[1:]:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return h, k


def negative_pell(d: int) -> PellSolution | None:
    """Fundamental solution of x^2 - d*y^2 = -1, or None when unsolvable.

    Solvable exactly when the continued-fraction period of sqrt(d) has odd
    length; negative d is never solvable.
    """
    if d in (0, 1):
        raise PellError(f"d must not be 0 or 1, got {d}")
    if not is_squarefree(d):
        raise PellError(f"d must be squarefree, got {d}")
    if d < 0:
        return None
    a0, period = continued_fraction_sqrt(d)
    if len(period) % 2 == 0:
        return None
    terms = [a0] + list(period[:-1])
    x, y = _convergent(terms)
    return PellSolution(d, x, y)


def positive_pell(d: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - d*y^2 = +1 for non-square d > 1."""
    a0, period = continued_fraction_sqrt(d)
    if len(period) % 2 == 0:
        terms = [a0] + list(period[:-1])
    else:
        terms = [a0] + list(period) + list(period[:-1])
    x, y = _convergent(terms)
    if x * x - d * y * y != 1:
        raise PellError(f"internal: convergent failed for d={d}")
    return x, y


TORUS_ONLY = "TorusOnly"
TWO_COSETS = "TwoCosets"


@dataclass(frozen=True)
class NormalizerShape:
    """Shape of the SL(2,Q) normalizer of the quadratic torus for d."""

    d: int
    variant: str
    witness: PellSolution | None

    @property
    def coset_matrix(self) -> tuple[tuple[int, int], tuple[int, int]] | None:
        if self.witness is None:
            return None
        x0, y0 = self.witness.x, self.witness.y
        return ((x0, -y0 * self.d), (y0, -x0))


def printed_criterion(d: int) -> bool:
    """d > 0 with no prime divisor of the form 4m + 3 (necessary, not sufficient)."""
    if d <= 0:
        return False
    rest = d
    f = 2
    while f * f <= rest:
        if rest % f == 0:
            if f % 4 == 3:
                return False
            while rest % f == 0:
                rest //= f
        f += 1 if f == 2 else 2
    return not (rest > 1 and rest % 4 == 3)


@dataclass(frozen=True)
class NormalizerReport:
    d: int
    shape: NormalizerShape
    period_length: int | None
    solvable: bool
    criterion_predicts_solvable: bool
    criterion_agrees: bool

    def to_dict(self) -> dict:
        doc = {
            "d": self.d,
            "variant": self.shape.variant,
            "period_length": self.period_length,
            "solvable": self.solvable,
            "criterion_predicts_solvable": self.criterion_predicts_solvable,
            "criterion_agrees": self.criterion_agrees,
        }
        if self.shape.witness is not None:
            doc["x0"] = self.shape.witness.x
            doc["y0"] = self.shape.witness.y
            doc["coset_matrix"] = [list(r) for r in self.shape.coset_matrix]
        return doc


def sl2q_normalizer_report(d: int) -> NormalizerReport:
    """Normalizer shape for d plus the printed-criterion comparison."""
    case = QuadraticCase(d)
    sol = negative_pell(case.d)
    period_length = None
    if d > 1:
        _, period = continued_fraction_sqrt(d)
        period_length = len(period)
    solvable = sol is not None
    shape = NormalizerShape(d, TWO_COSETS if solvable else TORUS_ONLY, sol)
    crit = printed_criterion(d)
    return NormalizerReport(
        d=d,
        shape=shape,
        period_length=period_length,
        solvable=solvable,
        criterion_predicts_solvable=crit,
        criterion_agrees=crit == solvable,
    )


# -- exact rational shape algebra (used by the conjugation invariants) ---------


def torus_point(d: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """A rational point (x, y) with x^2 - d*y^2 = 1, from the line parameter t."""
    denom = 1 - d * t * t
    if denom == 0:
        raise PellError("parameter hits the degenerate denominator")
    return (1 + d * t * t) / denom, 2 * t / denom


def _mat2(a, b, c, e):
    return ((a, b), (c, e))


def mat_mul2(A, B):
    return _mat2(
        A[0][0] * B[0][0] + A[0][1] * B[1][0],
        A[0][0] * B[0][1] + A[0][1] * B[1][1],
        A[1][0] * B[0][0] + A[1][1] * B[1][0],
        A[1][0] * B[0][1] + A[1][1] * B[1][1],
    )


def mat_inv2(A):
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if det == 0:
        raise PellError("singular matrix")
    return _mat2(A[1][1] / det, -A[0][1] / det, -A[1][0] / det, A[0][0] / det)


def in_torus_shape(d: int, M) -> bool:
    """Whether M = [[x, y*d], [y, x]] for some rationals with x^2 - d*y^2 = 1."""
    x, yd = M[0]
    y, x2 = M[1]
    return x == x2 and yd == y * d and x * x - d * y * y == 1


def pell_sweep(d_max: int) -> Iterator[dict]:
    """One record per d in [1, d_max]; invalid d get a skip reason."""
    for d in range(1, d_max + 1):
        if d == 1 or not is_squarefree(d):
            yield {"d": d, "skipped": "square" if isqrt(d) ** 2 == d else "not squarefree"}
            continue
        yield sl2q_normalizer_report(d).to_dict()
