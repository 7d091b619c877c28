"""Generating-function sums over one shifted parameter.

For a parameter rho of G1, G2 or G3 the sum

    sum_l (rho)_l / l! * F(rho + l; x, y) t^l

collapses to (1 - t)^(-rho) times F at rescaled arguments.  The rescaling
depends on how rho enters the coefficient and is tabulated in
:data:`RESCALINGS` as the powers of (1 - t) multiplying x and y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .pochhammer import pochhammer
from .series import HornParams, Point, SeriesValue, Truncation, domain_check, horn

SUM_LENGTH = 48
SUM_TRUNCATION = Truncation(80, 80)
MAX_ABS_T = 0.2

# (family, axis) -> (power of (1-t) on x, power of (1-t) on y)
RESCALINGS: dict[tuple[str, str], tuple[int, int]] = {
    ("g1", "alpha"): (-1, -1),
    ("g1", "beta"): (1, -1),
    ("g1", "gamma"): (-1, 1),
    ("g2", "alpha"): (-1, 0),
    ("g2", "beta"): (0, -1),
    ("g2", "gamma"): (1, -1),
    ("g2", "delta"): (-1, 1),
    ("g3", "alpha"): (1, -2),
    ("g3", "beta"): (-2, 1),
}


@dataclass(frozen=True)
class SummationCase:
    axis: str
    params: HornParams
    point: Point
    t: float
    L: int = SUM_LENGTH

    def __post_init__(self):
        if (self.family, self.axis) not in RESCALINGS:
            raise ValueError(f"{self.family} has no parameter {self.axis!r}")
        if not abs(self.t) <= MAX_ABS_T:
            raise ValueError(f"|t| must not exceed {MAX_ABS_T}")
        if self.L < 0:
            raise ValueError("L must be non-negative")

    @property
    def family(self) -> str:
        return self.params.family

    def rescaled_point(self) -> Point:
        px, py = RESCALINGS[(self.family, self.axis)]
        s = 1.0 - self.t
        return Point(self.point.x * s**px, self.point.y * s**py)


def summation_lhs(case: SummationCase, tr=SUM_TRUNCATION) -> SeriesValue:
    """Partial sum over l = 0..L with a ratio-based tail estimate."""
    p, pt = case.params, case.point
    if not domain_check(p.family, pt):
        raise DomainError(f"{pt} lies outside the {p.family.upper()} box")
    rho = getattr(p, case.axis)
    terms = []
    for ell in range(case.L + 1):
        w = pochhammer(rho, ell).value / math.factorial(ell) * case.t**ell
        if w == 0.0:
            terms.append(0.0)
            continue
        terms.append(w * horn(p.shifted(**{case.axis: ell}), pt.x, pt.y, tr))
    value = math.fsum(terms)
    tail, converged = _ratio_tail(terms)
    return SeriesValue(value, len(terms), tail, converged)


def _ratio_tail(terms: list[float], block: int = 4) -> tuple[float, bool]:
    """Geometric extrapolation from the maxima of the last two blocks of
    terms; blocks absorb sign changes of the inner function."""
    a = [abs(v) for v in terms]
    if len(a) < 2 * block:
        return (0.0, True) if not any(a[1:]) else (math.inf, False)
    hi = max(a[-block:])
    lo = max(a[-2 * block : -block])
    if hi == 0.0:
        return 0.0, True
    if lo == 0.0:
        return math.inf, False
    q = (hi / lo) ** (1.0 / block)
    if q >= 1.0:
        return math.inf, False
    return hi * q / (1.0 - q), True


def summation_rhs(case: SummationCase, tr=SUM_TRUNCATION) -> float:
    p = case.params
    q = case.rescaled_point()
    if not domain_check(p.family, q):
        raise DomainError(f"rescaled point {q} lies outside the {p.family.upper()} box")
    rho = getattr(p, case.axis)
    return (1.0 - case.t) ** (-rho) * horn(p, q.x, q.y, tr)
