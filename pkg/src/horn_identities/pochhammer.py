"""Gamma and Pochhammer arithmetic with negative integer shifts.

Negative shifts follow the Gamma-ratio convention

    (rho)_{-l} = (-1)^l / (1 - rho)_l,

which is the only convention under which the Horn double series used in
this package have non-vanishing coefficients on both sides of the
diagonal.  The truncating ``0 when l > m`` branch is available separately
through :func:`poch_shift_identity_m_minus_l` and
:func:`poch_shift_identity_2m_minus_l` but is never used for evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PoleError

POLE_EPS = 1e-9
"""Absolute distance to an offending integer below which a pole is reported."""

LOG_DOMAIN_SHIFT = 30
"""Shifts longer than this are computed through ``lgamma`` differences."""


@dataclass(frozen=True)
class PochValue:
    value: float
    is_pole: bool = False

    def __float__(self) -> float:
        if self.is_pole:
            raise PoleError("Pochhammer value requested at a pole")
        return self.value


_POLE = PochValue(math.nan, True)


def integer_distance(v: float) -> float:
    return abs(v - round(v))


def _near_int(v: float, eps: float = POLE_EPS) -> int | None:
    r = round(v)
    return int(r) if abs(v - r) <= eps else None


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError within ``POLE_EPS`` of a non-positive integer.
    """
    n = _near_int(x)
    if n is not None and n <= 0:
        raise PoleError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1
    # Gamma alternates sign between consecutive negative integers.
    sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def _rising(rho: float, k: int) -> float:
    """(rho)_k for k >= 0, direct product or log domain."""
    if k == 0:
        return 1.0
    n = _near_int(rho)
    if n is not None and n <= 0 and k > -n:
        # one factor is (numerically) zero
        return 0.0
    if k <= LOG_DOMAIN_SHIFT:
        out = 1.0
        for i in range(k):
            out *= rho + i
        return out
    if rho + k - 1 < 0:
        # every factor negative: (rho)_k = (-1)^k (1 - rho - k)_k
        mag = _rising(1.0 - rho - k, k)
        return -mag if k % 2 else mag
    lg_hi, s_hi = log_gamma(rho + k)
    lg_lo, s_lo = log_gamma(rho)
    return s_hi * s_lo * math.exp(lg_hi - lg_lo)


def is_pole(rho: float, k: int) -> bool:
    """True when (rho)_k is infinite, i.e. k < 0 and rho in {1, ..., |k|}."""
    if k >= 0:
        return False
    n = _near_int(rho)
    return n is not None and 1 <= n <= -k


def pochhammer(rho: float, k: int) -> PochValue:
    """Pochhammer symbol (rho)_k for any integer k; poles reported in-band."""
    k = int(k)
    if k >= 0:
        return PochValue(_rising(rho, k))
    if is_pole(rho, k):
        return _POLE
    ell = -k
    den = _rising(1.0 - rho, ell)
    return PochValue((-1.0) ** ell / den)


def _shift_identity(rho: float, top: int, ell: int) -> PochValue:
    if ell > top:
        return PochValue(0.0)
    num = pochhammer(rho, top)
    den = _rising(1.0 - top - rho, ell)
    if den == 0.0:
        return _POLE
    return PochValue((-1.0) ** ell * num.value / den)


def poch_shift_identity_m_minus_l(rho: float, m: int, ell: int) -> PochValue:
    """(rho)_{m-l} in the truncating form: 0 for l > m, else
    (-1)^l (rho)_m / (1 - m - rho)_l."""
    if m < 0 or ell < 0:
        raise ValueError("m and l must be non-negative")
    return _shift_identity(rho, m, ell)


def poch_shift_identity_2m_minus_l(rho: float, m: int, ell: int) -> PochValue:
    """Same as :func:`poch_shift_identity_m_minus_l` with m replaced by 2m."""
    if m < 0 or ell < 0:
        raise ValueError("m and l must be non-negative")
    return _shift_identity(rho, 2 * m, ell)


def _is_zero(rho: float, k: int) -> bool:
    if k <= 0:
        return False
    n = _near_int(rho)
    return n is not None and -k < n <= 0


def poch_ratio(rho: float, k: int, j: int) -> float:
    """(rho)_{k+j} / (rho)_k as a short product, i.e. (rho + k)_j."""
    if is_pole(rho, k) or is_pole(rho, k + j):
        raise PoleError(f"pole in ({rho})_{k} or ({rho})_{k + j}")
    if _is_zero(rho, k):
        raise PoleError(f"({rho})_{k} vanishes; ratio undefined")
    base = rho + k
    out = 1.0
    if j >= 0:
        for i in range(j):
            out *= base + i
        return out
    for i in range(1, -j + 1):
        out *= base - i
    return 1.0 / out
