"""Side-condition checks for denominators appearing in identity right-hand sides."""

from __future__ import annotations

from .errors import ExcludedParameter, ZeroCoordinate
from .series import PARAM_MARGIN


def nonzero(value: float, what: str, margin: float = PARAM_MARGIN) -> float:
    """Return ``value`` unless it is within ``margin`` of zero."""
    if abs(value) < margin:
        raise ExcludedParameter(f"{what} (value {value!r} too close to 0)")
    return value


def poch_den(rho: float, ell: int, what: str) -> float:
    """(rho)_ell for use as a denominator; every factor must avoid zero."""
    out = 1.0
    for i in range(ell):
        out *= nonzero(rho + i, f"{what}: factor {rho + i!r}")
    return out


def coordinate(v: float, name: str) -> float:
    if v == 0.0:
        raise ZeroCoordinate(f"{name} = 0 appears in a denominator")
    return v
