"""Term-wise Euler operators and derivatives on coefficient grids.

All maps here act on :class:`~horn_identities.series.TruncatedSeries`
grids and are exact for the truncated polynomial, so comparing an operator
image with a directly evaluated right-hand side isolates the identity from
discretisation error.
"""

from __future__ import annotations

import numpy as np

from .errors import ExcludedParameter
from .guards import nonzero, poch_den
from .pochhammer import pochhammer
from .series import (
    REAL,
    TRUNCATION_CAP,
    G1Params,
    G2Params,
    G3Params,
    HornParams,
    Point,
    Truncation,
    TruncatedSeries,
    converged_series,
    horn,
    series_grid,
)

# (coefficient of theta_x, coefficient of theta_y) for a unit parameter shift
RECIPES: dict[tuple[str, str], tuple[int, int]] = {
    ("g3", "alpha"): (-1, 2),
    ("g3", "beta"): (2, -1),
    ("g1", "alpha"): (1, 1),
    ("g1", "beta"): (-1, 1),
    ("g1", "gamma"): (1, -1),
    ("g2", "alpha"): (1, 0),
    ("g2", "beta"): (0, 1),
    ("g2", "gamma"): (-1, 1),
    ("g2", "delta"): (1, -1),
}


def _mn(s: TruncatedSeries) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.arange(s.M + 1, dtype=REAL)[:, None],
        np.arange(s.N + 1, dtype=REAL)[None, :],
    )


def theta_x(s: TruncatedSeries) -> TruncatedSeries:
    m, _ = _mn(s)
    return s.derive(s.grid * m, "theta_x")


def theta_y(s: TruncatedSeries) -> TruncatedSeries:
    _, n = _mn(s)
    return s.derive(s.grid * n, "theta_y")


def shift_operator_product(s: TruncatedSeries, recipe, ell: int) -> TruncatedSeries:
    """Apply prod_{i<ell} (1 + (a theta_x + b theta_y)/(rho + i)).

    ``recipe`` is either a parameter name (alpha, beta, ...) resolved
    against ``s.family`` and ``s.params``, or an explicit ``(a, b, rho)``.
    """
    if isinstance(recipe, str):
        a, b = RECIPES[(s.family, recipe)]
        rho = getattr(s.params, recipe)
        label = recipe
    else:
        a, b, rho = recipe
        label = f"({a},{b},{rho})"
    if ell < 0:
        raise ValueError("ell must be non-negative")
    m, n = _mn(s)
    k = a * m + b * n
    factor = np.ones_like(s.grid)
    for i in range(ell):
        factor = factor * (1.0 + k / nonzero(REAL(rho) + i, f"{label} + {i} != 0"))
    return s.derive(s.grid * factor, f"shift[{label},{ell}]")


def falling_theta_sum(s: TruncatedSeries, ell: int) -> TruncatedSeries:
    """prod_{k=1}^{ell} (theta_x + theta_y - k + 1), i.e. the falling
    factorial of the total degree."""
    m, n = _mn(s)
    d = m + n
    factor = np.ones_like(s.grid)
    for k in range(1, ell + 1):
        factor = factor * (d - k + 1.0)
    return s.derive(s.grid * factor, f"falling[{ell}]")


def converged_image(p: HornParams, pt: Point, op, tr=None) -> tuple[TruncatedSeries, float]:
    """``op`` applied to the series of ``p`` and evaluated at ``pt``.

    Operators that multiply coefficients by growing polynomials in (m, n)
    amplify the truncation tail, so without an explicit truncation the grid
    is doubled until the image itself passes the tail test."""
    s, _ = converged_series(p, pt, tr)
    while True:
        image = op(s)
        val = image.evaluate(pt)
        if tr is not None or val.converged or (s.M >= TRUNCATION_CAP and s.N >= TRUNCATION_CAP):
            return image, val.value
        s = series_grid(p, Truncation(s.M, s.N).doubled())


def partial_derivative_series(s: TruncatedSeries, dx: int, dy: int) -> TruncatedSeries:
    if dx < 0 or dy < 0 or dx > s.M or dy > s.N:
        raise ValueError("derivative order exceeds the truncation")
    g = s.grid[dx:, dy:]
    m = np.arange(g.shape[0], dtype=REAL)
    n = np.arange(g.shape[1], dtype=REAL)
    fx = np.ones_like(m)
    for j in range(1, dx + 1):
        fx = fx * (m + j)
    fy = np.ones_like(n)
    for j in range(1, dy + 1):
        fy = fy * (n + j)
    return s.derive(g * fx[:, None] * fy[None, :], f"d[{dx},{dy}]")


# --------------------------------------------------------------------------
# closed-form derivative right-hand sides


def _p(rho: float, k: int) -> float:
    return pochhammer(rho, k).value


def _derivative_terms(family: str, p: HornParams, ell: int, axis: str, corrected: bool):
    """(prefactor, shifted parameters) for the l-th derivative formula."""
    sgn = -1.0 if ell % 2 else 1.0
    key = (family, axis)
    if key == ("g3", "x"):
        pre = sgn * _p(p.beta, 2 * ell) / poch_den(1.0 - p.alpha, ell, "(1-alpha)_l")
        return pre, G3Params(p.alpha - ell, p.beta + 2 * ell)
    if key == ("g3", "y"):
        pre = sgn * _p(p.alpha, 2 * ell) / poch_den(1.0 - p.beta, ell, "(1-beta)_l")
        return pre, G3Params(p.alpha + 2 * ell, p.beta - ell)
    if key == ("g1", "x"):
        den = poch_den(1.0 - p.beta, ell, "(1-beta)_l")
        if corrected:
            pre = sgn * _p(p.alpha, ell) * _p(p.gamma, ell) / den
        else:
            pre = sgn * _p(p.alpha, ell) / (den * poch_den(p.gamma, ell, "(gamma)_l"))
        return pre, G1Params(p.alpha + ell, p.beta - ell, p.gamma + ell)
    if key == ("g2", "x"):
        den = poch_den(1.0 - p.gamma, ell, "(1-gamma)_l")
        if corrected:
            pre = sgn * _p(p.alpha, ell) * _p(p.delta, ell) / den
        else:
            pre = sgn * _p(p.alpha, ell) / (den * poch_den(p.delta, ell, "(delta)_l"))
        return pre, G2Params(p.alpha + ell, p.beta, p.gamma - ell, p.delta + ell)
    if key == ("g1", "y"):
        pre = sgn * _p(p.alpha, ell) * _p(p.beta, ell) / poch_den(1.0 - p.gamma, ell, "(1-gamma)_l")
        return pre, G1Params(p.alpha + ell, p.beta + ell, p.gamma - ell)
    if key == ("g2", "y"):
        pre = sgn * _p(p.beta, ell) * _p(p.gamma, ell) / poch_den(1.0 - p.delta, ell, "(1-delta)_l")
        return pre, G2Params(p.alpha, p.beta + ell, p.gamma + ell, p.delta - ell)
    raise ExcludedParameter(f"no derivative formula for {family} along {axis}")


def derivative_rhs_printed(family: str, p: HornParams, pt: Point, ell: int, axis: str, tr=None) -> float:
    """The l-th partial derivative right-hand side exactly as stated,
    including the x-derivative forms for G1 and G2 that keep (gamma)_l,
    (delta)_l in the denominator."""
    if ell == 0:
        return horn(p, pt.x, pt.y, tr)
    pre, q = _derivative_terms(family, p, ell, axis, corrected=False)
    return pre * horn(q, pt.x, pt.y, tr)


def derivative_rhs_corrected(family: str, p: HornParams, pt: Point, ell: int, axis: str, tr=None) -> float:
    """Derivative right-hand side re-derived from the one-step index shift;
    differs from :func:`derivative_rhs_printed` only for the x-derivatives of
    G1 and G2."""
    if ell == 0:
        return horn(p, pt.x, pt.y, tr)
    pre, q = _derivative_terms(family, p, ell, axis, corrected=True)
    return pre * horn(q, pt.x, pt.y, tr)

