"""Term-wise integral operators and the integration formulas built on them.

Two operator families act on coefficient grids:

* averaged antiderivatives  Ihat_x = (1/x) int_0^x,  Ihat_y = (1/y) int_0^y,
  diagonal with factors 1/(m+1) and 1/(n+1);
* plain antiderivatives     I_x = int_0^x,  I_y = int_0^y,
  which raise the degree in their variable by one.

Each integration formula is stored as a list of :class:`Term` objects so
that the stated right-hand side and its boundary-corrected twin are two
evaluations of the same data.  A term ``coef * x^px * y^py * F`` comes with
the stratum offset (a, b) at which the index shift behind it starts; the
boundary-corrected evaluation keeps only the coefficients of ``F`` with
m >= a and n >= b, which is exactly the part a re-indexed sum reaches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .diff_ops import converged_image, falling_theta_sum
from .errors import DomainError, QuadratureFailure, ZeroCoordinate
from .guards import coordinate, nonzero, poch_den
from .pochhammer import pochhammer
from .series import (
    G1Params,
    G2Params,
    G3Params,
    HornParams,
    REAL,
    Point,
    TruncatedSeries,
    converged_series,
    domain_check,
)

# --------------------------------------------------------------------------
# grid operators


def _inv_index(size: int) -> np.ndarray:
    return 1.0 / np.arange(1, size + 1, dtype=REAL)


def op_Ihat_x(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    f = _inv_index(s.M + 1) ** ell
    return s.derive(s.grid * f[:, None], f"Ihat_x^{ell}")


def op_Ihat_y(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    f = _inv_index(s.N + 1) ** ell
    return s.derive(s.grid * f[None, :], f"Ihat_y^{ell}")


def op_Ihat(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    f = _inv_index(s.M + 1)[:, None] + _inv_index(s.N + 1)[None, :]
    return s.derive(s.grid * f**ell, f"Ihat^{ell}")


def op_Ihat_xy(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    """(Ihat_x Ihat_y)^ell."""
    return op_Ihat_x(op_Ihat_y(s, ell), ell)


def op_I_x(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    g = s.grid
    for _ in range(ell):
        out = np.zeros((g.shape[0] + 1, g.shape[1]), dtype=REAL)
        out[1:, :] = g * _inv_index(g.shape[0])[:, None]
        g = out
    return s.derive(g, f"I_x^{ell}")


def op_I_y(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    g = s.grid
    for _ in range(ell):
        out = np.zeros((g.shape[0], g.shape[1] + 1), dtype=REAL)
        out[:, 1:] = g * _inv_index(g.shape[1])[None, :]
        g = out
    return s.derive(g, f"I_y^{ell}")


def pad_grid(g: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    out = np.zeros(shape, dtype=REAL)
    out[: g.shape[0], : g.shape[1]] = g
    return out


def add_series(a: TruncatedSeries, b: TruncatedSeries, note: str = "sum") -> TruncatedSeries:
    shape = (max(a.grid.shape[0], b.grid.shape[0]), max(a.grid.shape[1], b.grid.shape[1]))
    return a.derive(pad_grid(a.grid, shape) + pad_grid(b.grid, shape), note)


def op_I(s: TruncatedSeries, ell: int = 1) -> TruncatedSeries:
    """(I_x + I_y)^ell; each application grows both truncations by one."""
    for _ in range(ell):
        s = add_series(op_I_x(s), op_I_y(s), "I")
    return s


LHS_OPERATORS: dict[str, Callable[[TruncatedSeries, int], TruncatedSeries]] = {
    "Ihat": op_Ihat,
    "Ihat_x": op_Ihat_x,
    "Ihat_y": op_Ihat_y,
    "Ihat_xy": op_Ihat_xy,
    "I": op_I,
    "I_x": op_I_x,
    "I_y": op_I_y,
}


# --------------------------------------------------------------------------
# integration formulas


@dataclass(frozen=True)
class Term:
    coef: float
    params: HornParams
    stratum: tuple[int, int] = (0, 0)
    power: tuple[int, int] = (0, 0)
    falling: int = 0


@dataclass(frozen=True)
class IntegralForm:
    key: str
    family: str
    operator: str
    terms: Callable[[HornParams, int], list[Term]]
    fixed_ell: int | None = None
    normalizations: tuple[str, ...] = field(default=())
    note: str = ""


def _pn(rho: float, k: int) -> float:
    return pochhammer(rho, k).value


def _sgn(ell: int) -> float:
    return -1.0 if ell % 2 else 1.0


def _dens(*vals: tuple[float, str]) -> float:
    out = 1.0
    for v, what in vals:
        out *= nonzero(v, what)
    return out


def _t42(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    da = _dens((a - 1, "alpha != 1"), (a - 2, "alpha != 2"))
    return [
        Term(b * (b + 1) / (da * _dens((c - 1, "gamma != 1"), (c - 2, "gamma != 2"))),
             G1Params(a - 2, b + 2, c - 2), (2, 0), (-2, 0)),
        Term(2.0 / da, G1Params(a - 2, b, c), (1, 1), (-1, -1)),
        # third parameter printed as beta + 2
        Term(c * (c + 1) / (da * _dens((b - 1, "beta != 1"), (b - 2, "beta != 2"))),
             G1Params(a - 2, b - 2, b + 2), (0, 2), (0, -2)),
    ]


def _t43(p: G2Params, ell: int) -> list[Term]:
    a, b, c, d = p
    return [
        Term(c * (c + 1) / _dens((a - 1, "alpha != 1"), (a - 2, "alpha != 2"),
                                 (d - 1, "delta != 1"), (d - 2, "delta != 2")),
             G2Params(a - 2, b, c + 2, d - 2), (2, 0), (-2, 0)),
        Term(2.0 / _dens((a - 1, "alpha != 1"), (a - 2, "alpha != 2"),
                         (b - 1, "beta != 1"), (b - 2, "beta != 2")),
             G2Params(a - 2, b - 2, c, d), (1, 1), (-1, -1)),
        Term(d * (d + 1) / _dens((b - 1, "beta != 1"), (b - 2, "beta != 2"),
                                 (c - 1, "gamma != 1"), (c - 2, "gamma != 2")),
             G2Params(a, b - 2, c - 2, d + 2), (0, 2), (0, -2)),
    ]


def _t44(p: G3Params, ell: int, power: bool = True) -> list[Term]:
    a, b = p
    px = (-2, 0) if power else (0, 0)
    pxy = (-1, -1) if power else (0, 0)
    py = (0, -2) if power else (0, 0)
    return [
        Term(a * (a + 1) / poch_den(b - 4, 4, "beta != 1..4"), G3Params(a + 2, b - 4), (2, 0), px),
        Term(2.0 / _dens((a - 1, "alpha != 1"), (b - 1, "beta != 1")),
             G3Params(a - 1, b - 1), (1, 1), pxy),
        Term(b * (b + 1) / poch_den(a - 4, 4, "alpha != 1..4"), G3Params(a - 4, b + 2), (0, 2), py),
    ]


def _t45(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    return [Term(1.0 / poch_den(1 - a, 2 * ell, "(1-alpha)_2l"), G1Params(a - 2 * ell, b, c),
                 (ell, ell), (-ell, -ell), ell)]


def _t46(p: G2Params, ell: int) -> list[Term]:
    a, b, c, d = p
    den = poch_den(1 - a, 2 * ell, "(1-alpha)_2l") * poch_den(1 - b, ell, "(1-beta)_l")
    return [Term(1.0 / den, G2Params(a - ell, b - ell, c, d), (ell, ell), (-ell, -ell), ell)]


def _t47(p: G3Params, ell: int, power: bool = True) -> list[Term]:
    a, b = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - b, ell, "(1-beta)_l")
    pw = (-ell, -ell) if power else (0, 0)
    st = (ell, ell) if power else (0, 0)
    return [Term(1.0 / den, G3Params(a - ell, b - ell), st, pw, ell)]


def _t48(p: G1Params, ell: int, power: bool = True) -> list[Term]:
    a, b, c = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - c, ell, "(1-gamma)_l")
    return [Term(_pn(b, ell) / den, G1Params(a - ell, b + ell, c - ell),
                 (ell, 0), (-ell, 0) if power else (0, 0))]


def _t49y(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - b, ell, "(1-beta)_l")
    return [Term(_sgn(ell) * _pn(c, ell) / den, G1Params(a - ell, b - ell, c + ell),
                 (0, ell), (0, -ell))]


def _t49xy(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    return [Term(_sgn(ell) / poch_den(1 - a, ell, "(1-alpha)_l"), G1Params(a - ell, b, c),
                 (ell, ell), (-ell, -ell))]


def _t410x(p: G2Params, ell: int, power: bool = True) -> list[Term]:
    a, b, c, d = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - d, ell, "(1-delta)_l")
    return [Term(_pn(c, ell) / den, G2Params(a - ell, b, c + ell, d - ell),
                 (ell, 0), (-ell, 0) if power else (0, 0))]


def _t410y(p: G2Params, ell: int, power: bool = True, sign: bool = True) -> list[Term]:
    a, b, c, d = p
    den = poch_den(1 - b, ell, "(1-beta)_l") * poch_den(1 - c, ell, "(1-gamma)_l")
    s = _sgn(ell) if sign else 1.0
    return [Term(s * _pn(d, ell) / den, G2Params(a, b - ell, c - ell, d + ell),
                 (0, ell), (0, -ell) if power else (0, 0))]


def _t410xy(p: G2Params, ell: int) -> list[Term]:
    a, b, c, d = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - b, ell, "(1-beta)_l")
    return [Term(1.0 / den, G2Params(a - ell, b - ell, c, d), (ell, ell), (-ell, -ell))]


def _t411x(p: G3Params, ell: int, power: bool = True) -> list[Term]:
    a, b = p
    return [Term(_sgn(ell) * _pn(a, ell) / poch_den(1 - b, 2 * ell, "(1-beta)_2l"),
                 G3Params(a + ell, b - 2 * ell), (ell, 0), (-ell, 0) if power else (0, 0))]


def _t411y(p: G3Params, ell: int, power: bool = True) -> list[Term]:
    a, b = p
    return [Term(_sgn(ell) * _pn(b, ell) / poch_den(1 - a, 2 * ell, "(1-alpha)_2l"),
                 G3Params(a - 2 * ell, b + ell), (0, ell), (0, -ell) if power else (0, 0))]


def _t411xy(p: G3Params, ell: int) -> list[Term]:
    a, b = p
    den = poch_den(1 - a, ell, "(1-alpha)_l") * poch_den(1 - b, ell, "(1-beta)_l")
    return [Term(1.0 / den, G3Params(a - ell, b - ell), (ell, ell), (-ell, -ell))]


def _t413(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    da = _dens((a - 1, "alpha != 1"), (a - 2, "alpha != 2"))
    return [
        Term(b * (b + 1) / (da * _dens((c - 1, "gamma != 1"), (c - 2, "gamma != 2"))),
             G1Params(a - 2, b + 2, c - 2), (2, 0)),
        Term(2.0 / da, G1Params(a - 2, b, c), (1, 1)),
        Term(c * (c + 1) / (da * _dens((b - 1, "beta != 1"), (b - 2, "beta != 2"))),
             G1Params(a - 2, b - 2, c + 2), (0, 2)),
    ]


def _t414(p: G2Params, ell: int) -> list[Term]:
    a, b, c, d = p
    return [
        Term(c * (c + 1) / _dens((a - 1, "alpha != 1"), (a - 2, "alpha != 2"),
                                 (d - 1, "delta != 1"), (d - 2, "delta != 2")),
             G2Params(a - 2, b, c + 2, d - 2), (2, 0)),
        Term(2.0 / _dens((a - 1, "alpha != 1"), (b - 1, "beta != 1")),
             G2Params(a - 1, b - 1, c, d), (1, 1)),
        Term(d * (d + 1) / _dens((b - 1, "beta != 1"), (b - 2, "beta != 2"),
                                 (c - 1, "gamma != 1"), (c - 2, "gamma != 2")),
             G2Params(a, b - 2, c - 2, d + 2), (0, 2)),
    ]


def _t416(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    return [Term(1.0 / poch_den(1 - a, 2 * ell, "(1-alpha)_2l"), G1Params(a - 2 * ell, b, c),
                 falling=ell)]


def _t417(p: G2Params, ell: int) -> list[Term]:
    a, b, c, d = p
    return [Term(1.0 / poch_den(1 - a, 2 * ell, "(1-alpha)_2l"), G2Params(a - 2 * ell, b, c, d),
                 falling=ell)]


def _t420(p: G1Params, ell: int) -> list[Term]:
    a, b, c = p
    # (1-alpha)_l appears twice as stated
    den = poch_den(1 - a, ell, "(1-alpha)_l") ** 2
    return [Term(_pn(c, ell) / den, G1Params(a - ell, b - ell, c + ell), (0, ell))]


_NORM_A = "a(alpha+1) -> alpha(alpha+1)"
_NORM_C = "c(gamma+1) -> gamma(gamma+1)"

FORMS: dict[str, IntegralForm] = {
    f.key: f
    for f in [
        IntegralForm("eq4.2", "g1", "Ihat", _t42, fixed_ell=2,
                     note="third term kept with printed parameters (alpha-2, beta-2, beta+2)"),
        IntegralForm("eq4.3", "g2", "Ihat", _t43, fixed_ell=2),
        IntegralForm("eq4.4", "g3", "Ihat", _t44, fixed_ell=2, normalizations=(_NORM_A,)),
        IntegralForm("eq4.5", "g1", "Ihat", _t45),
        IntegralForm("eq4.6", "g2", "Ihat", _t46),
        IntegralForm("eq4.7", "g3", "Ihat", _t47),
        IntegralForm("eq4.8", "g1", "Ihat_x", _t48),
        IntegralForm("eq4.9:y", "g1", "Ihat_y", _t49y),
        IntegralForm("eq4.9:xy", "g1", "Ihat_xy", _t49xy),
        IntegralForm("eq4.10:x", "g2", "Ihat_x", _t410x),
        IntegralForm("eq4.10:y", "g2", "Ihat_y", _t410y),
        IntegralForm("eq4.10:xy", "g2", "Ihat_xy", _t410xy, normalizations=("c -> gamma",)),
        IntegralForm("eq4.11:x", "g3", "Ihat_x", _t411x),
        IntegralForm("eq4.11:y", "g3", "Ihat_y", _t411y),
        IntegralForm("eq4.11:xy", "g3", "Ihat_xy", _t411xy,
                     normalizations=("(1-alpha)^l -> (1-alpha)_l",)),
        IntegralForm("eq4.13", "g1", "I", _t413, fixed_ell=2),
        IntegralForm("eq4.14", "g2", "I", _t414, fixed_ell=2, normalizations=(_NORM_C,)),
        IntegralForm("eq4.15", "g3", "I", lambda p, ell: _t44(p, ell, power=False), fixed_ell=2,
                     normalizations=(_NORM_A,)),
        IntegralForm("eq4.16", "g1", "I", _t416),
        IntegralForm("eq4.17", "g2", "I", _t417),
        IntegralForm("eq4.18", "g3", "I", lambda p, ell: _t47(p, ell, power=False)),
        IntegralForm("eq4.19", "g1", "I_x", lambda p, ell: _t48(p, ell, power=False)),
        IntegralForm("eq4.20", "g1", "I_y", _t420),
        IntegralForm("eq4.21:x", "g2", "I_x", lambda p, ell: _t410x(p, ell, power=False)),
        IntegralForm("eq4.21:y", "g2", "I_y",
                     lambda p, ell: _t410y(p, ell, power=False, sign=False)),
        IntegralForm("eq4.22:x", "g3", "I_x", lambda p, ell: _t411x(p, ell, power=False),
                     note="stated for Ihat^l; read as I_x^l"),
        IntegralForm("eq4.22:y", "g3", "I_y", lambda p, ell: _t411y(p, ell, power=False),
                     note="stated for Ihat^l; read as I_y^l"),
    ]
}


def _form(key: str) -> IntegralForm:
    try:
        return FORMS[key]
    except KeyError:
        raise KeyError(f"unknown integration formula {key!r}") from None


def _ell(form: IntegralForm, ell: int) -> int:
    return form.fixed_ell if form.fixed_ell is not None else ell


def _inside(p: HornParams, pt: Point) -> None:
    if not domain_check(p.family, pt):
        raise DomainError(f"{pt} lies outside the {p.family.upper()} box")


def thm4_lhs(key: str, p: HornParams, pt: Point, ell: int, tr=None) -> float:
    """Operator image of the truncated series of ``p``, evaluated at ``pt``."""
    form = _form(key)
    _inside(p, pt)
    s, _ = converged_series(p, pt, tr)
    return LHS_OPERATORS[form.operator](s, _ell(form, ell))(pt.x, pt.y)


def _term_grid(t: Term, pt: Point, tr) -> TruncatedSeries:
    _inside(t.params, pt)
    if t.falling:
        return converged_image(t.params, pt, lambda s: falling_theta_sum(s, t.falling), tr)[0]
    return converged_series(t.params, pt, tr)[0]


def thm4_rhs(key: str, p: HornParams, pt: Point, ell: int, tr=None) -> float:
    """The integration formula's right-hand side as stated (after token
    normalisation), including negative powers of x and y."""
    form = _form(key)
    total = []
    for t in form.terms(p, _ell(form, ell)):
        px, py = t.power
        scale = 1.0
        if px:
            scale *= coordinate(pt.x, "x") ** px
        if py:
            scale *= coordinate(pt.y, "y") ** py
        total.append(t.coef * scale * _term_grid(t, pt, tr)(pt.x, pt.y))
    return math.fsum(total)


def thm4_rhs_boundary_corrected(key: str, p: HornParams, pt: Point, ell: int, tr=None) -> float:
    """Right-hand side with the strata m < a or n < b of every term removed,
    the negative powers then applied exactly on the grid."""
    form = _form(key)
    total = []
    for t in form.terms(p, _ell(form, ell)):
        if t.power[0]:
            coordinate(pt.x, "x")
        if t.power[1]:
            coordinate(pt.y, "y")
        g = _term_grid(t, pt, tr).grid
        a, b = t.stratum
        sub = g[a:, b:]
        ox, oy = a + t.power[0], b + t.power[1]
        shifted = np.zeros((sub.shape[0] + ox, sub.shape[1] + oy), dtype=REAL)
        shifted[ox:, oy:] = sub
        poly = TruncatedSeries(t.params.family, t.params, shifted)
        total.append(t.coef * poly(pt.x, pt.y))
    return math.fsum(total)


def boundary_sum(key: str, p: HornParams, pt: Point, ell: int, tr=None) -> float:
    """Difference between stated and boundary-corrected right-hand sides."""
    return thm4_rhs(key, p, pt, ell, tr) - thm4_rhs_boundary_corrected(key, p, pt, ell, tr)


# --------------------------------------------------------------------------
# double integral


@dataclass(frozen=True)
class QuadratureSpec:
    T: float = 60.0
    tol: float = 1e-9
    max_subdivisions: int = 200

    def check(self, alpha: float, beta: float) -> None:
        e = max(alpha, beta) - 1.0
        if -self.T + e * math.log(self.T) >= math.log(1e-18):
            raise ValueError(f"cutoff T={self.T} too small for alpha, beta = {alpha}, {beta}")


def laplace_integrand(alpha: float, beta: float, x: float, y: float) -> Callable[[float, float], float]:
    """Normalised integrand in (t, u)."""
    lg = math.lgamma(alpha) + math.lgamma(beta)

    def f(t: float, u: float) -> float:
        if t <= 0.0 or u <= 0.0:
            return 0.0
        return math.exp(
            -t - u + (alpha - 1.0) * math.log(t) + (beta - 1.0) * math.log(u)
            + u * u * x / t + t * t * y / u - lg
        )

    return f


def _smooth_part(alpha: float, beta: float, x: float, y: float) -> Callable[[float, float], float]:
    """Integrand without the algebraic factors t^(alpha-1) u^(beta-1)."""
    lg = math.lgamma(alpha) + math.lgamma(beta)

    def g(t: float, u: float) -> float:
        if t <= 0.0 or u <= 0.0:
            return 0.0
        return math.exp(-t - u + u * u * x / t + t * t * y / u - lg)

    return g


def _panels(scale: float, T: float) -> list[float]:
    """Breakpoints 0 < scale < 10 scale < ... < 1 < T; the factor
    exp(-scale/s) switches on near s = scale."""
    pts = [0.0]
    c = scale
    while 0.0 < c < 1.0:
        pts.append(c)
        c *= 10.0
    return pts + [1.0, T]


def _quad_alg(fn: Callable[[float], float], power: float, spec: QuadratureSpec, failures: list,
              scale: float = 0.0) -> float:
    """int_0^T fn(s) s^power ds; the endpoint singularity goes to the
    algebraic weight of QUADPACK on the first panel."""
    pts = _panels(scale, spec.T)
    total = 0.0
    for i, (lo, hi) in enumerate(zip(pts, pts[1:])):
        if i == 0:
            g, kw = fn, {"weight": "alg", "wvar": (power, 0.0)}
            # the weight is (s - lo)^power on [lo, hi]
        else:
            g, kw = (lambda s: fn(s) * s**power), {}
        val, err, *rest = integrate.quad(
            g, lo, hi, epsabs=spec.tol / (4 * len(pts)), epsrel=1e-12,
            limit=spec.max_subdivisions, full_output=1, **kw,
        )
        if len(rest) > 1 and err > spec.tol:
            failures.append(err)
        total += val
    return total


def laplace_integral_g3(alpha: float, beta: float, pt: Point, spec: QuadratureSpec | None = None) -> float:
    """Iterated adaptive quadrature of the two-dimensional Laplace-type
    integral over (0, T]^2 for x, y < 0."""
    spec = spec or QuadratureSpec()
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if not (-0.05 <= pt.x < 0 and -0.05 <= pt.y < 0):
        raise DomainError("the integral is only evaluated for -0.05 <= x, y < 0")
    spec.check(alpha, beta)
    g = _smooth_part(alpha, beta, pt.x, pt.y)
    failures: list[float] = []

    def inner(u: float) -> float:
        return _quad_alg(lambda t: g(t, u), alpha - 1.0, spec, failures, u * u * abs(pt.x))

    val = _quad_alg(inner, beta - 1.0, spec, failures, abs(pt.y))
    if failures:
        raise QuadratureFailure(
            f"tolerance {spec.tol} not reached ({len(failures)} failed panels, "
            f"worst error {max(failures):.3g})"
        )
    return val


__all__ = [
    "FORMS",
    "IntegralForm",
    "QuadratureSpec",
    "Term",
    "ZeroCoordinate",
    "add_series",
    "boundary_sum",
    "laplace_integral_g3",
    "op_I",
    "op_I_x",
    "op_I_y",
    "op_Ihat",
    "op_Ihat_x",
    "op_Ihat_xy",
    "op_Ihat_y",
    "thm4_lhs",
    "thm4_rhs",
    "thm4_rhs_boundary_corrected",
]
