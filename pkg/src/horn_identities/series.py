"""Truncated double-series evaluation of the Horn functions G1, G2, G3.

    G1(a, b, c; x, y)    = sum (a)_{m+n} (b)_{n-m} (c)_{m-n} x^m y^n / (m! n!)
    G2(a, b, c, d; x, y) = sum (a)_m (b)_n (c)_{n-m} (d)_{m-n} x^m y^n / (m! n!)
    G3(a, b; x, y)       = sum (a)_{2n-m} (b)_{2m-n} x^m y^n / (m! n!)

Coefficient grids are assembled from one-dimensional tables of *scaled*
Pochhammer symbols, ``(rho)_k / k!`` for k >= 0 and ``(rho)_k |k|!`` for
k < 0, each built by an incremental ratio recurrence, times an exact
combinatorial weight that depends only on the indices.  Nothing of
factorial size is ever formed in floating point, so the grids cannot
overflow in the accepted boxes.

Grids are held in extended precision (:data:`REAL`).  Near a reflected
denominator close to zero the terms can exceed the sum by six orders of
magnitude, and double-precision coefficients alone would then cap the
agreement between two equal series near 1e-9.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Union

import numpy as np

from .errors import DomainError, ExcludedParameter, NonConvergence, PoleError
from .pochhammer import integer_distance, pochhammer

PARAM_MARGIN = 1e-3
DEFAULT_TRUNCATION = 80
TRUNCATION_CAP = 512
DEFAULT_BOX = {"g1": 0.5, "g2": 0.5, "g3": 0.08}

TAIL_ATOL = 1e-14
TAIL_RTOL = 1e-13
_EPS = np.finfo(float).eps
REAL = np.longdouble


def _check_noninteger(name: str, value: float, margin: float = PARAM_MARGIN) -> None:
    if not math.isfinite(value):
        raise ExcludedParameter(f"{name}={value!r} is not finite")
    if value > 0.5 and integer_distance(value) < margin:
        raise ExcludedParameter(
            f"{name}={value!r} is within {margin} of a positive integer"
        )


class _Params:
    family: ClassVar[str]
    guarded: ClassVar[tuple[str, ...]]

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = float(getattr(self, f.name))
            object.__setattr__(self, f.name, v)
            if not math.isfinite(v):
                raise ExcludedParameter(f"{f.name}={v!r} is not finite")
        for name in self.guarded:
            _check_noninteger(name, getattr(self, name))

    def shifted(self, **deltas: float):
        """Copy with integer (or real) shifts added to named parameters."""
        return dataclasses.replace(
            self, **{k: getattr(self, k) + v for k, v in deltas.items()}
        )

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    def __iter__(self):
        return iter(dataclasses.astuple(self))


@dataclass(frozen=True)
class G1Params(_Params):
    alpha: float
    beta: float
    gamma: float
    family: ClassVar[str] = "g1"
    guarded: ClassVar[tuple[str, ...]] = ("beta", "gamma")


@dataclass(frozen=True)
class G2Params(_Params):
    alpha: float
    beta: float
    gamma: float
    delta: float
    family: ClassVar[str] = "g2"
    guarded: ClassVar[tuple[str, ...]] = ("gamma", "delta")


@dataclass(frozen=True)
class G3Params(_Params):
    alpha: float
    beta: float
    family: ClassVar[str] = "g3"
    guarded: ClassVar[tuple[str, ...]] = ("alpha", "beta")


HornParams = Union[G1Params, G2Params, G3Params]
PARAM_TYPES = {"g1": G1Params, "g2": G2Params, "g3": G3Params}


def make_params(family: str, values) -> HornParams:
    cls = PARAM_TYPES[family.lower()]
    return cls(*values)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __iter__(self):
        return iter((self.x, self.y))


@dataclass(frozen=True)
class Truncation:
    M: int = DEFAULT_TRUNCATION
    N: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        for v in (self.M, self.N):
            if v < 0 or v > TRUNCATION_CAP:
                raise ValueError(f"truncation must lie in [0, {TRUNCATION_CAP}]")

    def doubled(self) -> "Truncation":
        return Truncation(min(2 * self.M, TRUNCATION_CAP), min(2 * self.N, TRUNCATION_CAP))


@dataclass(frozen=True)
class SeriesValue:
    value: float
    terms_used: int
    tail_estimate: float
    converged: bool

    def __float__(self) -> float:
        return self.value


# --------------------------------------------------------------------------
# domain boxes


def domain_check_g1(pt: Point, box: float | None = None) -> bool:
    r = DEFAULT_BOX["g1"] if box is None else box
    return math.isfinite(pt.x) and math.isfinite(pt.y) and abs(pt.x) + abs(pt.y) <= r


def domain_check_g2(pt: Point, box: float | None = None) -> bool:
    r = DEFAULT_BOX["g2"] if box is None else box
    return math.isfinite(pt.x) and math.isfinite(pt.y) and max(abs(pt.x), abs(pt.y)) <= r


def domain_check_g3(pt: Point, box: float | None = None) -> bool:
    r = DEFAULT_BOX["g3"] if box is None else box
    return math.isfinite(pt.x) and math.isfinite(pt.y) and max(abs(pt.x), abs(pt.y)) <= r


DOMAIN_CHECKS = {"g1": domain_check_g1, "g2": domain_check_g2, "g3": domain_check_g3}


def domain_check(family: str, pt: Point, box: float | None = None) -> bool:
    return DOMAIN_CHECKS[family](pt, box)


# --------------------------------------------------------------------------
# coefficients from scratch


def _poch(rho: float, k: int) -> float:
    v = pochhammer(rho, k)
    if v.is_pole:
        raise PoleError(f"({rho})_{k} is a pole")
    return v.value


def coeff_g1(p: G1Params, m: int, n: int) -> float:
    return (
        _poch(p.alpha, m + n) * _poch(p.beta, n - m) * _poch(p.gamma, m - n)
        / math.factorial(m) / math.factorial(n)
    )


def coeff_g2(p: G2Params, m: int, n: int) -> float:
    return (
        _poch(p.alpha, m) * _poch(p.beta, n) * _poch(p.gamma, n - m) * _poch(p.delta, m - n)
        / math.factorial(m) / math.factorial(n)
    )


def coeff_g3(p: G3Params, m: int, n: int) -> float:
    return (
        _poch(p.alpha, 2 * n - m) * _poch(p.beta, 2 * m - n)
        / math.factorial(m) / math.factorial(n)
    )


COEFFS = {"g1": coeff_g1, "g2": coeff_g2, "g3": coeff_g3}


# --------------------------------------------------------------------------
# coefficient grids


def scaled_poch_table(rho: float, kmin: int, kmax: int) -> np.ndarray:
    """Array ``S[k - kmin]`` of scaled Pochhammer symbols for kmin <= k <= kmax.

    S_k = (rho)_k / k! for k >= 0 and S_k = (rho)_k |k|! for k < 0; the
    recurrences are S_{k+1} = S_k (rho+k)/(k+1) and
    S_{-(k+1)} = -S_{-k} (k+1)/(1-rho+k).
    """
    kmin = min(kmin, 0)
    kmax = max(kmax, 0)
    out = np.empty(kmax - kmin + 1, dtype=REAL)
    zero = -kmin
    out[zero] = 1.0
    rho = REAL(rho)
    if kmax > 0:
        j = np.arange(kmax, dtype=REAL)
        out[zero + 1:] = np.cumprod((rho + j) / (j + 1.0))
    if kmin < 0:
        j = np.arange(-kmin, dtype=REAL)
        den = 1.0 - rho + j
        if np.any(np.abs(den) < 1e-12):
            raise PoleError(f"({rho})_k has a pole for k >= {kmin}")
        out[:zero][::-1] = np.cumprod(-(j + 1.0) / den)
    return out


_FACT: list[int] = [1]


def _fact(n: int) -> int:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def _to_real(q) -> np.longdouble:
    # two correctly rounded doubles carry more bits than REAL holds
    hi = float(q)
    return REAL(hi) + REAL(float(q - Fraction(hi)))


@lru_cache(maxsize=64)
def _weight(family: str, M: int, N: int) -> np.ndarray:
    """Exact index-only weight grid, rounded once to :data:`REAL`."""
    if family == "g2":
        w = np.ones((M + 1, N + 1), dtype=REAL)
    elif family == "g1":
        w = np.array([[_to_real(math.comb(m + n, m)) for n in range(N + 1)] for m in range(M + 1)],
                     dtype=REAL)
    else:
        w = np.empty((M + 1, N + 1), dtype=REAL)
        for m in range(M + 1):
            for n in range(N + 1):
                a, b = 2 * n - m, 2 * m - n
                num = (_fact(a) if a >= 0 else 1) * (_fact(b) if b >= 0 else 1)
                den = _fact(m) * _fact(n) * (_fact(-a) if a < 0 else 1) * (_fact(-b) if b < 0 else 1)
                w[m, n] = _to_real(Fraction(num, den))
    w.setflags(write=False)
    return w


def _build_grid(p: HornParams, M: int, N: int) -> np.ndarray:
    m = np.arange(M + 1)[:, None]
    n = np.arange(N + 1)[None, :]
    fam = p.family
    if fam == "g1":
        sa = scaled_poch_table(p.alpha, 0, M + N)
        sb = scaled_poch_table(p.beta, -M, N)
        sc = scaled_poch_table(p.gamma, -N, M)
        grid = sa[m + n] * sb[n - m + M] * sc[m - n + N]
    elif fam == "g2":
        sa = scaled_poch_table(p.alpha, 0, M)
        sb = scaled_poch_table(p.beta, 0, N)
        sc = scaled_poch_table(p.gamma, -M, N)
        sd = scaled_poch_table(p.delta, -N, M)
        grid = sa[m] * sb[n] * sc[n - m + M] * sd[m - n + N]
    else:
        sa = scaled_poch_table(p.alpha, -M, 2 * N)
        sb = scaled_poch_table(p.beta, -N, 2 * M)
        grid = sa[2 * n - m + M] * sb[2 * m - n + N]
    grid = grid * _weight(fam, M, N)
    if not np.all(np.isfinite(grid)):
        raise PoleError(f"non-finite coefficient in {fam} grid for {p}")
    return grid


# --------------------------------------------------------------------------
# truncated series


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Explicit coefficient grid c[m][n], 0 <= m <= M, 0 <= n <= N."""

    family: str
    params: HornParams | None
    grid: np.ndarray
    origin: str = ""

    def __post_init__(self):
        g = np.array(self.grid, dtype=REAL)
        if g.ndim != 2:
            raise ValueError("grid must be two-dimensional")
        if not np.all(np.isfinite(g)):
            raise ValueError("grid entries must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)

    @property
    def M(self) -> int:
        return self.grid.shape[0] - 1

    @property
    def N(self) -> int:
        return self.grid.shape[1] - 1

    def derive(self, grid: np.ndarray, note: str) -> "TruncatedSeries":
        origin = f"{note}({self.origin})" if self.origin else note
        return TruncatedSeries(self.family, self.params, grid, origin)

    def terms(self, x: float, y: float) -> np.ndarray:
        xp = np.power(REAL(x), np.arange(self.M + 1))
        yp = np.power(REAL(y), np.arange(self.N + 1))
        return self.grid * np.outer(xp, yp)

    def evaluate(self, pt: Point) -> SeriesValue:
        """Sum the polynomial at ``pt`` (m-major, exactly rounded)."""
        t = self.terms(pt.x, pt.y)
        value = _compensated_sum(t)
        tail = tail_estimate(np.abs(t), value)
        ok = tail <= TAIL_ATOL + TAIL_RTOL * abs(value)
        return SeriesValue(value, t.size, tail, bool(ok))

    def __call__(self, x: float, y: float) -> float:
        return _compensated_sum(self.terms(x, y))


def _compensated_sum(t: np.ndarray) -> float:
    """Exactly rounded sum of the terms that can matter; terms below
    2^-80 of the largest are added as one plain partial sum first.
    Extended-precision terms enter as a double head, summed exactly, and a
    tail added in extended precision."""
    flat = t.ravel()
    a = np.abs(flat)
    big = a >= a.max() * 2.0**-80 if flat.size else a
    small = float(np.sum(flat[~big]))
    hi = flat[big].astype(float)
    # rounding the tails costs at most 2^-53 of 2^-53 per term
    lo = float(np.sum(flat[big] - hi))
    return math.fsum([small, lo] + hi.tolist())


def tail_estimate(abs_terms: np.ndarray, value: float) -> float:
    """Geometric extrapolation of anti-diagonal maxima beyond the last
    complete anti-diagonal, plus a rounding floor."""
    M, N = abs_terms.shape[0] - 1, abs_terms.shape[1] - 1
    D = min(M, N)
    floor = 4.0 * float(_EPS) * abs(value)
    if D == 0:
        rest = abs_terms.copy()
        rest[0, 0] = 0.0
        return float(floor) if not rest.any() else math.inf
    flip = np.fliplr(abs_terms[: D + 1, : D + 1])
    lo = max(D - 4, 0)
    t_hi = float(np.max(flip.diagonal(0)))
    t_lo = float(np.max(flip.diagonal(D - lo)))
    if t_hi == 0.0:
        return float(floor)
    if t_lo == 0.0:
        return math.inf
    q = (t_hi / t_lo) ** (1.0 / (D - lo))
    if q >= 1.0:
        return math.inf
    geo = t_hi * q * ((D + 2) / (1.0 - q) + q / (1.0 - q) ** 2)
    return float(geo + floor)


def _as_truncation(tr) -> Truncation:
    if isinstance(tr, Truncation):
        return tr
    if isinstance(tr, int):
        return Truncation(tr, tr)
    return Truncation(*tr)


@lru_cache(maxsize=1024)
def _series_cached(p: HornParams, M: int, N: int) -> TruncatedSeries:
    return TruncatedSeries(p.family, p, _build_grid(p, M, N), f"{p.family}{tuple(p)}")


def series_grid(p: HornParams, tr=None) -> TruncatedSeries:
    tr = Truncation() if tr is None else _as_truncation(tr)
    return _series_cached(p, tr.M, tr.N)


def converged_series(p: HornParams, pt: Point, tr=None) -> tuple[TruncatedSeries, SeriesValue]:
    """Grid and value at ``pt``.

    With an explicit truncation the grid is used as given.  Without one the
    default (80, 80) is doubled until the tail test passes or the cap is hit.
    """
    if tr is not None:
        s = series_grid(p, tr)
        return s, s.evaluate(pt)
    cur = Truncation()
    while True:
        s = series_grid(p, cur)
        val = s.evaluate(pt)
        if val.converged or (cur.M >= TRUNCATION_CAP and cur.N >= TRUNCATION_CAP):
            return s, val
        cur = cur.doubled()


def evaluate(p: HornParams, pt: Point, tr=None, box: float | None = None) -> SeriesValue:
    if not domain_check(p.family, pt, box):
        raise DomainError(f"{pt} lies outside the {p.family.upper()} box")
    return converged_series(p, pt, tr)[1]


def eval_g1(p: G1Params, pt: Point, tr=None, box: float | None = None) -> SeriesValue:
    if not isinstance(p, G1Params):
        raise TypeError("eval_g1 needs G1Params")
    return evaluate(p, pt, tr, box)


def eval_g2(p: G2Params, pt: Point, tr=None, box: float | None = None) -> SeriesValue:
    if not isinstance(p, G2Params):
        raise TypeError("eval_g2 needs G2Params")
    return evaluate(p, pt, tr, box)


def eval_g3(p: G3Params, pt: Point, tr=None, box: float | None = None) -> SeriesValue:
    if not isinstance(p, G3Params):
        raise TypeError("eval_g3 needs G3Params")
    return evaluate(p, pt, tr, box)


def horn(p: HornParams, x: float, y: float, tr=None) -> float:
    """Shorthand returning only the value."""
    return evaluate(p, Point(x, y), tr).value


# --------------------------------------------------------------------------
# single-variable oracle


def eval_2f1(a: float, b: float, c: float, z: float, tol: float = 1e-17) -> float:
    """Gauss 2F1 by direct partial sums (used only as an oracle)."""
    if not abs(z) < 1:
        raise DomainError("2F1 partial sums need |z| < 1")
    if c < 0.5 and integer_distance(c) < PARAM_MARGIN:
        raise ExcludedParameter(f"c={c!r} is near a non-positive integer")
    terms = [1.0]
    term = running = 1.0
    quiet = 0
    for k in range(10_000):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        terms.append(term)
        running += term
        if term == 0.0:
            return math.fsum(terms)
        quiet = quiet + 1 if abs(term) < tol * abs(running) else 0
        if quiet >= 2:
            return math.fsum(terms)
    raise NonConvergence("2F1 partial sums did not settle in 10^4 terms")
