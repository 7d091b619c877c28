import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horn_identities.errors import DomainError, ExcludedParameter, NonConvergence
from horn_identities.series import (
    COEFFS,
    G1Params,
    G2Params,
    G3Params,
    Point,
    Truncation,
    coeff_g1,
    coeff_g2,
    coeff_g3,
    domain_check_g1,
    domain_check_g2,
    domain_check_g3,
    eval_2f1,
    eval_g1,
    eval_g2,
    eval_g3,
    evaluate,
    horn,
    make_params,
    scaled_poch_table,
    series_grid,
)

from conftest import noninteger
from oracles import horn_mp

P1 = G1Params(0.3, 0.4, 0.5)
P2 = G2Params(0.3, 0.4, 0.5, 0.6)
P3 = G3Params(0.3, 0.4)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_params(rng, family):
    n = {"g1": 3, "g2": 4, "g3": 2}[family]
    return make_params(family, [noninteger(rng) for _ in range(n)])


def random_point(rng, family, shrink=1.0):
    r = {"g1": 0.5, "g2": 0.5, "g3": 0.08}[family] * shrink
    while True:
        x, y = rng.uniform(-r, r, size=2)
        if family != "g1" or abs(x) + abs(y) <= r:
            return Point(x, y)


# --------------------------------------------------------------------------
# coefficients


def test_coefficient_examples():
    for p, f in [(P1, coeff_g1), (P2, coeff_g2), (P3, coeff_g3)]:
        assert f(p, 0, 0) == 1.0
    assert coeff_g1(P1, 1, 0) == pytest.approx(-0.25, rel=1e-15)
    assert coeff_g1(P1, 1, 1) == pytest.approx(0.39, rel=1e-15)
    a, b, c, d = P2
    assert coeff_g2(P2, 1, 0) == pytest.approx(-a * d / (1 - c), rel=1e-15)
    assert coeff_g2(P2, 0, 1) == pytest.approx(-b * c / (1 - d), rel=1e-15)
    a, b = P3
    assert coeff_g3(P3, 1, 0) == pytest.approx(-b * (b + 1) / (1 - a), rel=1e-15)
    assert coeff_g3(P3, 1, 1) == pytest.approx(a * b, rel=1e-15)


def test_scaled_table_matches_definition():
    t = scaled_poch_table(0.37, -6, 9)
    for k in range(-6, 10):
        from horn_identities.pochhammer import pochhammer
        ref = pochhammer(0.37, k).value
        ref = ref / math.factorial(k) if k >= 0 else ref * math.factorial(-k)
        assert rel(t[k + 6], ref) < 1e-13


@pytest.mark.parametrize("family", ["g1", "g2", "g3"])
def test_grid_matches_from_scratch_coefficients(rng, family):
    for _ in range(5):
        p = random_params(rng, family)
        g = series_grid(p, (40, 40)).grid
        f = COEFFS[family]
        for m in range(41):
            for n in range(41):
                ref = f(p, m, n)
                assert abs(g[m, n] - ref) <= 1e-11 * abs(ref) + 1e-300


def test_parameter_invariants():
    with pytest.raises(ExcludedParameter):
        G1Params(0.3, 2.0005, 0.5)
    with pytest.raises(ExcludedParameter):
        G2Params(0.3, 0.4, 0.5, 3.0)
    with pytest.raises(ExcludedParameter):
        G3Params(1.0, 0.4)
    G1Params(2.0, 0.4, 0.5)  # alpha is unrestricted
    G3Params(-1.5, 0.4)


# --------------------------------------------------------------------------
# domain boxes


def test_domain_examples():
    assert domain_check_g1(Point(0.2, 0.2))
    assert not domain_check_g1(Point(0.4, 0.3))
    assert domain_check_g2(Point(0.5, -0.5))
    assert not domain_check_g2(Point(0.51, 0.0))
    assert domain_check_g3(Point(0.05, -0.05))
    assert not domain_check_g3(Point(0.09, 0.0))
    assert not domain_check_g1(Point(math.nan, 0.0))


def test_domain_error():
    with pytest.raises(DomainError):
        eval_g1(P1, Point(0.4, 0.3))
    with pytest.raises(TypeError):
        eval_g1(P2, Point(0.1, 0.1))


# --------------------------------------------------------------------------
# values


def test_origin_is_exactly_one():
    for p, f in [(P1, eval_g1), (P2, eval_g2), (P3, eval_g3)]:
        v = f(p, Point(0.0, 0.0))
        assert v.value == 1.0 and v.converged


def test_brute_force_example():
    pt = Point(0.1, 0.05)
    v = eval_g1(P1, pt, Truncation(80, 80))
    brute = math.fsum(
        coeff_g1(P1, m, n) * pt.x**m * pt.y**n for m in range(81) for n in range(81)
    )
    assert rel(v.value, brute) < 1e-12
    assert v.terms_used == 81 * 81


@pytest.mark.parametrize("family", ["g1", "g2", "g3"])
def test_against_mpmath(rng, family):
    for _ in range(6):
        p = random_params(rng, family)
        pt = random_point(rng, family, 0.8)
        assert rel(horn(p, pt.x, pt.y), horn_mp(family, tuple(p), pt.x, pt.y)) < 1e-12


def test_axis_reductions(rng):
    for _ in range(40):
        a, b, c, d = (noninteger(rng) for _ in range(4))
        x = float(rng.uniform(-0.5, 0.5))
        # G1(x, 0) = 2F1(a, c; 1-b; -x)
        assert rel(horn(G1Params(a, b, c), x, 0.0), eval_2f1(a, c, 1 - b, -x)) < 1e-10
        # G2(x, 0) = 2F1(a, d; 1-c; -x), G2(0, y) = 2F1(b, c; 1-d; -y)
        assert rel(horn(G2Params(a, b, c, d), x, 0.0), eval_2f1(a, d, 1 - c, -x)) < 1e-10
        assert rel(horn(G2Params(a, b, c, d), 0.0, x), eval_2f1(b, c, 1 - d, -x)) < 1e-10


def test_g3_axis_reduction(rng):
    for _ in range(40):
        a, b = noninteger(rng), noninteger(rng)
        x = float(rng.uniform(-0.08, 0.08))
        terms = [mpmath.rf(b, 2 * m) * (-1) ** m / mpmath.rf(1 - a, m) * mpmath.mpf(x) ** m / mpmath.factorial(m)
                 for m in range(200)]
        assert rel(horn(G3Params(a, b), x, 0.0), float(mpmath.fsum(terms))) < 1e-10


def test_two_f1_examples():
    assert eval_2f1(0.3, 0.5, 0.6, 0.0) == 1.0
    z = 0.25
    assert rel(eval_2f1(1, 1, 2, z), -math.log(1 - z) / z) < 1e-14
    assert rel(eval_2f1(0.3, 0.5, 0.6, -0.1), float(mpmath.hyp2f1(0.3, 0.5, 0.6, -0.1))) < 1e-14
    for beta in (0.4, 1.7, 2.9):
        assert rel(eval_2f1(0.3, 0.5, 1 - beta, -0.1), horn(G1Params(0.3, beta, 0.5), 0.1, 0.0)) < 1e-12
    with pytest.raises(DomainError):
        eval_2f1(1, 1, 2, 1.0)
    with pytest.raises(ExcludedParameter):
        eval_2f1(1, 1, -2.0, 0.5)


def test_two_f1_nonconvergence():
    with pytest.raises(NonConvergence):
        eval_2f1(1, 1, 1.5, 0.9999999)


# --------------------------------------------------------------------------
# properties


def test_determinism():
    pt = Point(0.21, -0.17)
    a = evaluate(P2, pt)
    b = evaluate(G2Params(*P2), pt)
    assert a == b


def test_truncation_monotonicity(rng):
    families = ["g1", "g2", "g3"]
    for i in range(500):
        fam = families[i % 3]
        p = random_params(rng, fam)
        pt = random_point(rng, fam)
        M = int(rng.integers(15, 45))
        lo = series_grid(p, (M, M)).evaluate(pt)
        hi = series_grid(p, (2 * M, 2 * M)).evaluate(pt)
        if math.isfinite(lo.tail_estimate):
            assert abs(lo.value - hi.value) <= lo.tail_estimate


def test_auto_truncation_converges_near_box_edge():
    p = G2Params(40.5, 0.3, 0.7, 1.3)
    pt = Point(-0.5, 0.0)
    v = evaluate(p, pt)
    assert v.converged and v.terms_used > 81 * 81
    ref = float(mpmath.hyp2f1(40.5, 1.3, 1 - 0.7, 0.5))
    assert rel(v.value, ref) < 1e-12
    assert not series_grid(p, (80, 80)).evaluate(pt).converged


@given(st.floats(0.2, 3.5), st.floats(0.2, 3.5), st.floats(-0.08, 0.08), st.floats(-0.08, 0.08))
def test_g3_symmetry(a, b, x, y):
    if min(abs(a - round(a)), abs(b - round(b))) < 1e-3:
        return
    lhs = horn(G3Params(a, b), x, y)
    rhs = horn(G3Params(b, a), y, x)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_grid_read_only():
    g = series_grid(P3, (10, 10)).grid
    with pytest.raises(ValueError):
        g[0, 0] = 2.0


def test_truncation_cap():
    with pytest.raises(ValueError):
        Truncation(513, 10)
    assert Truncation(300, 300).doubled() == Truncation(512, 512)
