import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horn_identities.errors import PoleError
from horn_identities.pochhammer import (
    log_gamma,
    poch_ratio,
    poch_shift_identity_2m_minus_l,
    poch_shift_identity_m_minus_l,
    pochhammer,
)

from conftest import noninteger


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_log_gamma_examples():
    assert log_gamma(1.0) == (0.0, 1)
    lg, s = log_gamma(5.0)
    assert s == 1 and math.isclose(lg, math.log(24.0), rel_tol=1e-15)
    lg, s = log_gamma(-0.5)
    assert s == -1 and math.isclose(lg, math.log(2 * math.sqrt(math.pi)), rel_tol=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0, -3.0 + 1e-11])
def test_log_gamma_poles(x):
    with pytest.raises(PoleError):
        log_gamma(x)


def test_log_gamma_accuracy_against_mpmath():
    for x in np.linspace(0.1, 50, 157):
        lg, s = log_gamma(float(x))
        ref = mpmath.gamma(float(x))
        assert rel(s * math.exp(lg), float(ref)) < 1e-13


def test_pochhammer_examples():
    assert pochhammer(0.37, 0).value == 1.0
    assert pochhammer(3.0, 2).value == 12.0
    v = pochhammer(0.5, -2)
    assert not v.is_pole and v.value == pytest.approx(4.0 / 3.0, rel=1e-15)
    ratio = mpmath.gamma(0.5 - 2) / mpmath.gamma(0.5)
    assert rel(v.value, float(ratio)) < 1e-14
    assert pochhammer(2.0, -3).is_pole


def test_pole_value_not_usable():
    with pytest.raises(PoleError):
        float(pochhammer(2.0, -3))


@pytest.mark.parametrize("rho", [1.0, 2.0, 3.0])
def test_poles_flagged_exactly(rho):
    # pole iff k < 0 and rho in {1, ..., |k|}
    for k in range(-5, 6):
        assert pochhammer(rho, k).is_pole == (k < 0 and rho <= -k)


def test_nonpositive_integer_rho_gives_zero_not_pole():
    assert pochhammer(-2.0, 3).value == 0.0
    assert pochhammer(-2.0, 2).value == 2.0
    assert not pochhammer(0.0, -2).is_pole


def test_large_shift_matches_mpmath():
    for rho, k in [(0.3, 45), (2.7, 100), (-3.4, 60), (1.5, -40), (-0.25, -70)]:
        assert rel(pochhammer(rho, k).value, float(mpmath.rf(rho, k))) < 1e-12


def test_shift_identity_examples():
    assert poch_shift_identity_m_minus_l(0.9, 2, 3).value == 0.0
    assert poch_shift_identity_m_minus_l(0.7, 3, 0).value == pytest.approx(pochhammer(0.7, 3).value, rel=1e-15)
    assert poch_shift_identity_m_minus_l(0.7, 3, 2).value == pytest.approx(pochhammer(0.7, 1).value, rel=1e-14)
    assert poch_shift_identity_2m_minus_l(0.9, 1, 3).value == 0.0
    assert poch_shift_identity_2m_minus_l(0.7, 2, 0).value == pytest.approx(pochhammer(0.7, 4).value, rel=1e-15)
    assert poch_shift_identity_2m_minus_l(0.7, 2, 3).value == pytest.approx(pochhammer(0.7, 1).value, rel=1e-14)


def test_shift_identity_zero_branch_contradicts_reflection():
    # for l > m the identity returns 0 while the Gamma ratio does not vanish
    assert poch_shift_identity_m_minus_l(0.7, 1, 3).value == 0.0
    assert pochhammer(0.7, -2).value != 0.0


def test_poch_ratio_examples():
    assert poch_ratio(0.3, 4, 0) == 1.0
    assert poch_ratio(0.3, 2, 1) == pytest.approx(2.3, rel=1e-15)
    direct = pochhammer(0.3, -1).value / pochhammer(0.3, 1).value
    assert rel(poch_ratio(0.3, 1, -2), direct) < 1e-13
    with pytest.raises(PoleError):
        poch_ratio(2.0, 0, -3)


def test_cocycle_random(rng):
    for _ in range(1000):
        rho = noninteger(rng, -4.0, 4.0)
        k, j = (int(v) for v in rng.integers(-12, 13, size=2))
        lhs = pochhammer(rho, k).value * pochhammer(rho + k, j).value
        assert rel(lhs, pochhammer(rho, k + j).value) < 1e-12


def test_reflection_random(rng):
    for _ in range(1000):
        rho = noninteger(rng, -4.0, 4.0)
        ell = int(rng.integers(1, 25))
        expect = (-1) ** ell / pochhammer(1 - rho, ell).value
        assert rel(pochhammer(rho, -ell).value, expect) < 1e-12


def test_shift_identities_random(rng):
    for _ in range(1000):
        rho = noninteger(rng, -4.0, 4.0)
        m = int(rng.integers(0, 20))
        ell = int(rng.integers(0, m + 1))
        assert rel(poch_shift_identity_m_minus_l(rho, m, ell).value, pochhammer(rho, m - ell).value) < 1e-12
        ell2 = int(rng.integers(0, 2 * m + 1))
        assert rel(poch_shift_identity_2m_minus_l(rho, m, ell2).value, pochhammer(rho, 2 * m - ell2).value) < 1e-12


def test_unit_step_identities_random(rng):
    for _ in range(1000):
        rho = noninteger(rng, -4.0, 4.0)
        m = int(rng.integers(0, 30))
        p = lambda r, k: pochhammer(r, k).value
        assert rel(p(rho, m + 1), rho * p(rho + 1, m)) < 1e-12
        assert rel(p(rho, m + 1), (rho + m) * p(rho, m)) < 1e-12
        assert rel(p(rho, m - 1), p(rho - 1, m) / (rho - 1)) < 1e-12
        assert rel(p(rho + 1, m), (1 + m / rho) * p(rho, m)) < 1e-12
        assert rel(p(rho - 1, m), (rho - 1) * p(rho, m - 1)) < 1e-12
        assert rel(p(rho - 1, m), (rho - 1) / (rho + m - 1) * p(rho, m)) < 1e-12


@given(st.floats(-5, 5).filter(lambda r: abs(r - round(r)) > 1e-3), st.integers(-15, 15), st.integers(-15, 15))
def test_ratio_matches_quotient(rho, k, j):
    direct = pochhammer(rho, k + j).value / pochhammer(rho, k).value
    assert rel(poch_ratio(rho, k, j), direct) < 1e-12
