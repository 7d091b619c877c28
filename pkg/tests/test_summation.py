import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from horn_identities.errors import DomainError
from horn_identities.series import G1Params, G2Params, G3Params, Point, horn
from horn_identities.summation import (
    RESCALINGS,
    SummationCase,
    summation_lhs,
    summation_rhs,
)

from oracles import horn_mp

PARAMS = {"g1": G1Params(0.3, 0.4, 0.5), "g2": G2Params(0.3, 0.4, 0.5, 0.6), "g3": G3Params(0.3, 0.4)}
POINTS = {"g1": Point(0.1, -0.12), "g2": Point(0.15, -0.2), "g3": Point(0.02, -0.015)}


def rel(a, b):
    return abs(a - b) / (abs(b) + 1e-30)


def test_case_validation():
    with pytest.raises(ValueError):
        SummationCase("delta", PARAMS["g1"], POINTS["g1"], 0.1)
    with pytest.raises(ValueError):
        SummationCase("alpha", PARAMS["g1"], POINTS["g1"], 0.25)
    with pytest.raises(ValueError):
        SummationCase("alpha", PARAMS["g1"], POINTS["g1"], 0.1, L=-1)


def test_rescaled_point_g3_alpha():
    q = SummationCase("alpha", PARAMS["g3"], Point(0.02, 0.03), 0.1).rescaled_point()
    assert q.x == pytest.approx(0.02 * 0.9) and q.y == pytest.approx(0.03 / 0.81)


@pytest.mark.parametrize("fam, axis", sorted(RESCALINGS))
def test_t_zero_is_the_function(fam, axis):
    p, pt = PARAMS[fam], POINTS[fam]
    c = SummationCase(axis, p, pt, 0.0)
    f = horn(p, *pt)
    assert summation_lhs(c).value == f
    assert summation_rhs(c) == f


@pytest.mark.parametrize("fam, axis", sorted(RESCALINGS))
def test_origin_is_binomial_series(fam, axis):
    p = PARAMS[fam]
    c = SummationCase(axis, p, Point(0.0, 0.0), 0.1)
    rho = getattr(p, axis)
    assert summation_lhs(c).value == pytest.approx(0.9 ** (-rho), rel=1e-12)


def test_g3_alpha_example():
    c = SummationCase("alpha", G3Params(0.3, 0.4), Point(0.02, 0.02), 0.1, L=40)
    assert rel(summation_lhs(c).value, summation_rhs(c)) <= 1e-8


def test_g3_alpha_rhs_against_mpmath():
    c = SummationCase("alpha", G3Params(0.3, 0.4), Point(0.02, 0.02), 0.1, L=40)
    q = c.rescaled_point()
    ref = 0.9 ** -0.3 * horn_mp("g3", [0.3, 0.4], q.x, q.y)
    assert rel(summation_rhs(c), ref) <= 1e-10


def test_g2_alpha_keeps_y():
    p = PARAMS["g2"]
    c = SummationCase("alpha", p, Point(0.0, 0.3), 0.12)
    assert summation_rhs(c) == pytest.approx(0.88 ** (-p.alpha) * horn(p, 0.0, 0.3), rel=1e-15)


@pytest.mark.parametrize("t", [0.15, -0.15])
def test_g1_beta_both_signs(t):
    c = SummationCase("beta", PARAMS["g1"], POINTS["g1"], t)
    v = summation_lhs(c)
    assert v.converged
    assert rel(v.value, summation_rhs(c)) <= 1e-8


@pytest.mark.parametrize("fam, axis", sorted(RESCALINGS))
def test_tail_dominance(fam, axis):
    c = SummationCase(axis, PARAMS[fam], POINTS[fam], 0.2, L=24)
    short = summation_lhs(c)
    long_ = summation_lhs(dataclasses.replace(c, L=48))
    assert short.converged
    assert abs(short.value - long_.value) <= short.tail_estimate


def test_rhs_outside_box():
    c = SummationCase("beta", PARAMS["g3"], Point(0.075, 0.0), 0.2)
    with pytest.raises(DomainError):
        summation_rhs(c)
    with pytest.raises(DomainError):
        summation_lhs(SummationCase("beta", PARAMS["g3"], Point(0.2, 0.0), 0.1))


@given(
    key=st.sampled_from(sorted(RESCALINGS)),
    t=st.floats(0.01, 0.2),
    u=st.floats(-0.8, 0.8), v=st.floats(-0.8, 0.8),
)
def test_sign_of_t_does_not_matter(key, t, u, v):
    fam, axis = key
    r = {"g1": 0.2, "g2": 0.3, "g3": 0.05}[fam]
    pt = Point(u * r, v * r)
    for s in (t, -t):
        c = SummationCase(axis, PARAMS[fam], pt, s, L=48)
        assert rel(summation_lhs(c).value, summation_rhs(c)) <= 1e-8
