"""Contiguous relations and l-step recursions for G3 in alpha and beta."""

from __future__ import annotations

from dataclasses import dataclass

from .guards import nonzero
from .series import G3Params, Point, horn

MAX_ELL = 8


@dataclass(frozen=True)
class RecursionCase:
    params: G3Params
    point: Point
    ell: int

    def __post_init__(self):
        if not 1 <= self.ell <= MAX_ELL:
            raise ValueError(f"ell must lie in [1, {MAX_ELL}]")


def g3_contig_alpha_up_rhs(p: G3Params, pt: Point, tr=None) -> float:
    """Right side for G3(a+1, b) = G3 + 2(a+1)y/(b-1) G3(a+2, b-1)
    - b(b+1)x/(a(a-1)) G3(a-1, b+2)."""
    a, b = p.alpha, p.beta
    c1 = 2.0 * (a + 1.0) * pt.y / nonzero(b - 1.0, "beta != 1")
    c2 = b * (b + 1.0) * pt.x / (nonzero(a, "alpha != 0") * nonzero(a - 1.0, "alpha != 1"))
    return (
        horn(p, pt.x, pt.y, tr)
        + c1 * horn(G3Params(a + 2.0, b - 1.0), pt.x, pt.y, tr)
        - c2 * horn(G3Params(a - 1.0, b + 2.0), pt.x, pt.y, tr)
    )


def g3_contig_beta_up_rhs(p: G3Params, pt: Point, tr=None) -> float:
    """Mirror image of :func:`g3_contig_alpha_up_rhs`; the printed leading
    factor ``a(alpha+1)`` of the last term is read as alpha(alpha+1)."""
    a, b = p.alpha, p.beta
    c1 = 2.0 * (b + 1.0) * pt.x / nonzero(a - 1.0, "alpha != 1")
    c2 = a * (a + 1.0) * pt.y / (nonzero(b, "beta != 0") * nonzero(b - 1.0, "beta != 1"))
    return (
        horn(p, pt.x, pt.y, tr)
        + c1 * horn(G3Params(a - 1.0, b + 2.0), pt.x, pt.y, tr)
        - c2 * horn(G3Params(a + 2.0, b - 1.0), pt.x, pt.y, tr)
    )


def g3_recursion_alpha_rhs(case: RecursionCase, tr=None) -> float:
    p, pt, ell = case.params, case.point, case.ell
    a, b = p.alpha, p.beta
    up = sum(
        (a + s) * horn(G3Params(a + s + 1.0, b - 1.0), pt.x, pt.y, tr)
        for s in range(1, ell + 1)
    )
    down = sum(
        horn(G3Params(a + s - 2.0, b + 2.0), pt.x, pt.y, tr)
        / (nonzero(a + s - 1.0, "alpha != 1-s") * nonzero(a + s - 2.0, "alpha != 2-s"))
        for s in range(1, ell + 1)
    )
    return (
        horn(p, pt.x, pt.y, tr)
        + 2.0 * pt.y / nonzero(b - 1.0, "beta != 1") * up
        - b * (b + 1.0) * pt.x * down
    )


def g3_recursion_beta_rhs(case: RecursionCase, tr=None) -> float:
    p, pt, ell = case.params, case.point, case.ell
    a, b = p.alpha, p.beta
    up = sum(
        (b + s) * horn(G3Params(a - 1.0, b + s + 1.0), pt.x, pt.y, tr)
        for s in range(1, ell + 1)
    )
    down = sum(
        horn(G3Params(a + 2.0, b + s - 2.0), pt.x, pt.y, tr)
        / (nonzero(b + s - 1.0, "beta != 1-s") * nonzero(b + s - 2.0, "beta != 2-s"))
        for s in range(1, ell + 1)
    )
    return (
        horn(p, pt.x, pt.y, tr)
        + 2.0 * pt.x / nonzero(a - 1.0, "alpha != 1") * up
        - a * (a + 1.0) * pt.y * down
    )
