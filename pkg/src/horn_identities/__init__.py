"""Horn hypergeometric functions G1, G2, G3 and a verification harness
for their recursions, operator identities and summation formulas."""

from .errors import (
    DomainError,
    ExcludedParameter,
    HornError,
    NonConvergence,
    NotFound,
    PoleError,
    QuadratureFailure,
    SamplingExhausted,
    ZeroCoordinate,
)
from .pochhammer import PochValue, log_gamma, pochhammer
from .series import (
    G1Params,
    G2Params,
    G3Params,
    Point,
    SeriesValue,
    Truncation,
    TruncatedSeries,
    eval_g1,
    eval_g2,
    eval_g3,
    horn,
)

__all__ = [
    "DomainError",
    "ExcludedParameter",
    "G1Params",
    "G2Params",
    "G3Params",
    "HornError",
    "NonConvergence",
    "NotFound",
    "PochValue",
    "PoleError",
    "Point",
    "QuadratureFailure",
    "SamplingExhausted",
    "SeriesValue",
    "TruncatedSeries",
    "Truncation",
    "ZeroCoordinate",
    "eval_g1",
    "eval_g2",
    "eval_g3",
    "horn",
    "log_gamma",
    "pochhammer",
]
