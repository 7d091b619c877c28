"""Exception hierarchy shared by the evaluators and the harness."""


class HornError(Exception):
    """Base class for every error raised by this package."""


class PoleError(HornError, ZeroDivisionError):
    """A Gamma or Pochhammer factor sits on a pole."""


class DomainError(HornError, ValueError):
    """An evaluation point lies outside the accepted convergence box."""


class ExcludedParameter(HornError, ValueError):
    """A parameter violates a side condition of the formula being evaluated."""


class ZeroCoordinate(HornError, ValueError):
    """A coordinate is zero but appears in a denominator."""


class NonConvergence(HornError, ArithmeticError):
    pass


class QuadratureFailure(HornError, ArithmeticError):
    pass


class SamplingExhausted(HornError, RuntimeError):
    pass


class NotFound(HornError, KeyError):
    pass
