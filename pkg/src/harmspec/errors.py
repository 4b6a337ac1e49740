"""Exception hierarchy shared by all modules."""


class HarmspecError(Exception):
    """Base class for errors raised by harmspec."""


class DomainError(HarmspecError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class MismatchError(HarmspecError, ValueError):
    """Inputs that must agree (exponents, dimensions, centres) do not."""


class ContainmentError(HarmspecError, ValueError):
    """A required geometric containment between domains does not hold."""


class InfeasibleCoverError(HarmspecError):
    """No relative cover could be built with the requested parameters."""


class NumericalRankError(HarmspecError, ArithmeticError):
    """A Gram matrix expected to be positive definite is numerically singular."""


class QuadratureError(HarmspecError, ArithmeticError):
    """Quadrature refinement did not reach the requested tolerance."""


class HarmonicSpaceError(HarmspecError, AssertionError):
    """Internal self-check on a harmonic polynomial space failed."""
