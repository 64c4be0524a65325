"""Exception hierarchy shared by every module."""


class FriedrichsError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(FriedrichsError, ValueError):
    """A model or run parameter is outside its accepted range."""


class DomainError(FriedrichsError, ValueError):
    """An argument lies outside the domain of the requested function."""


class PoleError(DomainError):
    """Evaluation requested at a pole of the form factor."""


class OutOfBoxError(DomainError):
    """A position lies outside the quantization box."""


class QuadratureError(FriedrichsError, ArithmeticError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ConvergenceError(FriedrichsError, ArithmeticError):
    """An iteration ran out of steps before converging."""


class WrongBasinError(ConvergenceError):
    """The root finder converged to a root far from the expected one."""


class NumericalError(FriedrichsError, ArithmeticError):
    """Non-finite values appeared in an input or intermediate result."""


class GridMismatchError(FriedrichsError, ValueError):
    """Sampled functions that must share a grid do not."""


class MissingConstituentError(FriedrichsError, ValueError):
    """A restriction case lacks a function it needs."""


class GridTooNarrowWarning(UserWarning):
    """A sampled function is not small at the edges of its grid."""


class ResolutionWarning(UserWarning):
    """A discretization parameter under-resolves the model."""
