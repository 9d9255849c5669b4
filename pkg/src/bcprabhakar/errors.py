"""Exception hierarchy.

Two families: :class:`ValidationError` for violated preconditions (bad
parameters, malformed input) and :class:`NumericalError` for computations
that could not reach the requested accuracy.  The CLI maps them to exit
codes 2 and 3 respectively.
"""


class BicomplexError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BicomplexError, ValueError):
    """A precondition on the inputs is violated."""


class NumericalError(BicomplexError, ArithmeticError):
    """A numerical procedure failed to meet its accuracy contract."""


class ZeroDivisorDivision(ValidationError, ZeroDivisionError):
    """Division by zero or by a proper zero divisor (a point of the null cone).

    ``component`` is 1 or 2 for a zero divisor, ``None`` for the zero element.
    """

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class ZeroDivisorBase(ValidationError):
    """Non-integer power of a base lying on the null cone."""


class GammaPole(ValidationError):
    """Gamma function evaluated at a nonpositive integer."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class DomainError(ValidationError):
    """Argument outside the domain of a function (e.g. t <= 0 for a kernel)."""


class InvalidOrder(ValidationError):
    """Operator order or ML parameter fails the validity condition."""


class MismatchedCeil(InvalidOrder):
    """The two idempotent components of an order have different ceilings."""


class GridTooCoarse(ValidationError):
    """Too few grid points for the requested differentiation order."""


class OutsideRegion(ValidationError):
    """Laplace variable outside the convergence half-plane a0 > M + |a3|."""


class RegionViolation(ValidationError):
    """Laplace variable violates |r xi^-m|_j < 1."""


class ArityMismatch(ValidationError):
    """Wrong number of initial values for the derivative order."""


class NonConvergent(NumericalError):
    """A series did not converge within its term budget or domain guard."""


class QuadratureFailure(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class InversionUnstable(NumericalError):
    """Numerical Laplace inversion failed its node-doubling self-check."""


class MalformedInput(ValidationError):
    """A CSV or JSON input does not follow its schema."""
