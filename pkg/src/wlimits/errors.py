"""Exception types shared across the laboratory.

Construction-time contract violations are ``SpecValidationError`` (a
``ValueError``); runtime numerical aborts are ``ArithmeticError`` subclasses
so callers can map them to a distinct exit code.
"""


class LabError(Exception):
    """Base class for all laboratory errors."""


class SpecValidationError(LabError, ValueError):
    """Inputs violate a construction contract (parameter ranges, shapes)."""


class DimensionMismatchError(SpecValidationError):
    """A point, region, or factor has the wrong dimension."""


class SingularPointError(LabError, ArithmeticError):
    """A weight was evaluated exactly on its singular set."""


class MassIndistinguishableFromZeroError(LabError, ArithmeticError):
    """A mass estimate is consistent with zero, so a negative power of it
    would be meaningless."""


class InsufficientDivergenceError(LabError, ArithmeticError):
    """The annulus budget ran out before enough witness blocks were found."""


class PreconditionError(LabError, ArithmeticError):
    """A documented precondition on the inputs does not hold (for example a
    construction that requires a divergent capacity series)."""
