"""Exception hierarchy shared by all ternary_forge modules."""


class TernaryForgeError(Exception):
    pass


class DomainError(TernaryForgeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(TernaryForgeError, ValueError):
    """Request exceeds a documented implementation cap."""


class UnsupportedError(TernaryForgeError, ValueError):
    pass


class PrecisionError(TernaryForgeError, ValueError):
    """Requested tolerance is below what double precision can certify."""


class InterpretationError(TernaryForgeError, ArithmeticError):
    """A closed form evaluated to a non-integer where an integer count is expected."""


class CoefficientOverflowError(TernaryForgeError, OverflowError):
    pass


class InvariantViolation(TernaryForgeError, AssertionError):
    """Two independent computations of the same quantity disagree (an implementation bug)."""


class TheoremViolation(TernaryForgeError, AssertionError):
    """A proven coefficient bound failed on computed data (an implementation bug)."""
