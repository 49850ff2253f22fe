"""Exception types raised across the package."""


class DistillError(Exception):
    pass


class OutOfRange(DistillError, ValueError):
    pass


class DimensionMismatch(DistillError, ValueError):
    pass


class NonUnitary(DistillError, ValueError):
    pass


class InvalidState(DistillError, ValueError):
    pass


class ZeroSuccessProbability(DistillError, ArithmeticError):
    """Post-selection accepts with (numerically) zero probability."""


class Unclassified(DistillError):
    """A noise type whose curve matches none of the four class curves."""


class EmptyInterval(DistillError):
    """No input fidelity yields a positive fidelity increment."""
