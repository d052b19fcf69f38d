class BesselPosError(Exception):
    """Base class for all errors raised by besselpos."""


class DomainError(BesselPosError, ValueError):
    """A parameter violates the domain of the requested operation."""


class MissingParameterError(DomainError):
    """A region or kernel needs a parameter that was not supplied."""


class PoleError(BesselPosError, ZeroDivisionError):
    """A denominator Pochhammer symbol or gamma argument hits a pole."""


class PrecisionLossError(BesselPosError, ArithmeticError):
    """Cancellation in an alternating series destroyed the working precision."""


class ConvergenceError(BesselPosError, RuntimeError):
    """Quadrature, root bracketing or series summation failed to converge."""


class NotPositiveDefiniteError(BesselPosError, ArithmeticError):
    """Cholesky factorization met a pivot below the tolerance.

    Attributes
    ----------
    pivot : float
        The offending pivot.
    index : int
        Its row.
    """

    def __init__(self, message: str, pivot: float, index: int):
        super().__init__(message)
        self.pivot = pivot
        self.index = index
