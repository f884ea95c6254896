"""Exception types shared across the package."""


class ProdnetError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(ProdnetError):
    """Table body is not square, a row is ragged, or codes are malformed."""


class DuplicateCodeError(ProdnetError):
    """The same industry code appears more than once in a table."""


class CapacityError(ProdnetError):
    """Requested edge count exceeds what a simple directed graph can hold."""


class EmptySampleError(ProdnetError):
    """An operation that needs a non-empty sample received none."""


class RangeError(ProdnetError):
    """Invalid interval bounds for a threshold grid."""


class MetricMismatchError(ProdnetError):
    """Reports being combined were computed with different metrics."""


class FitError(ProdnetError):
    """Degree-tail or growth-parameter fit failed.

    Carries the raw tail exponents when they were estimated before the
    failure (None otherwise), so callers can inspect what went wrong.
    """

    def __init__(self, message: str, c_in: float | None = None, c_out: float | None = None):
        super().__init__(message)
        self.c_in = c_in
        self.c_out = c_out


class ConvergenceError(ProdnetError):
    """Fixed-point iteration hit max_iter before reaching tolerance.

    ``last_iterate`` holds the final score vector, ``residual`` the L1
    change of the last step.
    """

    def __init__(self, message: str, last_iterate=None, residual: float | None = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
