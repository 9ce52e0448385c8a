"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Raised when Grassmannian parameters or call arguments are invalid."""


class UndefinedConstantError(ParameterError):
    """Raised when a distance normalization constant does not exist.

    The fivepointed chordal variant divides by sqrt((n-p)(n-q)) and is
    undefined for full-dimensional subspaces.
    """


class EmptyComplementError(ParameterError):
    """Raised when the orthogonal complement of a basis is zero-dimensional."""


class UnsupportedSizeError(ParameterError):
    """Raised when a computation exceeds the supported matrix order."""


class NotTabulatedError(LookupError):
    """Raised when no closed-form volume is tabulated for a parameter triple."""


class AccuracyError(RuntimeError):
    """Raised when a quadrature cannot reach the requested tolerance.

    Carries the best available estimate so callers can decide whether to use
    it anyway (the CLI reports it and exits with a distinct status code).
    """

    def __init__(self, message, estimate=None, achieved_tol=None, target_tol=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved_tol = achieved_tol
        self.target_tol = target_tol
