"""Exception hierarchy shared by the solver modules and the CLI."""


class ABSpectraError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ABSpectraError, ValueError):
    pass


class DomainError(ABSpectraError, ValueError):
    """Evaluation outside the accessible region or a failed domain sizing."""


class ConvergenceError(ABSpectraError, RuntimeError):
    """An iterative solver stopped without meeting its tolerance.

    ``residual`` carries the last measured residual (or ``None``).
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModeRangeError(ConvergenceError):
    """The minimizing angular mode stayed on the edge of the mode window."""


class UndefinedDerivativeError(ABSpectraError, ValueError):
    pass


class InconclusiveError(ConvergenceError):
    """Refinement data too irregular to estimate a convergence order."""


class InconsistencyError(ABSpectraError, RuntimeError):
    pass
