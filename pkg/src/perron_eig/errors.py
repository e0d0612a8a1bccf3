"""Exception hierarchy shared by every module of the package."""


class PerronEigError(Exception):
    """Base class for all domain errors raised by :mod:`perron_eig`."""


class DimensionError(PerronEigError, ValueError):
    pass


class NonFiniteError(PerronEigError, ValueError):
    pass


class NumericOverflowError(PerronEigError, ArithmeticError):
    """An intermediate quantity grew past the overflow guard.

    ``term`` holds the Taylor term index at which the guard fired, when known.
    """

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class SingularIterationError(PerronEigError, ArithmeticError):
    """The truncated exponential annihilated the iterate (raise ``n``)."""


class SingularInitError(PerronEigError, ValueError):
    """The initial matrix failed the nonsingularity heuristic."""


class DegenerateInputError(PerronEigError, ValueError):
    pass


class DegenerateRatioError(PerronEigError, ArithmeticError):
    """A beta ratio had a vanishing denominator.

    ``order`` is the power of the shifted matrix that already annihilated the
    column, i.e. ``k - 1`` for the requested ratio ``beta_k``.
    """

    def __init__(self, message, order):
        super().__init__(message)
        self.order = order


class DivergenceError(PerronEigError, ArithmeticError):
    pass


class CyclicOrderUnresolvedError(PerronEigError):
    pass


class EmptySpaceError(PerronEigError):
    pass


class OracleFailureError(PerronEigError):
    pass


class ParseError(PerronEigError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedFormatError(PerronEigError, ValueError):
    pass
