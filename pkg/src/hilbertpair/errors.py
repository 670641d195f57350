"""Exception hierarchy shared across the package."""


class HilbertPairError(Exception):
    """Base class for all errors raised by hilbertpair."""


class NonConvergence(HilbertPairError):
    pass


class InvalidOrder(HilbertPairError, ValueError):
    pass


class ZeroArgument(HilbertPairError, ValueError):
    pass


class RecursionDefect(HilbertPairError):
    pass


class IllConditioned(HilbertPairError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class CostGuard(HilbertPairError):
    pass


class NotNonnegative(HilbertPairError):
    """r(y) dips below zero somewhere on [0, 1]; Riesz factorization impossible."""

    def __init__(self, message, y_min=None, value=None):
        super().__init__(message)
        self.y_min = y_min
        self.value = value


class ConjugatePairingFailure(HilbertPairError):
    pass


class TruncationTooShallow(HilbertPairError, ValueError):
    pass


class DegenerateFit(HilbertPairError):
    pass


class EigenFailure(HilbertPairError):
    pass


class ParseError(HilbertPairError, ValueError):
    pass
