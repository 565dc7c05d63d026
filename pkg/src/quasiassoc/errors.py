"""Exception hierarchy shared by every module of the package."""


class QuasiassocError(Exception):
    """Base class for all package errors."""


class ZeroDenominator(QuasiassocError, ZeroDivisionError):
    pass


class DivisionByZero(QuasiassocError, ZeroDivisionError):
    pass


class PoleAtEpsilon(QuasiassocError, ZeroDivisionError):
    """A rational function was evaluated at a root of its denominator."""


class InfeasibleWindow(QuasiassocError, ValueError):
    pass


class ModuleMismatch(QuasiassocError, ValueError):
    pass


class ArityMismatch(QuasiassocError, ValueError):
    pass


class SkewnessError(QuasiassocError, ValueError):
    pass


class InvalidRightAction(QuasiassocError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownBilinear(QuasiassocError, KeyError):
    pass


class NoAdjointRule(QuasiassocError, TypeError):
    pass


class DimensionMismatch(QuasiassocError, ValueError):
    pass


class ShapeMismatch(QuasiassocError, ValueError):
    pass


class IndexOutOfRange(QuasiassocError, IndexError):
    pass


class NotLieRep(QuasiassocError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotDerivation(QuasiassocError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WindowTooSmall(QuasiassocError, ValueError):
    pass


class UnknownSuite(QuasiassocError, KeyError):
    pass
