"""Exception hierarchy shared by every module of the package."""


class FrameError(Exception):
    """Base class for all errors raised by framepert."""


class NonSymmetric(FrameError, ValueError):
    pass


class NoConvergence(FrameError, ArithmeticError):
    pass


class Singular(FrameError, ArithmeticError):
    pass


class UnsupportedNorm(FrameError, ValueError):
    pass


class ZeroFamily(FrameError, ValueError):
    pass


class LengthMismatch(FrameError, ValueError):
    pass


class DimensionMismatch(FrameError, ValueError):
    pass


class NotABasis(FrameError, ValueError):
    pass


class NotAFrame(FrameError, ValueError):
    pass


class NotRiesz(FrameError, ValueError):
    pass


class BadDual(FrameError, ValueError):
    pass


class InsufficientComplement(FrameError, ValueError):
    """The orthogonal complement is too small to build the counterexample."""

    def __init__(self, msg, codim):
        super().__init__(msg)
        self.codim = codim


class DepthTooLarge(FrameError, ValueError):
    pass


class UnknownTheorem(FrameError, KeyError):
    pass


class UnknownGallery(FrameError, KeyError):
    pass


class ParseError(FrameError, ValueError):
    """Malformed family file. ``where`` names the offending line or field."""

    def __init__(self, msg, where=None):
        super().__init__(msg if where is None else f"{where}: {msg}")
        self.where = where
