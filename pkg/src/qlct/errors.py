"""Exception types raised across the package."""


class QLCTError(Exception):
    pass


class InvalidExponent(QLCTError, ValueError):
    pass


class OriginNotOnGrid(QLCTError, ValueError):
    pass


class GridMismatch(QLCTError, ValueError):
    pass


class DegenerateB(QLCTError, ValueError):
    pass


class InvalidDegenerate(QLCTError, ValueError):
    pass


class NonOrthogonalAxes(QLCTError, ValueError):
    pass


class InvalidDeterminant(QLCTError, ValueError):
    pass


class DivisionByZeroQuaternion(QLCTError, ZeroDivisionError):
    pass


class NotSliceValued(QLCTError, ValueError):
    pass


class InvalidBand(QLCTError, ValueError):
    pass


class UnsupportedFormat(QLCTError, ValueError):
    pass


class SingularSymbol(QLCTError, ArithmeticError):
    """Spectral divisor too small somewhere on the frequency grid."""

    def __init__(self, message, u=None, v=None):
        super().__init__(message)
        self.u = u
        self.v = v


class SymbolZeroOnAxis(SingularSymbol):
    pass


class GridTooLarge(QLCTError, ValueError):
    pass
