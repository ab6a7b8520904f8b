"""Exception hierarchy shared by every stage of the workbench."""


class MapcountError(Exception):
    """Base class for all errors raised by this package."""


# exact algebra
class NonUnitConstantTerm(MapcountError, ZeroDivisionError):
    pass


class NonzeroConstantTerm(MapcountError, ValueError):
    pass


class BadValuation(MapcountError, ValueError):
    pass


class NotTriangular(MapcountError, ValueError):
    pass


class DivisibilityError(MapcountError, ArithmeticError):
    pass


# oracle
class CapExceeded(MapcountError, ValueError):
    pass


# catalytic / tower
class ConsistencyFailure(MapcountError):
    pass


class MismatchAt(MapcountError):
    def __init__(self, order, message=""):
        self.order = order
        super().__init__(message or f"first mismatch at z^{order}")


class ValuationError(MapcountError, ValueError):
    pass


class NormalizationFailure(MapcountError):
    pass


class NoRootInInterval(MapcountError):
    pass


# asymptotics
class NotFound(MapcountError):
    pass


class AmbiguousKernel(MapcountError):
    pass


class BranchSelectionAmbiguous(MapcountError):
    pass


class UnsupportedExponent(MapcountError, ValueError):
    pass


class InsufficientData(MapcountError, ValueError):
    pass


# cli
class UnknownClaim(MapcountError, KeyError):
    pass
