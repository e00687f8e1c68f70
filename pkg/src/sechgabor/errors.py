"""Exception hierarchy shared by all modules."""


class GaborError(Exception):
    """Base class for every error raised by this package."""


class NomeOutOfRange(GaborError, ValueError):
    pass


class ArgumentOutOfStrip(GaborError, ValueError):
    pass


class UnsupportedKind(GaborError, ValueError):
    pass


class NonpositiveDilation(GaborError, ValueError):
    pass


class LatticeError(GaborError, ValueError):
    """Lattice constants are invalid for the requested computation."""


class NotReduced(LatticeError):
    """A lattice with b != 1 reached code that requires the b = 1 form."""


class TruncationTooSmall(GaborError):
    pass


class NumericalFailure(GaborError):
    pass


class DomainError(GaborError, ValueError):
    pass


class TooCloseToHalfInteger(DomainError):
    pass


class QuadratureNotConverged(GaborError):
    pass


class ZakZeroError(GaborError, ZeroDivisionError):
    """A Zak transform used as a divisor is numerically zero on the grid."""


class UsageError(GaborError):
    """Invalid command line; the CLI exits with status 2."""

    exit_code = 2
