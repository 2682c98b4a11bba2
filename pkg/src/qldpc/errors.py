"""Exception types shared across the package."""


class QldpcError(Exception):
    """Base class for all package-specific errors."""


class SizeMismatch(QldpcError):
    """Operands have incompatible dimensions."""


class NoSolution(QldpcError):
    """Right-hand side is not in the column space of the pivot columns."""


class BothZero(QldpcError):
    """gcd of two zero polynomials is undefined."""


class NotAFactor(QldpcError):
    """Polynomial does not divide x^l - 1."""


class EvenCirculant(QldpcError):
    """Operation requires an odd circulant size."""


class OddLength(QldpcError):
    """Binary image of a Pauli vector must have even length."""


class UnknownId(QldpcError):
    """Registry id does not exist."""


class MissingExternalMatrix(QldpcError):
    """Registry entry is import-only and no matrix files were supplied."""


class SyndromeNotInImage(QldpcError):
    """Target syndrome is outside the image of the check matrix."""


class SyndromeMismatch(QldpcError):
    """Correction and error disagree on the syndrome; internal inconsistency."""


class KernelTooLarge(QldpcError):
    """Kernel dimension exceeds the exhaustive-enumeration guard."""
