"""Exception hierarchy shared by all modules."""


class RegconnError(Exception):
    """Base class for every error raised by the library."""


class DivisionByZero(RegconnError, ZeroDivisionError):
    pass


class NotASubfield(RegconnError):
    pass


class InsufficientPrecision(RegconnError):
    pass


class ZeroDivisor(RegconnError, ZeroDivisionError):
    pass


class RamificationMismatch(RegconnError):
    pass


class DimensionMismatch(RegconnError):
    pass


class EigenvaluesNotFound(RegconnError):
    pass


class VerificationError(RegconnError):
    """An identity that must hold exactly was found to fail."""


class NotInvariant(RegconnError):
    pass


class NotInCentralizer(RegconnError):
    pass


class NotTorsion(RegconnError):
    pass


class NotConstant(RegconnError):
    pass


class DeterminantConstraint(RegconnError):
    pass


class NotRelated(RegconnError):
    pass


class NotDivisible(RegconnError):
    pass


class EnumerationBoundExceeded(RegconnError):
    pass


class ParseError(RegconnError):
    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} (at offset {position})"
        if source and len(source) <= 60:
            message = f"{message} in {source.strip()!r}"
        super().__init__(message)
