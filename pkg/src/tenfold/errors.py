"""Exception types raised across the package."""


class TenfoldError(ValueError):
    """Base class for all domain errors."""


class DimensionMismatchError(TenfoldError):
    pass


class OddDimensionError(TenfoldError):
    pass


class NotAntisymmetricError(TenfoldError):
    pass


class NotSelfAdjointError(TenfoldError):
    pass


class GaplessError(TenfoldError):
    pass


class NotFreeFermionError(TenfoldError):
    pass


class NotImaginaryError(TenfoldError):
    pass


class SignatureMismatchError(TenfoldError):
    pass


class TooLargeError(TenfoldError):
    pass


class VerificationFailedError(TenfoldError):
    pass


class NotQuaternionicError(TenfoldError):
    pass


class NotUnitaryError(TenfoldError):
    pass


class NotInnerRelatedError(TenfoldError):
    pass


class NotScalarError(TenfoldError):
    pass


class BadSpinAlgebraError(TenfoldError):
    pass


class NotChargeConservingError(TenfoldError):
    pass


class InadmissibleSetError(TenfoldError):
    pass


class SymmetryViolatedError(TenfoldError):
    pass


class SignMismatchError(TenfoldError):
    pass


class StructuralFailureError(TenfoldError):
    pass


class NotFlattenedError(TenfoldError):
    pass


class KramersViolationError(TenfoldError):
    pass


class GradingMismatchError(TenfoldError):
    pass


class ParseError(TenfoldError):
    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
