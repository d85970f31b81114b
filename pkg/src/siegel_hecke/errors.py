"""Exception hierarchy shared by every module."""


class SiegelHeckeError(Exception):
    """Base class for all errors raised by this package."""


class NotPositiveDefinite(SiegelHeckeError, ValueError):
    pass


class CompositeP(SiegelHeckeError, ValueError):
    pass


class OutOfBound(SiegelHeckeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BoundTooSmall(SiegelHeckeError, ValueError):
    pass


class UnsupportedWeight(SiegelHeckeError, ValueError):
    pass


class PNotDividingLevel(SiegelHeckeError, ValueError):
    pass


class AllCoefficientsZero(SiegelHeckeError, ValueError):
    pass


class NotEigenform(SiegelHeckeError, ValueError):
    pass


class UnsupportedPrime(SiegelHeckeError, ValueError):
    pass


class PrimeNotInS(SiegelHeckeError, ValueError):
    pass


class RankUnsupported(SiegelHeckeError, ValueError):
    pass


class OddCharacteristic(SiegelHeckeError, ValueError):
    pass


class NormalizationFailure(SiegelHeckeError, ArithmeticError):
    pass


class ChecksumMismatch(SiegelHeckeError, ValueError):
    pass
