"""Exception hierarchy shared by every layer of the package."""


class EdsModelError(Exception):
    """Base class; the CLI maps these to a nonzero exit status."""


class ConfigError(EdsModelError):
    pass


class IndexOutOfRange(EdsModelError):
    pass


class TorsionCollision(EdsModelError):
    """[n]P hit the identity for some n != 0, so P has finite order."""


class BadPrimeError(EdsModelError):
    pass


class LawViolation(EdsModelError):
    """An internal consistency law failed; this signals a bug, never bad input."""


class FingerprintMismatch(EdsModelError):
    pass


class CorruptLedger(EdsModelError):
    pass


class LedgerMissing(EdsModelError):
    pass


class NoPrimitivePart(EdsModelError):
    pass


class Unclassifiable(EdsModelError):
    """A prime in a denominator could not be placed inside or outside the inverted set."""


class NotOnCurve(EdsModelError):
    pass


class DecodeNotFound(EdsModelError):
    pass


class HorizonExceeded(EdsModelError):
    pass


class NoWitness(EdsModelError):
    pass


class UnknownAtom(EdsModelError):
    pass


class SquareChallenge(EdsModelError):
    """No refuting challenge exists because z is the square of the chosen index."""


class AmbiguousSquare(EdsModelError):
    """More than one k4 survives the squaring conditions."""

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript or {}
