"""Exception hierarchy.

Two families matter to callers (and to the CLI exit code):

* :class:`DomainError` -- the input is outside what the library handles
  (unsupported prime, violated precondition, malformed corpus file).
* :class:`InvariantAlarm` -- something that should be impossible happened
  (exhausted corpus, coverage gap, uncertifiable numerics). These point
  at a bug, never at bad input.
"""


class Tau3Error(Exception):
    """Base class for every error raised by this package."""


class DomainError(Tau3Error, ValueError):
    pass


class UnsupportedPrimeError(DomainError):
    """Raised for p = 2, 3 or composite moduli."""


class PreconditionError(DomainError):
    pass


class ZeroInputError(DomainError):
    """Raised when an operation is undefined at zero (valuation, power tests)."""


class PrecisionExhaustedError(Tau3Error, ArithmeticError):
    """A capped-precision p-adic computation lost every significant digit."""


class InconclusiveOracleError(Tau3Error):
    """The Hensel oracle hit its depth limit without classifying every class."""


class CorpusFormatError(DomainError):
    pass


class CorpusVersionError(CorpusFormatError):
    pass


class CorpusChecksumError(CorpusFormatError):
    pass


class CorpusTruncatedError(CorpusFormatError):
    pass


class InvariantAlarm(Tau3Error):
    pass


class CertificationError(InvariantAlarm):
    """Root refinement could not certify a Mahler measure to tolerance."""


class UnsupportedCaseError(InvariantAlarm):
    """A configuration that the splitting criteria do not cover reached them."""


class ExhaustedCorpusError(InvariantAlarm):
    pass


class CoverageGapError(InvariantAlarm):
    def __init__(self, message: str, uncovered=()):
        super().__init__(message)
        self.uncovered = tuple(uncovered)


class NoAdmissibleConductorError(InvariantAlarm):
    pass


class CardinalityMismatchError(InvariantAlarm):
    pass
