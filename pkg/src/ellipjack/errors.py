"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`EllipJackError`.  The CLI maps the two subclasses
:class:`SpectrumError` and :class:`InvalidInput` onto distinct exit codes.
"""


class EllipJackError(Exception):
    pass


class InvalidInput(EllipJackError, ValueError):
    pass


class SpectrumError(EllipJackError, ArithmeticError):
    """Degenerate spectrum, vanishing denominator or gap violation."""


class VerificationFailure(EllipJackError):
    pass


# exact-arith
class OrderMismatch(InvalidInput):
    pass


class ZeroConstantTerm(EllipJackError, ZeroDivisionError):
    pass


# symfunc
class NoUniqueLeading(EllipJackError):
    pass


# jack-oracle
class NonSymmetricInput(InvalidInput):
    pass


class DegenerateRecursion(SpectrumError):
    pass


# kernel
class ContourViolation(InvalidInput):
    pass


class NonConvergence(VerificationFailure):
    pass


# spectral
class NonPositiveDiff(SpectrumError):
    pass


class DegenerateSpectrum(SpectrumError):
    pass


class DegenerateDenominator(SpectrumError):
    pass


class GapViolation(SpectrumError):
    pass


# assembler-verifier
class ResidualLaurentSupport(VerificationFailure):
    pass


class MismatchBeyondNormalization(VerificationFailure):
    pass


class CoincidentPoints(InvalidInput):
    pass


class SingularPoint(InvalidInput):
    pass
