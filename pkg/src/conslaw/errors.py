"""Exception types raised across the package."""


class ConsLawError(Exception):
    """Base class for all package errors."""


class NotFound(ConsLawError, KeyError):
    pass


class DomainViolation(ConsLawError, ValueError):
    pass


class NotStrictlyHyperbolic(ConsLawError, ValueError):
    pass


class AmplitudeTooLarge(ConsLawError, ValueError):
    pass


class CurveSolveFailure(ConsLawError, RuntimeError):
    pass


class NoSolutionInRange(ConsLawError, RuntimeError):
    pass


class TotalVariationExceeded(ConsLawError, ValueError):
    pass


class FrontCountExplosion(ConsLawError, RuntimeError):
    pass


class SmallnessViolated(ConsLawError, ValueError):
    pass


class CFLViolation(ConsLawError, ValueError):
    pass


class StabilityViolation(ConsLawError, ValueError):
    pass


class CalibrationFailed(ConsLawError, RuntimeError):
    pass


class ShootingFailure(ConsLawError, RuntimeError):
    pass


class NotAdmissible(ConsLawError, ValueError):
    pass


class NonPositiveGap(ConsLawError, ValueError):
    pass


class ConfigInvalid(ConsLawError, ValueError):
    pass
