"""Exception types raised across the package."""


class FalsifyError(ValueError):
    """Base class for input and domain errors."""


class CapExceeded(FalsifyError):
    pass


class IndexOutOfRange(FalsifyError, IndexError):
    pass


class LengthMismatch(FalsifyError):
    pass


class SpaceMismatch(FalsifyError):
    pass


class InvalidDistribution(FalsifyError):
    pass


class UnknownOutput(FalsifyError):
    pass


class ZeroProbabilityOutput(FalsifyError):
    pass


class RequiresDistinctSample(FalsifyError):
    pass


class EmptyLevel(FalsifyError):
    pass


class NoPerfectFit(FalsifyError):
    pass


class InvalidConfidence(FalsifyError):
    pass


class EiExceedsL(FalsifyError):
    pass


class InvalidSpec(FalsifyError):
    pass
