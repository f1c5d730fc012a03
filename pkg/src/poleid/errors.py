"""Exception types raised across the package."""


class PoleIdError(Exception):
    """Base class for all package errors."""


class NonFiniteError(PoleIdError, ValueError):
    pass


class NonSquareError(PoleIdError, ValueError):
    pass


class BadRankError(PoleIdError, ValueError):
    pass


class UnstableError(PoleIdError, ValueError):
    """Raised when a quantity needs spr(A) < 1 and the system violates it."""


class MarginalError(UnstableError):
    pass


class BadHorizonError(PoleIdError, ValueError):
    pass


class BadPartitionError(PoleIdError, ValueError):
    pass


class BadMassError(PoleIdError, ValueError):
    pass


class TooShortError(PoleIdError, ValueError):
    pass


class RankDeficientError(PoleIdError, ValueError):
    """The least-squares regressor does not have full rank."""


class SizeMismatchError(PoleIdError, ValueError):
    pass


class DivergingError(PoleIdError, RuntimeError):
    pass


class DegenerateHankelError(PoleIdError, ValueError):
    pass


class BadDeltaError(PoleIdError, ValueError):
    pass


class UnknownNameError(PoleIdError, KeyError):
    pass


class ConfigError(PoleIdError, ValueError):
    pass


class NearSingularWarning(UserWarning):
    """The retained singular values of the Hankel matrix are numerically degenerate."""
