"""Exception types raised by the simulator."""


class QFeedbackError(Exception):
    """Base class for all errors raised by :mod:`qfeedback`."""


class ConfigError(QFeedbackError, ValueError):
    """Invalid parameters or run configuration."""


class NonFiniteValue(QFeedbackError, ArithmeticError):
    """An integrated amplitude became NaN or infinite."""


class NoConvergence(QFeedbackError):
    """Step refinement did not reach the requested tolerance."""


class NormDrift(QFeedbackError):
    """The oracle state norm left the allowed band around 1."""


class TooShort(QFeedbackError, ValueError):
    """A trajectory does not span enough delay intervals for analysis."""


class NotStabilized(QFeedbackError):
    """The trajectory shows no plateau in its final delay interval."""
