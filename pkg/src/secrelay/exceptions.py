"""Exception hierarchy shared by all modules."""


class SecrelayError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(SecrelayError, ValueError):
    """A system constant or argument is outside its valid domain."""


class DegenerateCSIError(ParameterError):
    """Raised when the CSI correlation coefficient is zero."""


class InfeasibleError(SecrelayError):
    """No nonnegative secrecy outage capacity exists (r_l >= 1)."""


class InsufficientTrialsError(ParameterError):
    """Too few Monte Carlo trials for the requested estimator."""
