"""Exception types raised by the library."""


class FloquetTURError(Exception):
    """Base class for all library errors."""


class DomainError(FloquetTURError, ValueError):
    """An argument lies outside the domain of the operation."""


class TruncationError(FloquetTURError, RuntimeError):
    """The Floquet weight target could not be reached within the harmonic cap."""

    def __init__(self, message, achieved_weight):
        super().__init__(f"{message} (achieved total weight {achieved_weight!r})")
        self.achieved_weight = achieved_weight


class UndefinedSupportError(FloquetTURError, ValueError):
    """The spectral density vanishes where a positive value is required."""


class DegenerateSteadyStateError(FloquetTURError, RuntimeError):
    """The rate equation has no unique steady state (no coupling at all)."""


class BranchTrackingError(FloquetTURError, RuntimeError):
    """The dominant eigenvalue cannot be continued unambiguously."""

    def __init__(self, message, chi=None):
        super().__init__(message if chi is None else f"{message} at chi={chi!r}")
        self.chi = chi


class OrderingError(FloquetTURError, ValueError):
    """The hot bath is not hotter than the cold bath."""


class NotApplicableError(FloquetTURError, ValueError):
    """A figure of merit is undefined for the operating regime."""


class NoFeasiblePulseError(FloquetTURError, RuntimeError):
    """Every optimizer restart ended on a penalized pulse."""


class AbsorbingStateError(FloquetTURError, RuntimeError):
    """A state of the jump process has zero escape rate."""


class ConfigError(FloquetTURError, ValueError):
    """A run configuration is malformed."""
