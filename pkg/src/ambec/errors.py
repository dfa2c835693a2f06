"""Exception hierarchy with CLI exit codes attached.

Exit code contract: 0 success, 2 no admissible root, 3 validation or
configuration failure, 4 numerical failure.
"""


class AmbecError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 4


class ConfigurationError(AmbecError):
    """Invalid flags, grids, preconditions, or parameter validation failure."""

    exit_code = 3


class SingularParameterError(AmbecError):
    """A denominator vanished for the supplied parameters."""

    exit_code = 3


class NoDropletError(AmbecError):
    """Requested chemical potential lies outside the droplet window."""

    exit_code = 2


class OutOfScopeRegimeError(AmbecError):
    """Solution exists mathematically but has B <= 0, outside supported scope."""

    exit_code = 2


class OutOfScopeRootError(AmbecError):
    """Newton converged, but the root violates the family sign constraints."""

    exit_code = 2


class ConvergenceError(AmbecError):
    """Newton iteration failed to reach tolerance."""

    exit_code = 2


class NoRootFoundError(AmbecError):
    """Grid scan produced no sign-change candidates in the given ranges."""

    exit_code = 2


class InconsistentRootError(AmbecError):
    """Alternative shape-parameter expressions disagree at the converged root."""

    exit_code = 4


class TruncationError(AmbecError):
    """Grid too narrow: the profile does not decay below tolerance at the edge."""

    exit_code = 4


class BlowUpError(AmbecError):
    """Non-finite field values appeared during propagation."""

    exit_code = 4


class InstabilityError(AmbecError):
    """Conserved number drifted far beyond the configured tolerance."""

    exit_code = 4


class TruncationWarning(UserWarning):
    """Profile amplitude at the grid boundary is above the adequacy threshold."""
