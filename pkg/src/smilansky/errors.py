"""Exception types shared across the package."""


class SmilanskyError(Exception):
    """Base class for all domain errors raised by this package."""


class ThresholdCollision(SmilanskyError):
    """An evaluation point coincides with a threshold nu_n = n + 1/2.

    The branch square roots vanish there and the Jacobi couplings divide
    by them, so callers must keep iterates off the thresholds.
    """


class NearSingular(SmilanskyError):
    """A linear solve hit a pivot below the safe magnitude.

    This usually signals proximity to a resonance and is reported rather
    than clamped.
    """


class NoConvergence(SmilanskyError):
    """An iterative solver exhausted its iteration budget."""


class SectorMismatch(SmilanskyError):
    """A kappa-plane root converged outside the sectors of the base sheet.

    Interpreted as "no resonance on this sheet near this threshold".
    """


class MultiRoot(SmilanskyError):
    """More than one eigenvalue below the first threshold was detected."""


class NoRoot(SmilanskyError):
    """No root exists in the searched interval."""
