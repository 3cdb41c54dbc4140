"""Exception types shared across the package."""


class NeelWallError(Exception):
    """Base class for all package-specific errors."""


class NoCrossingError(NeelWallError):
    """theta - pi/2 never changes sign, so the profile cannot be recentred."""


class MultipleCrossingsError(NeelWallError):
    """theta - pi/2 changes sign more than once; recentring is ambiguous."""


class TailTooLargeError(NeelWallError):
    """Input to a nonlocal operator does not decay at the grid ends.

    Usually means the caller passed theta instead of u = sin(theta) - h.
    """


class NotConvergedError(NeelWallError):
    """Minimization stopped before reaching the gradient tolerance."""


class StepUnderflowError(NeelWallError):
    """Backtracking line search shrank the step below the underflow floor."""


class WindowTooNoisyError(NeelWallError):
    """The x^2-tail plateau varies too much over the fitting window."""


class NotRecentredError(NeelWallError):
    """Path construction requires theta(0) = pi/2 on both endpoints."""


class RangeViolationError(NeelWallError):
    """Interpolated sine values left [-1, 1] by more than roundoff slack."""


class CenterDegenerateError(NeelWallError):
    """theta_x(0) is too close to zero for the x = 0 closed forms."""
