"""Exception hierarchy shared across fermikit modules."""


class FermikitError(Exception):
    """Base class for all fermikit-specific failures."""


class NoBracketError(FermikitError):
    """The supplied interval does not bracket a sign change."""


class MaxIterExceededError(FermikitError):
    """Iteration budget exhausted before reaching tolerance.

    Carries the last iterate and residual so callers can inspect how far
    the solve got.
    """

    def __init__(self, message, last=None, residual=None):
        super().__init__(message)
        self.last = last
        self.residual = residual


class DivergedError(FermikitError):
    """Fixed-point residual grew far beyond its initial value."""


class NonConvergenceError(FermikitError):
    """A solve that should be unconditionally convergent failed anyway."""


class ToleranceNotMetWarning(UserWarning):
    """Quadrature returned a best estimate whose error exceeds tolerance."""


class UnsupportedOrderError(FermikitError, ValueError):
    """Fermi integral order outside the supported set."""


class NegativeFugacityError(FermikitError, ValueError):
    """Fugacity arguments must be non-negative."""


class NonPositiveInputError(FermikitError, ValueError):
    """Mass, temperature and similar scale parameters must be positive."""


class DegeneratePointError(FermikitError, ValueError):
    """Bogoliubov amplitudes are undefined at eps = delta = 0."""


class NoTransitionError(FermikitError):
    """No pairing transition exists in the probed temperature range."""


class ConfigError(FermikitError):
    """Invalid or incomplete run configuration."""
