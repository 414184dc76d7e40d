"""Shared numerical primitives: bracketed roots, damped fixed points, quadrature.

All three operations are pure functions of their inputs and safe to call
concurrently.  They are deliberately small: the physics modules never need
more than a robust scalar root, a damped vector iteration, and an adaptive
one-dimensional integral.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import (
    DivergedError,
    MaxIterExceededError,
    NoBracketError,
    ToleranceNotMetWarning,
)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and iteration budget shared by the solvers.

    damping applies only to fixed_point: the update is
    x <- (1 - damping) * x + damping * map(x).
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iter: int = 200
    damping: float = 0.5

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if not (0 < self.damping <= 1):
            raise ValueError("damping must lie in (0, 1]")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_CONFIG = SolverConfig()


def find_root(f, lo, hi, cfg=DEFAULT_CONFIG):
    """Find a root of f on the bracket [lo, hi].

    Brent-style iteration: inverse quadratic / secant steps with a
    bisection fallback, so convergence is guaranteed for any continuous f
    with f(lo)*f(hi) <= 0.  Returns x once |f(x)| <= abs_tol or the
    bracket has shrunk to rel_tol*|x|.

    Raises NoBracketError if the endpoints do not straddle a sign change
    and MaxIterExceededError if the iteration budget runs out.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoBracketError(
            f"f({lo}) = {fa:.6g} and f({hi}) = {fb:.6g} have the same sign"
        )

    c, fc = a, fa
    d = e = b - a
    for _ in range(cfg.max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * _EPS * abs(b) + 0.5 * cfg.rel_tol * abs(b)
        m = 0.5 * (c - b)
        if abs(fb) <= cfg.abs_tol or abs(m) <= tol:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            s, e = e, d
            if 2.0 * p < 3.0 * m * q - abs(tol * q) and p < abs(0.5 * s * q):
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        if abs(d) > tol:
            b += d
        else:
            b += tol if m > 0 else -tol
        fb = f(b)
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
    raise MaxIterExceededError(
        f"root not located in {cfg.max_iter} iterations", last=b, residual=abs(fb)
    )


def fixed_point(f, init, cfg=DEFAULT_CONFIG):
    """Solve x = f(x) by damped iteration.

    Accepts a scalar or an ndarray initial iterate and returns the same
    shape.  Convergence criterion: ||f(x) - x||_inf <= abs_tol +
    rel_tol * ||x||_inf.  Raises DivergedError once the residual exceeds
    1e6 times its initial value and MaxIterExceededError (carrying the
    last iterate and residual) when the budget runs out.
    """
    scalar = np.isscalar(init) or np.ndim(init) == 0
    x = np.atleast_1d(np.asarray(init, dtype=float)).copy()
    if not np.all(np.isfinite(x)):
        raise ValueError("initial iterate must be finite")

    initial_residual = None
    residual = np.inf
    for _ in range(cfg.max_iter):
        fx = np.atleast_1d(np.asarray(f(x[0] if scalar else x), dtype=float))
        residual = float(np.max(np.abs(fx - x)))
        if initial_residual is None:
            initial_residual = residual
        if residual <= cfg.abs_tol + cfg.rel_tol * float(np.max(np.abs(x))):
            return float(x[0]) if scalar else x
        if initial_residual > 0 and residual > 1e6 * initial_residual:
            raise DivergedError(
                f"residual {residual:.3g} exceeds 1e6 x initial {initial_residual:.3g}"
            )
        x = (1.0 - cfg.damping) * x + cfg.damping * fx
    raise MaxIterExceededError(
        f"fixed point not reached in {cfg.max_iter} iterations "
        f"(residual {residual:.3g})",
        last=float(x[0]) if scalar else x,
        residual=residual,
    )


def integrate(f, lo, hi, cfg=DEFAULT_CONFIG, full=False):
    """Adaptive quadrature of f over [lo, hi]; hi may be +inf.

    Semi-infinite ranges are mapped onto [0, 1) with x = lo + t/(1-t),
    which is adequate for the exponentially decaying integrands used
    here.  Delegates the adaptive subdivision to QUADPACK.

    Returns the estimate; with full=True returns (value, error_estimate,
    within_tolerance).  If the reported error exceeds
    max(abs_tol, rel_tol*|value|) a ToleranceNotMetWarning is issued and
    the best estimate is still returned.
    """
    lo = float(lo)
    if not math.isfinite(lo):
        raise ValueError("lower limit must be finite")
    if math.isinf(hi):
        g = lambda t: f(lo + t / (1.0 - t)) / (1.0 - t) ** 2
        a, b = 0.0, 1.0
    else:
        g, a, b = f, lo, float(hi)
        if not a < b:
            raise ValueError("require lo < hi")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        value, err = scipy.integrate.quad(
            g, a, b, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
            limit=max(cfg.max_iter, 50),
        )
    ok = err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if not ok:
        warnings.warn(
            f"integral error estimate {err:.3g} exceeds tolerance",
            ToleranceNotMetWarning,
            stacklevel=2,
        )
    if full:
        return value, err, ok
    return value
