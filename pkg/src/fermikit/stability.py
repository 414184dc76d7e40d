"""Mechanical stability of the homogeneous two-component mixture.

A binary mixture is stable only where the symmetric matrix of chemical-
potential derivatives d mu_i / d rho_j is positive semidefinite.  With
the mean-field chemical potentials

    beta mu_i = beta mu_i^0 + 4 a_i rho_i lambda_i^2
                + a_12 (lambda_1^2 + lambda_2^2) rho_j

and the ideal-gas relation rho_i = lambda_i^-3 f_{3/2}(z_i), the matrix in
units of k_B T is

    beta d mu_i / d rho_i = 4 a_i lambda_i^2 + lambda_i^3 / f_{1/2}(z_i)
    beta d mu_1 / d rho_2 = a_12 (lambda_1^2 + lambda_2^2)

Positive semidefiniteness splits into the two diagonal conditions and the
determinant criterion

    Z(T, a_12) = (4 a_1 l1^2 + l1^3/f_{1/2}(z_1))
               * (4 a_2 l2^2 + l2^3/f_{1/2}(z_2))
               - a_12^2 (l1^2 + l2^2)^2  >=  0,

which depends on a_12 only through |a_12|.  Scanning Z over temperature at
fixed densities locates a demixing window [T_c1, T_c2]; substituting the
local fugacities z_i * exp(-beta m w^2 r^2 / 2) extends the criterion to a
trapped cloud point by point.

Note the quantum-degenerate endpoint: as T -> 0 the ideal compressibility
term tends to Gamma(3/2)/Gamma(5/2)^(1/3) * rho^(-1/3) * lambda^2 (about
0.806 lambda^2 at rho = 1), the minimum of the whole curve.  A temperature
window that closes again at low T therefore requires attractive
intra-component couplings (a_i < 0): the determinant criterion then fails
exactly where the ideal term passes through the band
(4|a| - 2 a_12, 4|a| + 2 a_12).  The diagonal conditions are reported
separately, since they can fail on their own for a_i < 0.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import numerics
from .constants import NATURAL, PhysicalConstants
from .errors import NoBracketError, NonPositiveInputError
from .fermi import _inverse_fd, fermi_dirac, thermal_wavelength
from .numerics import DEFAULT_CONFIG


@dataclass(frozen=True)
class MixtureParams:
    """Couplings (lengths), densities and temperature of the mixture."""

    a1: float
    a2: float
    a12: float
    rho1: float
    rho2: float
    T: float
    mass: float = 1.0
    constants: PhysicalConstants = NATURAL

    def __post_init__(self):
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise NonPositiveInputError("densities must be positive")
        if not self.T > 0:
            raise NonPositiveInputError("temperature must be positive")
        if not self.mass > 0:
            raise NonPositiveInputError("mass must be positive")
        for a in (self.a1, self.a2, self.a12):
            if not np.isfinite(a):
                raise ValueError("couplings must be finite")

    @property
    def lambdas(self):
        """(lambda_1, lambda_2); equal here since both components share
        mass and temperature, but carried separately to keep the formulas
        in their general shape."""
        lam = thermal_wavelength(self.mass, self.T, self.constants)
        return lam, lam

    def fugacities(self):
        """Ideal-gas fugacities from rho_i lambda_i^3 = f_{3/2}(z_i)."""
        l1, l2 = self.lambdas
        u = _inverse_fd(1.5, np.array([self.rho1 * l1**3, self.rho2 * l2**3]))
        return float(np.exp(u[0])), float(np.exp(u[1]))


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the three stability conditions at one state point.

    z_value is the determinant criterion divided by lambda^6 at the given
    temperature, which keeps the reported number O(1) across wide scans;
    the sign is unchanged.  stable requires both diagonal conditions and
    z_value >= 0, which is equivalent to both eigenvalues of the
    d mu_i / d rho_j matrix being non-negative.
    """

    z_value: float
    diag1_ok: bool
    diag2_ok: bool
    stable: bool
    eigenvalues: tuple


def _matrix_entries(p, log_shift=0.0):
    """(D1, D2, X) with beta d mu_i/d rho_j = [[D1, X], [X, D2]].

    log_shift subtracts beta*V(r) from ln z_i, implementing the local
    fugacity substitution; the dilute edge (f_{1/2} -> 0) gives D -> inf
    which is simply a very stable point.
    """
    l1, l2 = p.lambdas
    u = _inverse_fd(1.5, np.array([p.rho1 * l1**3, p.rho2 * l2**3])) - log_shift
    with np.errstate(over="ignore", divide="ignore"):
        f1 = fermi_dirac(0.5, np.exp(u[0]))
        f2 = fermi_dirac(0.5, np.exp(u[1]))
        d1 = 4.0 * p.a1 * l1**2 + (l1**3 / f1 if f1 > 0 else np.inf)
        d2 = 4.0 * p.a2 * l2**2 + (l2**3 / f2 if f2 > 0 else np.inf)
    x = p.a12 * (l1**2 + l2**2)
    return d1, d2, x


def chemical_potentials(p):
    """(mu_1, mu_2) including the mean-field shifts; ideal when a's vanish."""
    l1, l2 = p.lambdas
    z1, z2 = p.fugacities()
    kt = p.constants.k_B * p.T
    cross = p.a12 * (l1**2 + l2**2)
    mu1 = kt * (np.log(z1) + 4.0 * p.a1 * p.rho1 * l1**2 + cross * p.rho2)
    mu2 = kt * (np.log(z2) + 4.0 * p.a2 * p.rho2 * l2**2 + cross * p.rho1)
    return float(mu1), float(mu2)


def stability_matrix(p):
    """2x2 matrix d mu_i / d rho_j (energy * volume)."""
    d1, d2, x = _matrix_entries(p)
    kt = p.constants.k_B * p.T
    return kt * np.array([[d1, x], [x, d2]])


def z_function(p):
    """Determinant criterion of the stability matrix, in units of k_B T
    (i.e. the matrix determinant divided by (k_B T)^2; carries length^6).

    Even in a_12: z_function is identical under a_12 -> -a_12.
    """
    d1, d2, x = _matrix_entries(p)
    return float(d1 * d2 - x * x)


def local_z_function(r, trap, p):
    """Determinant criterion at radius r of a trapped cloud.

    The central fugacities (from p's densities) are replaced by
    z_i * exp(-beta m w^2 r^2 / 2); at r = 0 this is exactly z_function(p)
    and at large r the dilute edge is classical and stable.
    """
    if r < 0:
        raise ValueError("radius must be >= 0")
    beta = 1.0 / (p.constants.k_B * p.T)
    d1, d2, x = _matrix_entries(p, log_shift=beta * trap.potential(r))
    return float(d1 * d2 - x * x)


def stability_report(p):
    """Evaluate all three stability conditions and the eigenvalue check."""
    d1, d2, x = _matrix_entries(p)
    lam = p.lambdas[0]
    z_norm = (d1 * d2 - x * x) / lam**6
    kt = p.constants.k_B * p.T
    if np.isinf(d1) or np.isinf(d2):
        eigs = (np.inf, np.inf) if np.isinf(d1) and np.isinf(d2) else (np.inf, np.nan)
        eig_lo, eig_hi = min(d1, d2) * kt, np.inf
        eigs = (float(eig_lo), float(eig_hi))
    else:
        avg = 0.5 * (d1 + d2)
        disc = np.hypot(0.5 * (d1 - d2), x)
        eigs = (float(kt * (avg - disc)), float(kt * (avg + disc)))
    diag1_ok = bool(d1 >= 0)
    diag2_ok = bool(d2 >= 0)
    return StabilityReport(
        z_value=float(z_norm),
        diag1_ok=diag1_ok,
        diag2_ok=diag2_ok,
        stable=diag1_ok and diag2_ok and z_norm >= 0,
        eigenvalues=eigs,
    )


def z_scan(p, temperatures, radius=0.0, trap=None):
    """Vectorized z_function over a temperature grid at fixed densities.

    Returns the literal determinant criterion at each temperature; used by
    the window search and the CLI.  radius > 0 applies the local-fugacity
    substitution and requires trap.
    """
    ts = np.asarray(temperatures, dtype=float)
    if radius > 0 and trap is None:
        raise ValueError("radius > 0 requires trap parameters")
    lam = np.array(
        [thermal_wavelength(p.mass, t, p.constants) for t in ts.ravel()]
    ).reshape(ts.shape)
    u1 = _inverse_fd(1.5, p.rho1 * lam**3)
    u2 = _inverse_fd(1.5, p.rho2 * lam**3)
    if radius > 0:
        shift = trap.potential(radius) / (p.constants.k_B * ts)
        u1 = u1 - shift
        u2 = u2 - shift
    with np.errstate(over="ignore", divide="ignore"):
        f1 = fermi_dirac(0.5, np.exp(u1))
        f2 = fermi_dirac(0.5, np.exp(u2))
        d1 = 4.0 * p.a1 * lam**2 + lam**3 / f1
        d2 = 4.0 * p.a2 * lam**2 + lam**3 / f2
    x = p.a12 * (2.0 * lam**2)
    return d1 * d2 - x * x


def instability_window(
    p, t_lo, t_hi, points=256, radius=0.0, trap=None, cfg=DEFAULT_CONFIG
):
    """Locate the demixing window [T_c1, T_c2] at fixed densities.

    Scans z_function on a log-spaced temperature grid; if the criterion is
    negative anywhere, the two bracketing sign changes are refined by
    bracketed root finding and returned as (T_c1, T_c2).  Returns None
    when the mixture is stable across the whole scan.  p.T is ignored.

    Raises NoBracketError if the instability extends past either end of
    the scan range (no outer bracket exists there).
    """
    if not (t_lo > 0 and t_lo < t_hi):
        raise ValueError("require 0 < t_lo < t_hi")
    ts = np.geomspace(t_lo, t_hi, points)
    zs = z_scan(p, ts, radius=radius, trap=trap)
    neg = zs < 0
    if not neg.any():
        return None
    if neg[0] or neg[-1]:
        raise NoBracketError(
            "instability region extends beyond the scan range "
            f"[{t_lo}, {t_hi}]; widen the scan"
        )
    flips = np.nonzero(neg[:-1] != neg[1:])[0]
    if len(flips) > 2:
        warnings.warn(
            f"{len(flips)} sign changes found; returning the outermost pair",
            stacklevel=2,
        )

    def zf(t):
        return float(z_scan(replace(p, T=float(t)), np.array([t]),
                            radius=radius, trap=trap)[0])

    i0, i1 = flips[0], flips[-1]
    t_c1 = numerics.find_root(zf, ts[i0], ts[i0 + 1], cfg)
    t_c2 = numerics.find_root(zf, ts[i1], ts[i1 + 1], cfg)
    return float(t_c1), float(t_c2)
