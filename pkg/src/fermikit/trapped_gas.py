"""Semiclassical thermodynamics of the harmonically trapped two-component gas.

Within the local-density approximation each point of the cloud is an ideal
Fermi gas with local fugacity z(r) = exp(beta*(mu - U(r))), where U collects
the trap and the mean-field shift of the other component:

    n_i(r) = lambda^-3 f_{3/2}(exp(beta*(mu_i - v0 n_j(r) - m w^2 r^2 / 2)))

The common chemical potential is fixed by the particle number
N = 4 pi int r^2 n(r) dr, which for the ideal gas collapses to the closed
form N = (k_B T / hbar w)^3 f_3(e^(beta mu)); both routes are implemented
and serve as mutual cross-checks.

The first-order expansion of the coupled profiles in the contact coupling
v0 is provided in the number-conserving form

    n_a = lambda^-3 [ f_{3/2}(z0) - beta v0 n_b^0 f_{1/2}(z0) ]

(the fugacity derivative z d/dz f_{3/2} = f_{1/2} applied to the mean-field
shift), with the chemical potential re-solved so the profile still
integrates to N.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from . import numerics
from .constants import NATURAL, PhysicalConstants
from .errors import NonPositiveInputError
from .fermi import _inverse_fd, fermi_dirac, thermal_wavelength
from .numerics import DEFAULT_CONFIG, SolverConfig

# envelope exp(-beta*(V - mu)) drops below 1e-12 of the peak at 28 k_B T
_GRID_ENVELOPE_DECADES = 28.0
_TAIL_CUTOFF_DECADES = 48.0


@dataclass(frozen=True)
class TrapParams:
    """Isotropic harmonic trap: V(r) = m w^2 r^2 / 2."""

    mass: float
    omega: float
    constants: PhysicalConstants = NATURAL

    def __post_init__(self):
        if not (self.mass > 0 and self.omega > 0):
            raise NonPositiveInputError("mass and omega must be positive")

    def potential(self, r):
        return 0.5 * self.mass * self.omega**2 * np.asarray(r, dtype=float) ** 2


@dataclass
class GasState:
    """Temperature and per-component particle numbers.

    mu is the common chemical potential of the equal-population case; it
    is None until a solver fills it in (or the caller pins it, in which
    case downstream routines use the given value instead of re-solving).
    """

    T: float
    N1: float
    N2: float
    mu: float | None = None

    def __post_init__(self):
        if not self.T > 0:
            raise NonPositiveInputError("temperature must be positive")
        if not (self.N1 > 0 and self.N2 > 0):
            raise NonPositiveInputError("particle numbers must be positive")

    def beta(self, constants=NATURAL):
        return 1.0 / (constants.k_B * self.T)


@dataclass
class RadialProfile:
    """Radial grid plus per-component densities (and local fugacities)."""

    grid: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    z1: np.ndarray | None = None
    z2: np.ndarray | None = None

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid[0] != 0.0 or np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must increase strictly from r = 0")

    @property
    def r_max(self):
        return float(self.grid[-1])

    def numbers(self):
        """(N1, N2) from 4 pi int r^2 n_i dr on the stored grid."""
        w = 4.0 * np.pi * self.grid**2
        return (
            float(simpson(w * self.n1, x=self.grid)),
            float(simpson(w * self.n2, x=self.grid)),
        )


@dataclass
class SelfConsistentResult:
    profile: RadialProfile
    mu1: float
    mu2: float
    iterations: int
    residual: float


def ideal_density(r, mu, T, trap):
    """Non-interacting density lambda^-3 f_{3/2}(e^(beta(mu - V(r))))."""
    if not T > 0:
        raise NonPositiveInputError("temperature must be positive")
    beta = 1.0 / (trap.constants.k_B * T)
    lam = thermal_wavelength(trap.mass, T, trap.constants)
    z = np.exp(beta * (mu - trap.potential(r)))
    return fermi_dirac(1.5, z) / lam**3


def trap_number_integral(mu, T, trap, cfg=DEFAULT_CONFIG):
    """Particle number 4 pi int r^2 n0(r) dr by adaptive quadrature."""
    beta = 1.0 / (trap.constants.k_B * T)
    r_cut = np.sqrt(
        2.0 * (max(mu, 0.0) + _TAIL_CUTOFF_DECADES / beta)
        / (trap.mass * trap.omega**2)
    )
    return numerics.integrate(
        lambda r: 4.0 * np.pi * r**2 * ideal_density(r, mu, T, trap),
        0.0,
        r_cut,
        cfg,
    )


def solve_mu_ideal(N, T, trap, method="closed-form", cfg=DEFAULT_CONFIG):
    """Chemical potential of the ideal trapped gas at particle number N.

    method="closed-form" inverts N = (k_B T / hbar w)^3 f_3(e^(beta mu));
    method="radial" solves the normalization integral directly.  The two
    agree to the quadrature tolerance and are tested against each other.
    """
    if not (N > 0 and T > 0):
        raise NonPositiveInputError("N and T must be positive")
    kT = trap.constants.k_B * T
    hw = trap.constants.hbar * trap.omega
    if method == "closed-form":
        y = N * (hw / kT) ** 3
        return float(_inverse_fd(3.0, y)[0]) * kT
    if method == "radial":
        # bracket from the classical and zero-temperature limits
        mu_cl = kT * np.log(N * (hw / kT) ** 3)
        e_f = hw * (6.0 * N) ** (1.0 / 3.0)
        lo = min(mu_cl, 0.0) - 5.0 * kT
        hi = e_f + 5.0 * kT
        f = lambda mu: trap_number_integral(mu, T, trap, cfg) - N
        width = 10.0 * kT
        while f(lo) > 0:
            lo -= width
            width *= 2.0
        width = 10.0 * kT
        while f(hi) < 0:
            hi += width
            width *= 2.0
        tight = SolverConfig(
            abs_tol=max(1e-10 * N, 1e-300),
            rel_tol=1e-13,
            max_iter=cfg.max_iter,
            damping=cfg.damping,
        )
        return numerics.find_root(f, lo, hi, tight)
    raise ValueError(f"unknown method {method!r}")


def default_radial_grid(mu, T, trap, points=512):
    """Uniform grid on [0, r_max] with the envelope < 1e-12 of the peak."""
    kT = trap.constants.k_B * T
    r_max = np.sqrt(
        2.0 * (max(mu, 0.0) + _GRID_ENVELOPE_DECADES * kT)
        / (trap.mass * trap.omega**2)
    )
    return np.linspace(0.0, r_max, points)


def _grid_number(grid, dens):
    return float(simpson(4.0 * np.pi * grid**2 * dens, x=grid))


def _solve_mu_on_grid(grid, shift, N, T, trap, mu_guess, cfg):
    """Solve 4 pi int r^2 lambda^-3 f32(e^(beta(mu - shift))) dr = N for mu."""
    beta = 1.0 / (trap.constants.k_B * T)
    lam3 = thermal_wavelength(trap.mass, T, trap.constants) ** 3

    def dens(mu):
        return fermi_dirac(1.5, np.exp(beta * (mu - shift))) / lam3

    f = lambda mu: _grid_number(grid, dens(mu)) - N
    kT = trap.constants.k_B * T
    lo, hi = mu_guess - kT, mu_guess + kT
    width = 2.0 * kT
    while f(lo) > 0:
        lo -= width
        width *= 2.0
    width = 2.0 * kT
    while f(hi) < 0:
        hi += width
        width *= 2.0
    tight = SolverConfig(
        abs_tol=max(1e-11 * N, 1e-300), rel_tol=1e-14,
        max_iter=cfg.max_iter, damping=cfg.damping,
    )
    mu = numerics.find_root(f, lo, hi, tight)
    return mu, dens(mu)


def self_consistent_profiles(state, v0, trap, grid=None, cfg=DEFAULT_CONFIG):
    """Coupled mean-field density profiles of the two components.

    Damped fixed-point iteration on (n1, n2): each sweep recomputes the
    densities from the opposite component's mean-field shift v0*n_j(r),
    re-solving each chemical potential so both components integrate to
    their particle numbers.  Jacobi-style updates keep the N1 = N2 case
    exactly symmetric.

    Parameters
    ----------
    state : GasState
        Temperature and particle numbers; state.mu is ignored (the
        normalization fixes the potentials) but filled with mu1 on return.
    v0 : float
        Contact coupling (energy * volume); attractive for v0 < 0.
    trap : TrapParams
    grid : ndarray, optional
        Radial grid; defaults to default_radial_grid at the ideal mu.
    cfg : SolverConfig
        Damping, tolerances and iteration budget for the outer iteration.

    Returns
    -------
    SelfConsistentResult
        Converged profile (with local fugacities), both chemical
        potentials, sweep count and final fixed-point residual.
    """
    beta = state.beta(trap.constants)
    mu1 = solve_mu_ideal(state.N1, state.T, trap)
    mu2 = mu1 if state.N2 == state.N1 else solve_mu_ideal(state.N2, state.T, trap)
    if grid is None:
        grid = default_radial_grid(max(mu1, mu2), state.T, trap)
    grid = np.asarray(grid, dtype=float)
    V = trap.potential(grid)

    n1 = ideal_density(grid, mu1, state.T, trap)
    n2 = n1 if state.N2 == state.N1 else ideal_density(grid, mu2, state.T, trap)
    peak = max(float(n1.max()), float(n2.max()))
    if beta * abs(v0) * peak > 0.25:
        warnings.warn(
            "beta*|v0|*n_peak = "
            f"{beta * abs(v0) * peak:.3g} is outside the weak-coupling regime; "
            "the mean-field profiles may be unreliable",
            stacklevel=2,
        )

    m = grid.size
    mus = [mu1, mu2]
    sweeps = [0]

    def sweep(x):
        sweeps[0] += 1
        a, b = x[:m], x[m:]
        mus[0], d1 = _solve_mu_on_grid(
            grid, v0 * b + V, state.N1, state.T, trap, mus[0], cfg)
        mus[1], d2 = _solve_mu_on_grid(
            grid, v0 * a + V, state.N2, state.T, trap, mus[1], cfg)
        return np.concatenate([d1, d2])

    x0 = np.concatenate([n1, n2])
    x = numerics.fixed_point(sweep, x0, cfg)
    final = sweep(x)
    residual = float(np.max(np.abs(final - x)))
    n1, n2 = final[:m], final[m:]
    z1 = np.exp(beta * (mus[0] - v0 * n2 - V))
    z2 = np.exp(beta * (mus[1] - v0 * n1 - V))
    state.mu = mus[0]
    return SelfConsistentResult(
        profile=RadialProfile(grid, n1, n2, z1, z2),
        mu1=mus[0],
        mu2=mus[1],
        iterations=sweeps[0],
        residual=residual,
    )


def perturbative_density(r, state, v0, trap, legacy_form=False):
    """First-order-in-v0 density of one component at radii r.

    Standard form: n = lambda^-3 [f_{3/2}(z0) - beta v0 n_b0 f_{1/2}(z0)]
    with z0 = e^(beta(mu - V)) and n_b0 the ideal profile of the partner
    component.  Requires N1 = N2 (a single chemical potential).

    If state.mu is set, it is used as-is and the bare correction is
    returned (useful for sign checks: attractive v0 raises the density at
    every radius).  If state.mu is None the chemical potential is
    re-solved so the first-order profile still integrates to N — the
    number-conserving form whose difference from the self-consistent
    solution is O(v0^2).

    legacy_form=True evaluates an alternative prefactor convention,
    3/2 (m/(2 pi hbar^2))^{3/2} beta^{-5/2} [f_{5/2} - v0 z0^2 f_{3/2} beta n_b0]
    with n_b0 = 3/2 (m/(pi hbar^2))^{3/2} beta^{-5/2} f_{5/2}.  It is kept
    only for side-by-side comparison output; it is not number-conserving
    and its prefactor does not carry density units, so only shapes should
    be compared.
    """
    if abs(state.N1 - state.N2) > 1e-9 * max(state.N1, state.N2):
        raise ValueError("perturbative form assumes equal populations N1 = N2")
    beta = state.beta(trap.constants)
    kB_T = 1.0 / beta
    c = trap.constants

    def standard(mu, rr):
        lam3 = thermal_wavelength(trap.mass, state.T, c) ** 3
        z0 = np.exp(beta * (mu - trap.potential(rr)))
        f32 = fermi_dirac(1.5, z0)
        nb0 = f32 / lam3
        return (f32 - beta * v0 * nb0 * fermi_dirac(0.5, z0)) / lam3

    if legacy_form:
        mu = state.mu if state.mu is not None else solve_mu_ideal(
            state.N1, state.T, trap)
        pref = 1.5 * (trap.mass / (2.0 * np.pi * c.hbar**2)) ** 1.5 * kB_T**2.5
        pref_b = 1.5 * (trap.mass / (np.pi * c.hbar**2)) ** 1.5 * kB_T**2.5
        z0 = np.exp(beta * (mu - trap.potential(r)))
        f52 = fermi_dirac(2.5, z0)
        nb0 = pref_b * f52
        return pref * (f52 - v0 * z0**2 * fermi_dirac(1.5, z0) * beta * nb0)

    if state.mu is not None:
        return standard(state.mu, r)

    mu0 = solve_mu_ideal(state.N1, state.T, trap)
    grid = default_radial_grid(mu0, state.T, trap)
    f = lambda mu: _grid_number(grid, standard(mu, grid)) - state.N1
    kT = kB_T
    lo, hi = mu0 - kT, mu0 + kT
    width = 2.0 * kT
    while f(lo) > 0:
        lo -= width
        width *= 2.0
    width = 2.0 * kT
    while f(hi) < 0:
        hi += width
        width *= 2.0
    tight = SolverConfig(abs_tol=max(1e-11 * state.N1, 1e-300), rel_tol=1e-14)
    mu = numerics.find_root(f, lo, hi, tight)
    return standard(mu, r)
