"""Probability currents, toroidal moments, and thermal averages.

Natural units (hbar = mass = charge = 1, lengths in units of the major
radius) throughout; the command line layer rescales on output.

For a state with basis coefficients C_n the scalar current along the
curve (the flux through the cross-section at angle phi) is

    j(phi) = Re[ conj(S0) * S1 ] / (2*pi*f^2),
    S0 = sum_n C_n e^{i n omega phi},  S1 = sum_n (p + n*omega) C_n e^{i n omega phi}.

The branch phase e^{i p phi} cancels between the factors, so only the
relative harmonics enter.  ``current_mode_sum`` evaluates the same
quantity as an explicit double sum over (m, n) pairs without conjugation,
which is valid for real coefficient vectors and serves as an independent
cross-check of the spectral path.

The toroidal (anapole) moment of a line current j(phi) flowing along the
curve is

    T = (1/10) * Integral [ (j_vec . r) r - 2 r^2 j_vec ] f dphi,

with j_vec = j(phi) * T_hat.  Since T_hat * f = dr/dphi, the integrand
reduces to j(phi) * [ (r' . r) r - 2 r^2 r' ] with no explicit frame or
extra speed factor; the same reduction with a constant loop current I
gives the classical moment, whose closed form is

    T_classical = -(pi * omega * I * a * b * R / 2) z_hat

for the elliptic cross-section (a = b recovers the circular case).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .quadrature import QuadratureSpec, integrate_periodic


@dataclass(frozen=True)
class CurrentProfile:
    """Sampled scalar current over one turn; state_ref = (p, alpha, vc)."""

    phi: np.ndarray
    values: np.ndarray
    state_ref: tuple


@dataclass(frozen=True)
class MomentResult:
    """Toroidal moment vector and its z component; state_ref = (p, alpha, vc)."""

    vector: np.ndarray
    z: float
    state_ref: tuple


@dataclass(frozen=True)
class ThermalSpec:
    """Boltzmann-weighting settings for sub-state averages.

    ``normalize=True`` divides by the partition sum (weights are shifted
    by the lowest energy first, so any temperature is safe).  With
    ``normalize=False`` the raw weighted sum with unshifted exponents is
    returned, which can overflow for deep levels at small temperature;
    the OverflowError is deliberately allowed to surface.
    """

    temperature: float
    normalize: bool = True

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")


def _harmonic_sums(state, shape, phi):
    phi = np.asarray(phi, dtype=float)
    n = state.n_indices
    k = state.p + shape.omega * n
    phases = np.exp(1j * shape.omega * np.multiply.outer(phi, n.astype(float)))
    s0 = phases @ state.coefficients
    s1 = phases @ (k * state.coefficients)
    return s0, s1


def current(state, shape, phi):
    """Scalar current j(phi) of a normalised eigenstate."""
    s0, s1 = _harmonic_sums(state, shape, phi)
    f = geometry.speed(shape, phi)
    return np.real(np.conj(s0) * s1) / (2.0 * math.pi * f * f)


def current_mode_sum(state, shape, phi):
    """j(phi) as an explicit (m, n) double sum; assumes real coefficients.

    Includes the odd sin term multiplying f'/(2 f^3), which cancels pair
    by pair for a symmetric coefficient product; it is kept so the
    cancellation itself is exercised by the cross-check.
    """
    phi = np.asarray(phi, dtype=float)
    f = geometry.speed(shape, phi)
    f1, _ = geometry.speed_derivatives(shape, phi)
    c = state.coefficients
    idx = state.n_indices
    w = shape.omega
    total = np.zeros_like(phi, dtype=complex)
    for i, m in enumerate(idx):
        for j, n in enumerate(idx):
            arg = w * (n - m) * phi
            total = total + c[i] * c[j] * (
                (state.p + w * n) * np.cos(arg) / (f * f)
                - f1 * np.sin(arg) / (2.0 * f**3)
            )
    return total.real / (2.0 * math.pi)


def sample_current_profile(state, shape, grid_size):
    """Tabulate j on a uniform angle grid (at least 2 points per winding)."""
    if grid_size < 2 * shape.omega:
        raise ValueError(f"grid_size must be >= 2*omega = {2 * shape.omega}, got {grid_size}")
    phi = 2.0 * math.pi * np.arange(grid_size) / grid_size
    return CurrentProfile(
        phi=phi,
        values=current(state, shape, phi),
        state_ref=(state.p, state.alpha, state.include_vc),
    )


def _moment_from_current(shape, current_fn, quad):
    if quad is None:
        quad = QuadratureSpec(initial_points=64 * shape.omega)
    out = np.empty(3)
    for axis in range(3):
        def integrand(phi, axis=axis):
            r = geometry.position(shape, phi)
            v = geometry.velocity(shape, phi)
            dot = np.sum(v * r, axis=-1)
            rsq = np.sum(r * r, axis=-1)
            return current_fn(phi) * (dot * r[..., axis] - 2.0 * rsq * v[..., axis])
        out[axis] = integrate_periodic(integrand, quad).value.real / 10.0
    return out


def toroidal_moment(state, shape, quad=None):
    """Toroidal moment of an eigenstate's current distribution."""
    vec = _moment_from_current(shape, lambda phi: current(state, shape, phi), quad)
    return MomentResult(
        vector=vec, z=float(vec[2]), state_ref=(state.p, state.alpha, state.include_vc)
    )


def classical_moment_numeric(shape, loop_current, quad=None):
    """Toroidal moment vector of a constant loop current by quadrature."""
    return _moment_from_current(shape, lambda phi: np.full(np.shape(phi), loop_current), quad)


def classical_moment_closed(shape, loop_current):
    """Closed-form classical moment, purely along -z."""
    z = -math.pi * shape.omega * loop_current * shape.a * shape.b * shape.R / 2.0
    return np.array([0.0, 0.0, z])


def free_particle_current(shape, p, quad=None):
    """Loop current 2*pi*p/L^2 of a curvature-free particle in branch p."""
    length = geometry.arc_length(shape, quad)
    return 2.0 * math.pi * p / (length * length)


def thermal_average(moments, spec):
    """Boltzmann average of (energy, value) pairs over sub-states.

    Normalized mode shifts energies by their minimum (the shift cancels
    against the partition sum); raw mode exponentiates the energies as
    given, so it can overflow by design.
    """
    pairs = [(float(e), float(v)) for e, v in moments]
    if not pairs:
        raise ValueError("need at least one (energy, value) pair")
    if spec.normalize:
        low = min(e for e, _ in pairs)
        weights = [math.exp(-(e - low) / spec.temperature) for e, _ in pairs]
        return sum(w * v for w, (_, v) in zip(weights, pairs)) / sum(weights)
    return sum(v * math.exp(-e / spec.temperature) for e, v in pairs)
