"""Differential geometry of toroidal helices with elliptic winding cross-section.

The curve winds ``omega`` times around a torus of major radius ``R`` while
circling the symmetry (z) axis once.  With ``s = sin(omega*phi)`` and
``c = cos(omega*phi)``:

    W(phi) = R + a*c                       distance from the z axis
    r(phi) = (W*cos(phi), W*sin(phi), b*s)

``a`` is the radial and ``b`` the vertical half-axis of the winding
cross-section; ``a == b`` gives a circular cross-section.  Derived local
quantities used throughout:

    P(phi) = sqrt(a^2*s^2 + b^2*c^2)       cross-section ellipse speed
    f(phi) = |dr/dphi| = sqrt(P^2*omega^2 + W^2)

The Frenet frame is assembled from two unit fields tied to the winding
cross-section, written in the cylindrical basis (rho_hat, phi_hat, z_hat):

    theta_hat = (-a*s*rho_hat + b*c*z_hat) / P     along the winding
    n_hat     = ( b*c*rho_hat + a*s*z_hat) / P     cross-section normal

The unit tangent is T = (P*omega*theta_hat + W*phi_hat)/f, and the second
transverse direction e2 = (W*theta_hat - P*omega*phi_hat)/f completes an
orthonormal triple (T, e2, n_hat).  The curvature vector has components
(k_n along n_hat, k_e along e2); the principal normal and binormal follow
by normalising it and crossing with T.

All functions accept a scalar angle or an ndarray of angles; vector-valued
results carry the Cartesian component on the last axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this curvature the principal normal direction is numerically undefined.
KAPPA_MIN = 1e-12


class DegenerateFrame(ValueError):
    """Curvature too small to orient the principal normal."""


class InvalidTubePoint(ValueError):
    """Transverse offset reaches the local radius of curvature."""


@dataclass(frozen=True)
class HelixShape:
    """Geometric parameters of the helix.

    Parameters
    ----------
    R : float
        Major (toroidal) radius, > 0.
    a : float
        Radial half-axis of the winding cross-section, in (0, R).
    b : float
        Vertical half-axis of the winding cross-section, > 0.
    omega : int
        Number of windings per full turn around the z axis, >= 1.
    """

    R: float
    a: float
    b: float
    omega: int

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"major radius must be positive, got R={self.R}")
        if not self.a > 0:
            raise ValueError(f"radial half-axis must be positive, got a={self.a}")
        if not self.b > 0:
            raise ValueError(f"vertical half-axis must be positive, got b={self.b}")
        if not (isinstance(self.omega, (int, np.integer)) and not isinstance(self.omega, bool)):
            raise ValueError(f"winding count must be an integer, got omega={self.omega!r}")
        if self.omega < 1:
            raise ValueError(f"winding count must be >= 1, got omega={self.omega}")
        if not self.R - self.a > 0:
            raise ValueError(
                f"winding must not reach the z axis: need R - a > 0, got {self.R - self.a}"
            )


@dataclass(frozen=True)
class FrenetData:
    """Frenet frame and curve scalars at one angle (or one per angle)."""

    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    speed: np.ndarray


@dataclass(frozen=True)
class TubePoint:
    """A point in tube coordinates: angle plus transverse offsets.

    ``q_n`` is the offset along the principal normal, ``q_b`` along the
    binormal.  Validity (offset inside the local radius of curvature) is
    checked where the metric is evaluated, since it depends on the shape.
    """

    phi: float
    q_n: float
    q_b: float


@dataclass(frozen=True)
class MetricTensors:
    """Covariant and contravariant tube metric and its volume factor."""

    covariant: np.ndarray
    contravariant: np.ndarray
    sqrt_det: float


def _sc(shape, phi):
    """sin/cos of the winding angle and the axis distance W."""
    phi = np.asarray(phi, dtype=float)
    s = np.sin(shape.omega * phi)
    c = np.cos(shape.omega * phi)
    return s, c, shape.R + shape.a * c


def _cyl(phi):
    """Cylindrical unit vectors rho_hat, phi_hat at angle phi."""
    cp, sp = np.cos(phi), np.sin(phi)
    zero = np.zeros_like(cp)
    rho = np.stack([cp, sp, zero], axis=-1)
    az = np.stack([-sp, cp, zero], axis=-1)
    return rho, az


def position(shape, phi):
    """Cartesian point r(phi) on the curve, shape (..., 3)."""
    s, c, W = _sc(shape, phi)
    phi = np.asarray(phi, dtype=float)
    return np.stack([W * np.cos(phi), W * np.sin(phi), shape.b * s], axis=-1)


def velocity(shape, phi):
    """First derivative dr/dphi, shape (..., 3)."""
    return curve_derivatives(shape, phi)[0]


def curve_derivatives(shape, phi):
    """First three derivatives of r with respect to phi.

    Returns
    -------
    (r1, r2, r3) : tuple of ndarray
        Each of shape (..., 3).  In the cylindrical basis, with
        W' = -a*omega*s, W'' = -a*omega^2*c, W''' = a*omega^3*s:

            r'   = W'*rho_hat + W*phi_hat + b*omega*c*z_hat
            r''  = (W'' - W)*rho_hat + 2*W'*phi_hat - b*omega^2*s*z_hat
            r''' = (W''' - 3*W')*rho_hat + (3*W'' - W)*phi_hat - b*omega^3*c*z_hat

        (rho_hat' = phi_hat and phi_hat' = -rho_hat fold the cylindrical
        basis derivatives into the coefficients.)
    """
    a, b, w = shape.a, shape.b, shape.omega
    s, c, W = _sc(shape, phi)
    phi = np.asarray(phi, dtype=float)
    w1 = -a * w * s
    w2 = -a * w * w * c
    w3 = a * w**3 * s
    rho, az = _cyl(phi)
    zhat = np.zeros(rho.shape)
    zhat[..., 2] = 1.0
    r1 = w1[..., None] * rho + W[..., None] * az + (b * w * c)[..., None] * zhat
    r2 = (w2 - W)[..., None] * rho + (2 * w1)[..., None] * az - (b * w * w * s)[..., None] * zhat
    r3 = (w3 - 3 * w1)[..., None] * rho + (3 * w2 - W)[..., None] * az - (b * w**3 * c)[..., None] * zhat
    return r1, r2, r3


def speed(shape, phi):
    """Parametrisation speed f(phi) = |dr/dphi|."""
    a, b, w = shape.a, shape.b, shape.omega
    s, c, W = _sc(shape, phi)
    psq = (a * s) ** 2 + (b * c) ** 2
    return np.sqrt(psq * w * w + W * W)


def speed_derivatives(shape, phi):
    """First and second derivatives of the speed, (f', f'').

    Differentiates f = sqrt(D) with D = P^2*omega^2 + W^2:

        D'  = omega^3*(a^2 - b^2)*sin(2*omega*phi) - 2*a*omega*s*W
        D'' = 2*omega^4*(a^2 - b^2)*cos(2*omega*phi)
              - 2*a*omega^2*c*W + 2*a^2*omega^2*s^2
        f'  = D'/(2 f),   f'' = D''/(2 f) - D'^2/(4 f^3)
    """
    a, b, w = shape.a, shape.b, shape.omega
    s, c, W = _sc(shape, phi)
    phi = np.asarray(phi, dtype=float)
    f = speed(shape, phi)
    dsq = a * a - b * b
    d1 = w**3 * dsq * np.sin(2 * w * phi) - 2 * a * w * s * W
    d2 = 2 * w**4 * dsq * np.cos(2 * w * phi) - 2 * a * w * w * c * W + 2 * (a * w * s) ** 2
    f1 = d1 / (2 * f)
    f2 = d2 / (2 * f) - d1 * d1 / (4 * f**3)
    return f1, f2


def curvature_components(shape, phi):
    """Curvature-vector components (k_n, k_e) on (n_hat, e2).

    k_n is the projection on the cross-section normal n_hat, k_e the
    projection on the transverse direction e2 (see module docstring).
    """
    a, b, w = shape.a, shape.b, shape.omega
    s, c, W = _sc(shape, phi)
    P = np.sqrt((a * s) ** 2 + (b * c) ** 2)
    fsq = P * P * w * w + W * W
    k_n = -(b / P) * (a * w * w + W * c) / fsq
    k_e = (s / np.sqrt(fsq)) * (a / P + (w * w * W * (a * a - b * b) * c + P * P * a * w * w) / (fsq * P))
    return k_n, k_e


def curvature(shape, phi):
    """Curvature kappa(phi) >= 0 of the curve."""
    k_n, k_e = curvature_components(shape, phi)
    return np.hypot(k_n, k_e)


def torsion(shape, phi):
    """Torsion tau(phi) = (r' x r'') . r''' / |r' x r''|^2.

    Raises
    ------
    DegenerateFrame
        If the curvature is below ``KAPPA_MIN`` anywhere, so the
        osculating plane (and the sign of tau) is undefined.
    """
    r1, r2, r3 = curve_derivatives(shape, phi)
    cr = np.cross(r1, r2)
    crsq = np.sum(cr * cr, axis=-1)
    if np.any(curvature(shape, phi) <= KAPPA_MIN):
        raise DegenerateFrame("curvature below KAPPA_MIN: torsion undefined")
    return np.sum(cr * r3, axis=-1) / crsq


def curvature_potential(shape, phi):
    """Binding potential -kappa^2/8 from confinement to the curve (<= 0)."""
    return -curvature(shape, phi) ** 2 / 8.0


def frenet_frame(shape, phi):
    """Frenet frame (T, N, B) with curvature, torsion and speed.

    Built from the closed-form transverse fields rather than by
    differencing: T = (P*omega*theta_hat + W*phi_hat)/f, and N, B follow
    from the curvature components on (n_hat, e2).

    Raises
    ------
    DegenerateFrame
        If kappa <= KAPPA_MIN anywhere in ``phi``.
    """
    a, b, w = shape.a, shape.b, shape.omega
    s, c, W = _sc(shape, phi)
    phi = np.asarray(phi, dtype=float)
    P = np.sqrt((a * s) ** 2 + (b * c) ** 2)
    f = np.sqrt(P * P * w * w + W * W)

    rho, az = _cyl(phi)
    zhat = np.zeros(rho.shape)
    zhat[..., 2] = 1.0
    theta = ((-a * s / P)[..., None] * rho + (b * c / P)[..., None] * zhat)
    n_hat = ((b * c / P)[..., None] * rho + (a * s / P)[..., None] * zhat)
    tangent = ((P * w / f)[..., None] * theta + (W / f)[..., None] * az)
    e2 = ((W / f)[..., None] * theta - (P * w / f)[..., None] * az)

    k_n, k_e = curvature_components(shape, phi)
    kappa = np.hypot(k_n, k_e)
    if np.any(kappa <= KAPPA_MIN):
        raise DegenerateFrame(f"curvature {np.min(kappa):g} <= KAPPA_MIN, frame undefined")
    normal = ((k_e / kappa)[..., None] * e2 + (k_n / kappa)[..., None] * n_hat)
    binormal = ((-k_n / kappa)[..., None] * e2 + (k_e / kappa)[..., None] * n_hat)

    return FrenetData(
        tangent=tangent,
        normal=normal,
        binormal=binormal,
        kappa=kappa,
        tau=torsion(shape, phi),
        speed=f,
    )


def metric_at(shape, point):
    """Tube-coordinate metric at a TubePoint.

    Coordinates are ordered (phi, q_n, q_b).  With G = 1 - q_n*kappa:

        g_cov = [[f^2*(G^2 + tau^2*(q_n^2 + q_b^2)), -tau*q_b*f, tau*q_n*f],
                 [-tau*q_b*f, 1, 0],
                 [ tau*q_n*f, 0, 1]]

    and sqrt(det g) = f*G.  The contravariant tensor is the closed-form
    inverse (verified against direct inversion in the tests).

    Raises
    ------
    InvalidTubePoint
        If |q_n|*kappa >= 1, where the tube coordinates fold over.
    """
    phi = float(point.phi)
    f = float(speed(shape, phi))
    kap = float(curvature(shape, phi))
    tau = float(torsion(shape, phi))
    qn, qb = point.q_n, point.q_b
    if abs(qn) * kap >= 1.0:
        raise InvalidTubePoint(
            f"|q_n|*kappa = {abs(qn) * kap:g} >= 1: offset reaches the radius of curvature"
        )
    G = 1.0 - qn * kap
    cov = np.array(
        [
            [f * f * (G * G + tau * tau * (qn * qn + qb * qb)), -tau * qb * f, tau * qn * f],
            [-tau * qb * f, 1.0, 0.0],
            [tau * qn * f, 0.0, 1.0],
        ]
    )
    pref = 1.0 / (f * f * G * G)
    contra = pref * np.array(
        [
            [1.0, tau * qb * f, -tau * qn * f],
            [tau * qb * f, f * f * (G * G + tau * tau * qb * qb), -tau * tau * qn * qb * f * f],
            [-tau * qn * f, -tau * tau * qn * qb * f * f, f * f * (G * G + tau * tau * qn * qn)],
        ]
    )
    return MetricTensors(covariant=cov, contravariant=contra, sqrt_det=f * G)


def arc_length(shape, spec=None):
    """Total curve length, integral of f over one full turn.

    Always exceeds 2*pi*R (the planar circle is the degenerate limit).
    """
    from .quadrature import QuadratureSpec, integrate_periodic

    if spec is None:
        spec = QuadratureSpec()
    return integrate_periodic(lambda phi: speed(shape, phi), spec).value.real
