"""Geometry checks: closed forms against finite differences, vector
identities, and an independently coded circular-cross-section path."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from helixtm.geometry import (
    KAPPA_MIN,
    DegenerateFrame,
    HelixShape,
    InvalidTubePoint,
    TubePoint,
    arc_length,
    curvature,
    curvature_components,
    curvature_potential,
    curve_derivatives,
    frenet_frame,
    metric_at,
    position,
    speed,
    speed_derivatives,
    torsion,
    velocity,
)
from helixtm.quadrature import QuadratureSpec

CIRCULAR = HelixShape(R=1.0, a=0.5, b=0.5, omega=4)
UPRIGHT = HelixShape(R=1.0, a=0.25, b=0.75, omega=4)
FLAT = HelixShape(R=1.0, a=0.75, b=0.25, omega=4)
SIXTURN = HelixShape(R=1.0, a=0.75, b=0.25, omega=6)


def random_shapes(rng, count):
    shapes = []
    for _ in range(count):
        R = rng.uniform(0.5, 3.0)
        shapes.append(
            HelixShape(
                R=R,
                a=rng.uniform(0.05, 0.8) * R,
                b=rng.uniform(0.05, 2.0),
                omega=int(rng.integers(1, 9)),
            )
        )
    return shapes


# Independent re-implementation of the circular-cross-section closed forms,
# used as the reduction oracle for the general (elliptic) code path.

def circular_reference(shape, phi):
    assert shape.a == shape.b
    a, w = shape.a, shape.omega
    s, c = np.sin(w * phi), np.cos(w * phi)
    W = shape.R + a * c
    f = math.sqrt(a * a * w * w + W * W)
    rho = np.array([math.cos(phi), math.sin(phi), 0.0])
    az = np.array([-math.sin(phi), math.cos(phi), 0.0])
    k = np.array([0.0, 0.0, 1.0])
    theta = -s * rho + c * k
    n_hat = c * rho + s * k
    e2 = (W * theta - a * w * az) / f
    tangent = (a * w * theta + W * az) / f
    p1 = -(a * w * w + W * c) / f**2
    p2 = (s / f) * (1.0 + (a * w / f) ** 2)
    kappa = math.hypot(p1, p2)
    normal = (p2 * e2 + p1 * n_hat) / kappa
    binormal = (-p1 * e2 + p2 * n_hat) / kappa
    return f, p1, p2, kappa, tangent, normal, binormal


class TestShapeValidation:
    def test_rejects_nonpositive_lengths(self):
        with pytest.raises(ValueError):
            HelixShape(R=0.0, a=0.5, b=0.5, omega=4)
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=-0.1, b=0.5, omega=4)
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=0.5, b=0.0, omega=4)

    def test_rejects_bad_winding_count(self):
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=0.5, b=0.5, omega=0)
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=0.5, b=0.5, omega=2.5)

    def test_rejects_winding_reaching_axis(self):
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=1.0, b=0.5, omega=4)
        with pytest.raises(ValueError):
            HelixShape(R=1.0, a=1.5, b=0.5, omega=4)


class TestPosition:
    def test_circular_at_zero(self):
        assert_allclose(position(CIRCULAR, 0.0), [1.5, 0.0, 0.0], atol=1e-15)

    def test_upright_at_eighth_turn(self):
        # omega*phi = pi/2 kills the cosine: W = 1, z = 0.75
        got = position(UPRIGHT, math.pi / 8)
        want = [math.cos(math.pi / 8), math.sin(math.pi / 8), 0.75]
        assert_allclose(got, want, atol=1e-15)

    def test_six_turn_point(self):
        # direct evaluation of the defining parametrisation at phi = 0.3
        phi = 0.3
        W = 1.0 + 0.75 * math.cos(6 * phi)
        want = [W * math.cos(phi), W * math.sin(phi), 0.25 * math.sin(6 * phi)]
        assert_allclose(position(SIXTURN, phi), want, rtol=1e-15)

    def test_full_turn_periodicity(self):
        rng = np.random.default_rng(11)
        phi = rng.uniform(0, 2 * math.pi, 50)
        for shape in random_shapes(rng, 5):
            assert_allclose(position(shape, phi + 2 * math.pi), position(shape, phi), atol=1e-12)

    def test_velocity_matches_position_differences(self):
        rng = np.random.default_rng(12)
        h = 1e-6
        for shape in random_shapes(rng, 5):
            phi = rng.uniform(0, 2 * math.pi, 20)
            fd = (position(shape, phi + h) - position(shape, phi - h)) / (2 * h)
            assert_allclose(velocity(shape, phi), fd, rtol=1e-7, atol=1e-7)

    def test_higher_curve_derivatives_match_differences(self):
        rng = np.random.default_rng(13)
        h = 1e-5
        for shape in random_shapes(rng, 3):
            phi = rng.uniform(0, 2 * math.pi, 10)
            r1, r2, r3 = curve_derivatives(shape, phi)
            fd2 = (velocity(shape, phi + h) - velocity(shape, phi - h)) / (2 * h)
            fd3 = (curve_derivatives(shape, phi + h)[1] - curve_derivatives(shape, phi - h)[1]) / (2 * h)
            assert_allclose(r2, fd2, rtol=1e-6, atol=1e-6)
            assert_allclose(r3, fd3, rtol=1e-6, atol=1e-6)


class TestSpeed:
    def test_circular_at_zero(self):
        assert speed(CIRCULAR, 0.0) == pytest.approx(2.5, abs=1e-15)

    def test_circular_formula_anywhere(self):
        phi = np.linspace(0, 2 * math.pi, 97)
        a, w = CIRCULAR.a, CIRCULAR.omega
        W = CIRCULAR.R + a * np.cos(w * phi)
        assert_allclose(speed(CIRCULAR, phi), np.sqrt(a * a * w * w + W * W), atol=1e-14)

    def test_upright_at_eighth_turn(self):
        assert speed(UPRIGHT, math.pi / 8) == pytest.approx(math.sqrt(2.0), abs=1e-14)

    def test_derivatives_against_finite_differences(self):
        rng = np.random.default_rng(21)
        h = 1e-5
        for shape in random_shapes(rng, 8):
            phi = rng.uniform(0, 2 * math.pi, 25)
            f1, f2 = speed_derivatives(shape, phi)
            fd1 = (speed(shape, phi + h) - speed(shape, phi - h)) / (2 * h)
            fd2 = (speed(shape, phi + h) - 2 * speed(shape, phi) + speed(shape, phi - h)) / h**2
            assert_allclose(f1, fd1, rtol=1e-6, atol=1e-8)
            assert_allclose(f2, fd2, rtol=1e-4, atol=1e-4)

    def test_circular_first_derivative_closed_form(self):
        phi = np.linspace(0.1, 2 * math.pi, 40)
        a, w = CIRCULAR.a, CIRCULAR.omega
        W = CIRCULAR.R + a * np.cos(w * phi)
        f = speed(CIRCULAR, phi)
        want = -a * w * W * np.sin(w * phi) / f
        assert_allclose(speed_derivatives(CIRCULAR, phi)[0], want, atol=1e-13)
        assert speed_derivatives(CIRCULAR, 0.0)[0] == pytest.approx(0.0, abs=1e-15)

    def test_winding_periodicity(self):
        rng = np.random.default_rng(22)
        for shape in random_shapes(rng, 6):
            phi = rng.uniform(0, 2 * math.pi, 20)
            step = 2 * math.pi / shape.omega
            assert_allclose(speed(shape, phi + step), speed(shape, phi), rtol=1e-12)
            for got, want in zip(speed_derivatives(shape, phi + step), speed_derivatives(shape, phi)):
                assert_allclose(got, want, rtol=1e-9, atol=1e-12)


class TestCurvature:
    def test_circular_at_zero(self):
        k_n, k_e = curvature_components(CIRCULAR, 0.0)
        assert k_n == pytest.approx(-1.52, abs=1e-14)
        assert k_e == pytest.approx(0.0, abs=1e-15)
        assert curvature(CIRCULAR, 0.0) == pytest.approx(1.52, abs=1e-14)

    def test_near_circle_limit(self):
        tiny = HelixShape(R=1.0, a=1e-8, b=1e-8, omega=4)
        phi = np.linspace(0, 2 * math.pi, 17)
        assert_allclose(curvature(tiny, phi), 1.0, atol=1e-6)

    def test_vector_oracle_analytic_derivatives(self):
        # kappa = |r' x r''| / |r'|^3 with the analytic curve derivatives
        rng = np.random.default_rng(31)
        for shape in random_shapes(rng, 8):
            phi = rng.uniform(0, 2 * math.pi, 30)
            r1, r2, _ = curve_derivatives(shape, phi)
            cross = np.cross(r1, r2)
            want = np.linalg.norm(cross, axis=-1) / np.linalg.norm(r1, axis=-1) ** 3
            assert_allclose(curvature(shape, phi), want, rtol=1e-12)

    def test_vector_oracle_finite_differences(self):
        h = 1e-4
        phi = np.linspace(0.05, 2 * math.pi, 25)
        for shape in (CIRCULAR, UPRIGHT, FLAT, SIXTURN):
            r1 = (position(shape, phi + h) - position(shape, phi - h)) / (2 * h)
            r2 = (position(shape, phi + h) - 2 * position(shape, phi) + position(shape, phi - h)) / h**2
            want = np.linalg.norm(np.cross(r1, r2), axis=-1) / np.linalg.norm(r1, axis=-1) ** 3
            assert_allclose(curvature(shape, phi), want, rtol=1e-6)


class TestTorsion:
    def test_near_circle_is_planar(self):
        tiny = HelixShape(R=1.0, a=1e-8, b=1e-8, omega=4)
        phi = np.linspace(0, 2 * math.pi, 17)
        assert np.max(np.abs(torsion(tiny, phi))) < 1e-6

    def test_degenerate_frame_raises(self):
        # a(omega^2 + 1) = R makes the winding curvature cancel the ring
        # curvature exactly at omega*phi = pi.
        degenerate = HelixShape(R=1.0, a=0.1, b=0.1, omega=3)
        assert curvature(degenerate, math.pi / 3) <= KAPPA_MIN
        with pytest.raises(DegenerateFrame):
            torsion(degenerate, math.pi / 3)
        with pytest.raises(DegenerateFrame):
            frenet_frame(degenerate, np.array([0.1, math.pi / 3]))
        # away from the degenerate angle the same shape is fine
        assert np.isfinite(torsion(degenerate, 0.3))


class TestFrenetFrame:
    def test_orthonormal_right_handed_everywhere(self):
        rng = np.random.default_rng(41)
        for shape in random_shapes(rng, 10):
            phi = rng.uniform(0, 2 * math.pi, 100)
            fr = frenet_frame(shape, phi)
            for v in (fr.tangent, fr.normal, fr.binormal):
                assert_allclose(np.sum(v * v, axis=-1), 1.0, atol=1e-12)
            assert np.max(np.abs(np.sum(fr.tangent * fr.normal, axis=-1))) < 1e-12
            assert np.max(np.abs(np.sum(fr.tangent * fr.binormal, axis=-1))) < 1e-12
            assert np.max(np.abs(np.sum(fr.normal * fr.binormal, axis=-1))) < 1e-12
            assert_allclose(np.cross(fr.tangent, fr.normal), fr.binormal, atol=1e-12)
            assert np.all(fr.kappa >= 0)

    def test_tangent_is_normalized_velocity(self):
        rng = np.random.default_rng(42)
        for shape in random_shapes(rng, 6):
            phi = rng.uniform(0, 2 * math.pi, 40)
            fr = frenet_frame(shape, phi)
            v = velocity(shape, phi)
            assert_allclose(fr.tangent, v / np.linalg.norm(v, axis=-1, keepdims=True), atol=1e-13)
            assert_allclose(fr.speed, np.linalg.norm(v, axis=-1), rtol=1e-13)

    def test_tangent_matches_position_differences(self):
        h = 1e-6
        fd = (position(UPRIGHT, 0.7 + h) - position(UPRIGHT, 0.7 - h)) / (2 * h)
        fd /= np.linalg.norm(fd)
        assert_allclose(frenet_frame(UPRIGHT, 0.7).tangent, fd, atol=1e-9)

    def test_circular_reduction(self):
        rng = np.random.default_rng(43)
        for R, a, w in [(1.0, 0.5, 4), (1.0, 0.25, 6), (2.0, 0.9, 3), (1.0, 0.75, 1)]:
            shape = HelixShape(R=R, a=a, b=a, omega=w)
            for phi in rng.uniform(0.02, 2 * math.pi, 25):
                f, p1, p2, kappa, tangent, normal, binormal = circular_reference(shape, phi)
                fr = frenet_frame(shape, phi)
                assert fr.speed == pytest.approx(f, rel=1e-12)
                k_n, k_e = curvature_components(shape, phi)
                assert k_n == pytest.approx(p1, rel=1e-12, abs=1e-13)
                assert k_e == pytest.approx(p2, rel=1e-12, abs=1e-13)
                assert fr.kappa == pytest.approx(kappa, rel=1e-12)
                assert_allclose(fr.tangent, tangent, atol=1e-12)
                assert_allclose(fr.normal, normal, atol=1e-12)
                assert_allclose(fr.binormal, binormal, atol=1e-12)

    def test_frame_transport_equations(self):
        # dT/dphi = f*kappa*N, dN/dphi = f*(-kappa*T + tau*B), dB/dphi = -f*tau*N
        rng = np.random.default_rng(44)
        h = 1e-6
        for shape in (CIRCULAR, UPRIGHT, FLAT, SIXTURN):
            for phi in rng.uniform(0, 2 * math.pi, 25):
                fr = frenet_frame(shape, phi)
                plus = frenet_frame(shape, phi + h)
                minus = frenet_frame(shape, phi - h)
                dT = (plus.tangent - minus.tangent) / (2 * h)
                dN = (plus.normal - minus.normal) / (2 * h)
                dB = (plus.binormal - minus.binormal) / (2 * h)
                f, k, t = fr.speed, fr.kappa, fr.tau
                assert_allclose(dT, f * k * fr.normal, atol=1e-6)
                assert_allclose(dN, f * (-k * fr.tangent + t * fr.binormal), atol=1e-6)
                assert_allclose(dB, -f * t * fr.normal, atol=1e-6)


class TestCurvaturePotential:
    def test_circular_at_zero(self):
        assert curvature_potential(CIRCULAR, 0.0) == pytest.approx(-0.28880, abs=1e-5)

    def test_never_positive(self):
        rng = np.random.default_rng(51)
        for shape in random_shapes(rng, 10):
            assert np.all(curvature_potential(shape, rng.uniform(0, 2 * math.pi, 50)) <= 0)

    def test_winding_periodicity(self):
        phi = np.linspace(0, 2 * math.pi, 33)
        step = 2 * math.pi / UPRIGHT.omega
        assert_allclose(
            curvature_potential(UPRIGHT, phi + step), curvature_potential(UPRIGHT, phi), rtol=1e-12
        )

    def test_eccentric_dominates_circular(self):
        phi = np.linspace(0, 2 * math.pi, 257)
        circ = np.max(np.abs(curvature_potential(CIRCULAR, phi)))
        flat = np.max(np.abs(curvature_potential(FLAT, phi)))
        upright = np.max(np.abs(curvature_potential(UPRIGHT, phi)))
        assert flat > 5 * circ
        assert upright > circ
        # flattened loops (a > b) bind far more strongly than upright ones
        assert flat > upright


class TestMetric:
    def test_on_curve_diagonal(self):
        m = metric_at(UPRIGHT, TubePoint(phi=0.9, q_n=0.0, q_b=0.0))
        f = speed(UPRIGHT, 0.9)
        assert_allclose(m.covariant, np.diag([f * f, 1.0, 1.0]), atol=1e-13)
        assert m.sqrt_det == pytest.approx(float(f), rel=1e-13)

    def _random_points(self, rng, shape, count):
        pts = []
        while len(pts) < count:
            phi = rng.uniform(0, 2 * math.pi)
            kap = float(curvature(shape, phi))
            qn = rng.uniform(-0.9, 0.9) / kap
            pts.append(TubePoint(phi=phi, q_n=qn, q_b=rng.uniform(-0.5, 0.5)))
        return pts

    def test_inverse_and_determinant(self):
        rng = np.random.default_rng(61)
        for shape in (CIRCULAR, UPRIGHT, FLAT, SIXTURN):
            for pt in self._random_points(rng, shape, 25):
                m = metric_at(shape, pt)
                assert_allclose(m.covariant, m.covariant.T, atol=1e-14)
                assert_allclose(m.contravariant, m.contravariant.T, atol=1e-14)
                assert_allclose(m.contravariant @ m.covariant, np.eye(3), atol=1e-10)
                assert_allclose(m.contravariant, np.linalg.inv(m.covariant), atol=1e-10)
                assert np.linalg.det(m.covariant) == pytest.approx(m.sqrt_det**2, rel=1e-10)
                f = float(speed(shape, pt.phi))
                kap = float(curvature(shape, pt.phi))
                assert m.sqrt_det == pytest.approx(f * (1 - pt.q_n * kap), rel=1e-12)

    def test_quadratic_form_against_embedding(self):
        # dx.dx for a small tube-coordinate step matches g_ij dq^i dq^j
        def embed(shape, phi, qn, qb):
            fr = frenet_frame(shape, phi)
            return position(shape, phi) + qn * fr.normal + qb * fr.binormal

        rng = np.random.default_rng(62)
        for shape in (CIRCULAR, UPRIGHT, FLAT):
            for pt in self._random_points(rng, shape, 10):
                m = metric_at(shape, pt)
                dq = rng.uniform(-1, 1, 3) * 1e-4
                x1 = embed(shape, pt.phi + dq[0], pt.q_n + dq[1], pt.q_b + dq[2])
                x0 = embed(shape, pt.phi - dq[0], pt.q_n - dq[1], pt.q_b - dq[2])
                dx = (x1 - x0) / 2.0
                got = float(dx @ dx)
                want = float(dq @ m.covariant @ dq)
                assert got == pytest.approx(want, rel=1e-6)

    def test_invalid_offset_raises(self):
        kap = float(curvature(CIRCULAR, 0.0))  # 1.52
        with pytest.raises(InvalidTubePoint):
            metric_at(CIRCULAR, TubePoint(phi=0.0, q_n=1.0 / kap, q_b=0.0))
        with pytest.raises(InvalidTubePoint):
            metric_at(CIRCULAR, TubePoint(phi=0.0, q_n=-1.1 / kap, q_b=0.0))
        # just inside is fine
        metric_at(CIRCULAR, TubePoint(phi=0.0, q_n=0.99 / kap, q_b=0.0))


class TestArcLength:
    def test_circle_limit(self):
        tiny = HelixShape(R=1.0, a=1e-10, b=1e-10, omega=4)
        assert arc_length(tiny) == pytest.approx(2 * math.pi, abs=1e-8)

    def test_against_simpson_oracle(self):
        n = 1_000_000
        phi = np.linspace(0.0, 2 * math.pi, n + 1)
        vals = speed(UPRIGHT, phi)
        h = 2 * math.pi / n
        simpson = h / 3 * (vals[0] + vals[-1] + 4 * vals[1:-1:2].sum() + 2 * vals[2:-1:2].sum())
        assert arc_length(UPRIGHT) == pytest.approx(simpson, abs=1e-9)

    def test_axis_swap_changes_length(self):
        upright = arc_length(UPRIGHT)
        flat = arc_length(FLAT)
        assert upright == pytest.approx(14.937429, abs=1e-5)
        assert flat == pytest.approx(15.234675, abs=1e-5)
        assert abs(upright - flat) > 0.1

    def test_exceeds_plain_circle(self):
        rng = np.random.default_rng(71)
        for shape in random_shapes(rng, 6):
            assert arc_length(shape) > 2 * math.pi * shape.R

    def test_quadrature_spec_is_honoured(self):
        loose = arc_length(UPRIGHT, QuadratureSpec(initial_points=32, tolerance=1e-6))
        tight = arc_length(UPRIGHT, QuadratureSpec(initial_points=256, tolerance=1e-12))
        assert loose == pytest.approx(tight, abs=1e-6)
