import math

import numpy as np
import pytest

from scattercorr import sphquad

from oracles import series_bessel_j, sinc


class TestCircleRule:
    def test_weights_sum_to_circumference(self):
        rule = sphquad.circle_rule(4)
        assert np.sum(rule.weights) == pytest.approx(2.0 * math.pi, rel=1e-15)

    def test_trig_polynomial_exactness(self):
        rule = sphquad.circle_rule(16)
        theta = np.arctan2(rule.nodes[:, 1], rule.nodes[:, 0])
        value = np.dot(rule.weights, np.exp(3j * theta))
        assert abs(value) < 1e-14

    def test_plane_wave_average_is_bessel(self):
        # d = 2 direction average of a plane wave; expected value from the
        # independent series oracle
        rule = sphquad.circle_rule(64)
        kr = 5.0
        value = sphquad.integrate(rule, lambda u: np.exp(1j * kr * u[:, 0]))
        assert value == pytest.approx(2.0 * math.pi * series_bessel_j(0, kr), abs=1e-12)

    def test_unit_nodes_and_fixed_order(self):
        rule = sphquad.circle_rule(8)
        assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-14)
        assert rule.nodes[1] == pytest.approx(
            [math.cos(2.0 * math.pi / 8.0), math.sin(2.0 * math.pi / 8.0)], abs=1e-15)
        again = sphquad.circle_rule(8)
        assert np.array_equal(rule.nodes, again.nodes)
        assert np.array_equal(rule.weights, again.weights)

    def test_zero_nodes_rejected(self):
        with pytest.raises(ValueError):
            sphquad.circle_rule(0)


class TestSphereRule:
    def test_weights_sum_to_sphere_volume(self):
        rule = sphquad.sphere_rule(12, 24)
        assert np.sum(rule.weights) == pytest.approx(4.0 * math.pi, abs=1e-12)

    def test_nodes_have_unit_norm(self):
        rule = sphquad.sphere_rule(9, 19)
        assert np.max(np.abs(np.linalg.norm(rule.nodes, axis=1) - 1.0)) < 1e-14

    def test_constant(self):
        rule = sphquad.sphere_rule(6, 13)
        assert sphquad.integrate(rule, lambda u: np.ones(u.shape[0])) == pytest.approx(4.0 * math.pi, rel=1e-14)

    def test_plane_wave_average_is_sinc(self):
        rule = sphquad.sphere_rule(10, 21)
        kr = 3.0
        value = sphquad.integrate(rule, lambda u: np.exp(1j * kr * u[:, 2]))
        assert value == pytest.approx(4.0 * math.pi * sinc(kr), abs=1e-12)

    def test_zero_counts_rejected(self):
        with pytest.raises(ValueError):
            sphquad.sphere_rule(0, 8)
        with pytest.raises(ValueError):
            sphquad.sphere_rule(8, 0)


class TestMomentsAndRotation:
    @pytest.mark.parametrize("rule,d", [
        (sphquad.circle_rule(40), 2),
        (sphquad.sphere_rule(16, 33), 3),
    ])
    def test_second_moments(self, rule, d):
        volume = 2.0 * math.pi if d == 2 else 4.0 * math.pi
        moment = sphquad.integrate(rule, lambda u: u[:, :, None] * u[:, None, :])
        assert np.max(np.abs(moment - volume / d * np.eye(d))) < 1e-12

    def test_rotation_sanity_circle(self):
        rule = sphquad.circle_rule(40)
        c, s = math.cos(0.9), math.sin(0.9)
        rot = np.array([[c, -s], [s, c]])

        def f(u):
            return (u[:, 0] + 0.3 * u[:, 1]) ** 3 + u[:, 1] ** 2

        base = sphquad.integrate(rule, f)
        rotated = sphquad.integrate(rule, lambda u: f(u @ rot.T))
        assert abs(base - rotated) < 1e-10

    def test_rotation_sanity_sphere(self):
        rule = sphquad.sphere_rule(14, 29)
        c, s = math.cos(0.5), math.sin(0.5)
        rot = np.array([[1, 0, 0], [0, c, -s], [0, s, c]]) @ np.array(
            [[c, -s, 0], [s, c, 0], [0, 0, 1]])

        def f(u):
            return (u @ np.array([0.2, -0.5, 0.8])) ** 3 + (u @ np.array([1.0, 0.0, 0.0])) ** 2

        base = sphquad.integrate(rule, f)
        rotated = sphquad.integrate(rule, lambda u: f(u @ rot.T))
        assert abs(base - rotated) < 1e-10


class TestIntegrateDispatch:
    def test_per_node_fallback(self):
        rule = sphquad.circle_rule(12)
        vectorized = sphquad.integrate(rule, lambda u: u[:, 0] ** 2)
        per_node = sphquad.integrate(rule, lambda u: u[0] ** 2)
        assert per_node == pytest.approx(vectorized, rel=1e-15)

    def test_tensor_valued(self):
        rule = sphquad.sphere_rule(8, 17)
        tensor = sphquad.integrate(rule, lambda u: u[:, :, None] * u[:, None, :])
        assert tensor.shape == (3, 3)


def test_plane_wave_order_is_monotone_and_padded():
    assert sphquad.plane_wave_order(0.0) == 12
    orders = [sphquad.plane_wave_order(z) for z in (1.0, 5.0, 20.0, 100.0)]
    assert orders == sorted(orders)
    assert all(o > z for o, z in zip(orders, (1.0, 5.0, 20.0, 100.0)))
