import math

import numpy as np
import pytest

from scattercorr import (
    ElasticMedium,
    ScattererSpec,
    WaveContext,
    correlation_tensor_closed,
    correlation_tensor_free,
    gamma,
    green_tensor_free,
    im_green,
    im_green_tensor_free,
    plane_wave_p,
    plane_wave_s,
    polarization_basis,
    projectors,
    sphere_rule,
)

RNG = np.random.default_rng(7)

UNIT_2D = ElasticMedium(rho=1.0, lam=1.0, mu=1.0)
STEEL = ElasticMedium(rho=7900.0, lam=115e9, mu=77e9)


class TestMedium:
    def test_derived_speeds(self):
        assert UNIT_2D.v_s == pytest.approx(1.0)
        assert UNIT_2D.v_p == pytest.approx(math.sqrt(3.0))
        assert STEEL.v_s == pytest.approx(math.sqrt(77e9 / 7900.0), rel=1e-15)
        assert STEEL.v_p > STEEL.v_s > 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            ElasticMedium(rho=0.0, lam=1.0, mu=1.0)
        with pytest.raises(ValueError):
            ElasticMedium(rho=1.0, lam=1.0, mu=0.0)
        with pytest.raises(ValueError):
            ElasticMedium(rho=1.0, lam=-2.0, mu=1.0)


class TestPolarization:
    def test_axis_aligned_direction(self):
        basis = polarization_basis(np.array([0.0, 0.0, 3.0]))
        assert basis.khat == pytest.approx([0, 0, 1])
        assert np.max(np.abs(basis.tangents[:, 2])) < 1e-14
        gram = basis.tangents @ basis.tangents.T
        assert np.max(np.abs(gram - np.eye(2))) < 1e-14

    @pytest.mark.parametrize("d", [2, 3])
    def test_orthonormality_random_directions(self, d):
        for _ in range(1000):
            kvec = RNG.normal(size=d)
            if np.linalg.norm(kvec) < 1e-3:
                continue
            basis = polarization_basis(kvec)
            frame = np.vstack([basis.khat, basis.tangents])
            assert np.max(np.abs(frame @ frame.T - np.eye(d))) < 1e-14

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            polarization_basis(np.zeros(3))

    def test_projector_completeness(self):
        for d in (2, 3):
            for _ in range(50):
                kvec = RNG.normal(size=d)
                pair = projectors(kvec)
                assert np.max(np.abs(pair.p_p + pair.p_s - np.eye(d))) < 1e-15
                assert np.max(np.abs(pair.p_p @ pair.p_p - pair.p_p)) < 1e-14
                assert np.max(np.abs(pair.p_s @ pair.p_s - pair.p_s)) < 1e-14
                assert np.max(np.abs(pair.p_p @ pair.p_s)) < 1e-14

    def test_projector_values(self):
        pair = projectors(np.array([1.0, 0.0]))
        assert pair.p_p == pytest.approx(np.array([[1.0, 0.0], [0.0, 0.0]]))
        assert np.trace(projectors(RNG.normal(size=3)).p_s) == pytest.approx(2.0, abs=1e-14)
        assert np.linalg.matrix_rank(pair.p_p) == 1


class TestPlaneWaves:
    def test_p_wave_at_origin_is_direction(self):
        kvec = np.array([3.0, 4.0])
        assert plane_wave_p(np.zeros(2), kvec) == pytest.approx(kvec / 5.0)

    def test_s_wave_is_divergence_free(self):
        kvec = RNG.normal(size=3)
        for j in (1, 2):
            pol = plane_wave_s(np.zeros(3), kvec, j)
            assert abs(np.dot(kvec, pol)) < 1e-13 * np.linalg.norm(kvec)

    def test_p_wave_is_longitudinal(self):
        kvec = RNG.normal(size=3)
        pol = plane_wave_p(np.zeros(3), kvec)
        cross = np.cross(kvec / np.linalg.norm(kvec), pol.real)
        assert np.max(np.abs(cross)) < 1e-14

    def test_bad_shear_index(self):
        with pytest.raises(ValueError):
            plane_wave_s(np.zeros(2), np.array([1.0, 0.0]), 2)


class TestCorrelationTensor:
    def test_coincident_moment_identity_3d(self):
        omega = 2.0 * STEEL.v_s
        x = np.zeros(3)
        tensor = correlation_tensor_free(omega, STEEL, x, x)
        want = (STEEL.v_p ** -3 / 3.0 + 2.0 / 3.0 * STEEL.v_s ** -3) * np.eye(3)
        assert np.max(np.abs(tensor.matrix - want)) < 1e-12 * np.max(np.abs(want))

    def test_hermitian_pair_symmetry(self):
        omega = 3.0
        x = np.array([0.1, -0.4])
        y = np.array([1.2, 0.8])
        t_xy = correlation_tensor_free(omega, UNIT_2D, x, y).matrix
        t_yx = correlation_tensor_free(omega, UNIT_2D, y, x).matrix
        assert np.max(np.abs(t_xy - t_yx.conj().T)) < 1e-12
        t_xx = correlation_tensor_free(omega, UNIT_2D, x, x).matrix
        assert np.max(np.abs(t_xx - t_xx.conj().T)) < 1e-13
        assert np.min(np.linalg.eigvalsh(t_xx.real)) > -1e-13

    @pytest.mark.parametrize("medium,d,ksr", [
        (UNIT_2D, 2, 0.0), (UNIT_2D, 2, 3.0), (UNIT_2D, 2, 12.0),
        (STEEL, 3, 0.0), (STEEL, 3, 3.0), (STEEL, 3, 12.0),
    ])
    def test_quadrature_matches_closed_form(self, medium, d, ksr):
        omega = max(ksr, 0.7) * medium.v_s
        x = np.zeros(d)
        y = x.copy()
        if ksr > 0:
            y = x + np.ones(d) / math.sqrt(d)
        quad = correlation_tensor_free(omega, medium, x, y).matrix
        closed = correlation_tensor_closed(omega, medium, x, y).matrix
        scale = max(np.max(np.abs(closed)), 1e-300)
        assert np.max(np.abs(quad - closed)) < 1e-10 * scale

    def test_parity_transposes(self):
        omega = 2.5
        x = np.array([0.3, 0.9])
        y = np.array([-0.5, 0.1])
        t_fwd = correlation_tensor_closed(omega, UNIT_2D, x, y).matrix
        t_rev = correlation_tensor_closed(omega, UNIT_2D, y, x).matrix
        assert np.max(np.abs(t_fwd - t_rev.T)) < 1e-13

    def test_basis_independence(self):
        omega = 2.0 * STEEL.v_s
        x = np.zeros(3)
        y = np.array([0.4, 0.7, -0.2])
        axis = correlation_tensor_free(omega, STEEL, x, y, basis_variant="axis").matrix
        rotated = correlation_tensor_free(omega, STEEL, x, y, basis_variant="rotated").matrix
        assert np.max(np.abs(axis - rotated)) < 1e-12 * np.max(np.abs(axis))

    def test_p_sphere_trace_matches_scalar_average(self):
        # trace of the P-sphere moment equals the scalar direction average
        omega = 3.0 * STEEL.v_s
        x = np.zeros(3)
        y = np.array([0.9, 0.1, 0.4])
        r = float(np.linalg.norm(x - y))
        k_p = omega / STEEL.v_p
        closed = correlation_tensor_closed(omega, STEEL, x, y).matrix
        quad = correlation_tensor_free(omega, STEEL, x, y).matrix
        # remove the S part analytically to isolate the P-sphere trace
        k_s = omega / STEEL.v_s
        s_trace = (2.0 * np.sinc(k_s * r / math.pi)) / STEEL.v_s ** 3
        want_p_trace = np.sinc(k_p * r / math.pi) / STEEL.v_p ** 3
        for matrix in (closed, quad):
            assert np.trace(matrix).real - s_trace == pytest.approx(want_p_trace, abs=1e-10 * abs(want_p_trace))

    def test_shear_trace_reduces_to_scalar_identity(self):
        # the trace of the S-only part reproduces (d-1) times the scalar
        # correlation/kernel identity at speed v_S
        omega = 2.0
        for d, medium in ((2, UNIT_2D), (3, UNIT_2D)):
            x = np.zeros(d)
            y = np.zeros(d)
            y[0] = 1.3
            r = 1.3
            full = correlation_tensor_closed(omega, medium, x, y).matrix
            k_p = omega / medium.v_p
            from scattercorr.elastic import _moment_tensor
            p_part = _moment_tensor(d, x - y, k_p) / medium.v_p ** d
            sphere_volume = 2.0 * math.pi if d == 2 else 4.0 * math.pi
            s_trace = np.trace(full - p_part / sphere_volume).real
            ctx = WaveContext(omega, medium.v_s, d)
            scalar_img = im_green(ctx, ScattererSpec.none(), x, y)
            want = (d - 1) * (-gamma(d)) * omega ** (2 - d) * scalar_img
            assert s_trace == pytest.approx(want, rel=1e-9)

    def test_rule_dimension_mismatch(self):
        rule = sphere_rule(6, 13)
        with pytest.raises(ValueError):
            correlation_tensor_free(1.0, UNIT_2D, np.zeros(2), np.zeros(2), rules=(rule, rule))


class TestGreenTensor:
    def test_isotropic_at_coincidence(self):
        for d, medium in ((2, UNIT_2D), (3, STEEL)):
            omega = 1.7 * medium.v_s
            x = RNG.normal(size=d)
            img = im_green_tensor_free(omega, medium, x, x)
            assert np.max(np.abs(img - img[0, 0] * np.eye(d))) < 1e-15 * abs(img[0, 0])

    def test_coincidence_limit_matches_moment_identity(self):
        # dual route: the r = 0 limit of the kernel equals the weighted
        # moment identity of the correlation side
        for d, medium in ((2, UNIT_2D), (3, STEEL)):
            omega = 1.3 * medium.v_s
            x = np.zeros(d)
            lhs = im_green_tensor_free(omega, medium, x, x)
            rhs = -(omega ** (d - 2) / gamma(d)) * correlation_tensor_closed(omega, medium, x, x).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-13 * np.max(np.abs(lhs))

    def test_singular_at_coincidence(self):
        with pytest.raises(ValueError):
            green_tensor_free(1.0, UNIT_2D, np.zeros(2), np.zeros(2))

    def test_imaginary_part_consistent_with_full_kernel(self):
        for d, medium in ((2, UNIT_2D), (3, STEEL)):
            omega = 2.2 * medium.v_s
            x = np.zeros(d)
            y = np.zeros(d)
            y[0] = 1.1
            full = green_tensor_free(omega, medium, x, y)
            img = im_green_tensor_free(omega, medium, x, y)
            assert np.max(np.abs(full.imag - img)) < 1e-12 * np.max(np.abs(img))

    @pytest.mark.parametrize("d,medium", [(2, UNIT_2D), (3, STEEL)])
    def test_far_field_decay_rate(self, d, medium):
        omega = 20.0 * medium.v_s  # k_s r0 = 20 at r0 = 1
        radii = np.geomspace(1.0, 10.0, 17)
        norms = []
        for r in radii:
            x = np.zeros(d)
            y = np.zeros(d)
            y[0] = r
            norms.append(np.linalg.norm(green_tensor_free(omega, medium, x, y)))
        slope = np.polyfit(np.log(radii), np.log(norms), 1)[0]
        assert slope == pytest.approx(-(d - 1) / 2.0, abs=0.15)
