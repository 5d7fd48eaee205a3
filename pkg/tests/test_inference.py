import cmath
import math

import numpy as np
import pytest

from crosspanel import (
    SPEED_OF_LIGHT,
    AngleDomainError,
    AngleRange,
    DeviationBoundError,
    InferenceResult,
    PanelConfig,
    PathComponent,
    Scenario,
    TwoPanelLayout,
    aperture,
    correlation,
    friis_gain,
    infer_far_free,
    infer_gain_far,
    infer_multipath_far,
    infer_multipath_near,
    infer_near_free,
    los_angles,
    rayleigh_distance,
    synth_far_channel,
    synth_spherical_channel,
)

LAM1 = SPEED_OF_LIGHT / 28e9
LAM2 = SPEED_OF_LIGHT / 39e9


def random_gain_inputs(rng):
    alpha1 = complex(rng.normal(), rng.normal())
    while alpha1 == 0:
        alpha1 = complex(rng.normal(), rng.normal())
    lam1 = rng.uniform(0.005, 0.05)
    lam2 = rng.uniform(0.005, 0.05)
    delta_d = rng.uniform(0.0, 5.0)
    theta2 = rng.uniform(-1.5, -0.01)
    return alpha1, lam1, lam2, delta_d, theta2


class TestAngleRange:
    def test_half_open_semantics(self):
        r = AngleRange(-math.pi / 2, -0.3)
        assert not r.contains(-math.pi / 2)
        assert r.contains(-0.3)
        assert r.contains(-1.0)
        assert not r.contains(-0.29)

    def test_invalid(self):
        with pytest.raises(ValueError):
            AngleRange(-0.1, -0.1)
        with pytest.raises(ValueError):
            AngleRange(-2.0, 0.0)


class TestInferenceResultShape:
    def test_tag_field_consistency(self):
        p = PathComponent(1.0, -0.2, 0.0)
        with pytest.raises(ValueError):
            InferenceResult(Scenario.FAR_FREE)  # missing path
        with pytest.raises(ValueError):
            InferenceResult(Scenario.MULTIPATH_FAR, angles=((0.1, 0.2),), path=p)
        with pytest.raises(ValueError):
            InferenceResult(Scenario.MULTIPATH_NEAR, ranges=None)

    def test_no_gain_in_multipath_results(self):
        res = infer_multipath_far([PathComponent(2.0 + 1j, -0.4, 0.3)])
        assert res.path is None
        res = infer_multipath_near([PathComponent(2.0 + 1j, -0.4, 0.3)], 15.0, 16.0, 0.15)
        assert res.path is None


class TestGainFar:
    def test_magnitude_law_exact(self):
        rng = np.random.default_rng(50)
        for _ in range(1000):
            alpha1, lam1, lam2, delta_d, theta2 = random_gain_inputs(rng)
            out = infer_gain_far(alpha1, lam1, lam2, delta_d, theta2)
            expected = abs(alpha1) * lam2 / lam1
            assert abs(abs(out) - expected) <= 1e-12 * expected

    def test_identity_frequencies(self):
        rng = np.random.default_rng(51)
        for _ in range(100):
            alpha1 = complex(rng.normal(), rng.normal())
            out = infer_gain_far(alpha1, 0.01, 0.01, 0.0, -0.5)
            assert out == pytest.approx(alpha1, rel=1e-14)

    def test_zero_arg_friis_input_phase(self):
        # alpha1 with exactly zero phase. 2800*LAM1 == 3900*LAM2: a whole
        # number of BOTH wavelengths, the only case where the principal
        # branch can reproduce the direct evaluation (the scaled phase loses
        # r1 modulo lambda2 otherwise -- the inherent branch ambiguity).
        r1 = 2800 * LAM1
        alpha1 = abs(friis_gain(LAM1, r1))  # force arg = 0 exactly
        delta_d, theta2 = 1.0, -0.35
        out = infer_gain_far(alpha1, LAM1, LAM2, delta_d, theta2)
        expected_phase = 2 * math.pi * delta_d * math.sin(theta2) / LAM2
        assert cmath.phase(out) == pytest.approx(
            math.remainder(expected_phase, 2 * math.pi), abs=1e-9)
        assert abs(out) == pytest.approx((LAM2 / LAM1) * LAM1 / (4 * math.pi * r1), rel=1e-12)
        # matches the direct free-space evaluation at r2 = r1 - delta_d*sin(theta2)
        # up to the far-field magnitude approximation r2 ~ r1
        r2 = r1 - delta_d * math.sin(theta2)
        direct = friis_gain(LAM2, r2)
        assert cmath.phase(out / direct) == pytest.approx(0.0, abs=1e-9)
        # magnitude ratio is exactly r2/r1, the far-field residue (-> 1 as r1 grows)
        assert abs(out) / abs(direct) == pytest.approx(r2 / r1, rel=1e-12)

    def test_amplitude_assisted_equals_friis_recomposition(self):
        rng = np.random.default_rng(52)
        for _ in range(1000):
            r1 = rng.uniform(10.0, 2000.0)
            delta_d = rng.uniform(0.0, 5.0)
            theta2 = rng.uniform(-1.5, -0.01)
            alpha1 = friis_gain(LAM1, r1)
            got = infer_gain_far(alpha1, LAM1, LAM2, delta_d, theta2, mode="amplitude-assisted")
            # oracle re-derives the range from the gain magnitude, as the mode defines
            r1_rec = LAM1 / (4 * math.pi * abs(alpha1))
            expected = friis_gain(LAM2, r1_rec - delta_d * math.sin(theta2))
            assert abs(got - expected) <= 1e-12 * abs(expected)

    def test_amplitude_assisted_spec_example(self):
        alpha1 = friis_gain(LAM1, 500.0)
        got = infer_gain_far(alpha1, LAM1, LAM2, 1.0, -0.1, mode="amplitude-assisted")
        # exact against the recovered-range oracle; the literal 500 m oracle
        # differs by the float64 magnitude->range round trip (~1e-10 phase)
        r1_rec = LAM1 / (4 * math.pi * abs(alpha1))
        assert got == friis_gain(LAM2, r1_rec - 1.0 * math.sin(-0.1))
        literal = friis_gain(LAM2, 500.0 + 1.0 * math.sin(0.1))
        assert abs(got - literal) <= 1e-9 * abs(literal)

    def test_rejections(self):
        with pytest.raises(ValueError):
            infer_gain_far(0.0, LAM1, LAM2, 1.0, -0.1)
        for theta2 in (0.0, 0.1, -math.pi / 2, 1.6):
            with pytest.raises(AngleDomainError):
                infer_gain_far(1.0, LAM1, LAM2, 1.0, theta2)
        with pytest.raises(ValueError):
            infer_gain_far(1.0, LAM1, LAM2, -0.5, -0.1)
        with pytest.raises(ValueError):
            infer_gain_far(1.0, LAM1, LAM2, 1.0, -0.1, mode="bogus")


class TestFarFree:
    def test_angles_copied(self):
        path = PathComponent(0.5 + 0.1j, -0.3, 1.2)
        res = infer_far_free(path, LAM1, LAM2, 1.0)
        assert res.scenario is Scenario.FAR_FREE
        assert res.path.theta == -0.3
        assert res.path.phi == 1.2

    def test_identity_layout(self):
        path = PathComponent(0.5 + 0.1j, -0.3, 1.2)
        res = infer_far_free(path, LAM1, LAM1, 0.0)
        assert res.path.gain == pytest.approx(path.gain, rel=1e-14)

    def test_full_pipeline_beyond_rayleigh(self):
        p1 = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        p2 = PanelConfig(39e9, 16, 16, (0.0, 0.0, 16.0))
        layout = TwoPanelLayout(p1, p2)
        r_rayl = rayleigh_distance(aperture(layout), p1.wavelength, p2.wavelength)
        dx = math.sqrt((2 * r_rayl) ** 2 - 15.0**2)
        ue = (dx, 0.0, 0.0)
        theta1, phi1, r1 = los_angles(p1, ue)
        res = infer_far_free(PathComponent(friis_gain(p1.wavelength, r1), theta1, phi1),
                             p1.wavelength, p2.wavelength, layout.delta_d)
        h2_hat = synth_far_channel(p2, [res.path])
        truth = synth_spherical_channel(p2, ue)
        assert correlation(h2_hat, truth) >= 0.95

    def test_mode_forwarded(self):
        path = PathComponent(friis_gain(LAM1, 300.0), -0.4, 0.2)
        res_lit = infer_far_free(path, LAM1, LAM2, 1.0, mode="literal-eq7")
        res_amp = infer_far_free(path, LAM1, LAM2, 1.0, mode="amplitude-assisted")
        assert abs(res_lit.path.gain) == pytest.approx(abs(path.gain) * LAM2 / LAM1, rel=1e-12)
        assert res_amp.path.gain != res_lit.path.gain


class TestNearFree:
    def test_three_four_five_triangle(self):
        path = PathComponent(1.0, -math.pi / 4, 0.0)
        res = infer_near_free(path, 15.0, 20.0, LAM2)
        assert res.path.theta == pytest.approx(math.atan(-4.0 / 3.0), rel=1e-12)
        assert res.path.theta == pytest.approx(-0.92730, abs=1e-5)
        assert res.r2 == pytest.approx(25.0, rel=1e-12)
        assert res.path.gain == pytest.approx(friis_gain(LAM2, 25.0), rel=1e-12)

    def test_equal_heights_identity(self):
        rng = np.random.default_rng(53)
        for theta1 in rng.uniform(-1.5, -0.01, 200):
            res = infer_near_free(PathComponent(1.0, theta1, 0.3), 15.0, 15.0, LAM2)
            assert res.path.theta == pytest.approx(theta1, rel=1e-14)

    def test_exact_against_geometry_oracle(self):
        p1 = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        rng = np.random.default_rng(54)
        for d2 in (16.0, 18.0, 20.0):
            p2 = PanelConfig(39e9, 16, 16, (0.0, 0.0, d2))
            for _ in range(300):
                ue = (rng.uniform(0.5, 300.0), rng.uniform(-100.0, 100.0), 0.0)
                theta1, phi1, _ = los_angles(p1, ue)
                theta2, phi2, r2 = los_angles(p2, ue)
                res = infer_near_free(PathComponent(1.0, theta1, phi1), 15.0, d2, p2.wavelength)
                assert abs(res.path.theta - theta2) <= 1e-12
                assert abs(res.r2 - r2) <= 1e-9
                assert res.path.phi == phi1 == phi2

    def test_horizon_and_above_rejected(self):
        for theta1 in (0.0, 0.2, math.pi / 2):
            with pytest.raises(AngleDomainError):
                infer_near_free(PathComponent(1.0, theta1, 0.0), 15.0, 16.0, LAM2)

    def test_bad_heights(self):
        with pytest.raises(ValueError):
            infer_near_free(PathComponent(1.0, -0.5, 0.0), 0.0, 16.0, LAM2)


class TestMultipathFar:
    def test_copy_semantics(self):
        paths = [PathComponent(1.0 + 2j, -0.4, 0.3), PathComponent(0.1j, 0.2, 5.0)]
        res = infer_multipath_far(paths)
        assert res.angles == ((-0.4, 0.3), (0.2, 5.0))

    def test_path_count_preserved(self):
        paths = [PathComponent(1.0, -0.01 * k, 0.1) for k in range(1, 26)]
        assert len(infer_multipath_far(paths).angles) == 25

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            infer_multipath_far([])

    def test_far_scatterer_elevation_error(self):
        p1 = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        p2 = PanelConfig(39e9, 16, 16, (0.0, 0.0, 16.0))
        layout = TwoPanelLayout(p1, p2)
        r_rayl = rayleigh_distance(aperture(layout), p1.wavelength, p2.wavelength)
        rng = np.random.default_rng(55)
        for _ in range(50):
            r = rng.uniform(5.0, 10.0) * r_rayl
            theta = rng.uniform(-0.005, 0.3)
            phi = rng.uniform(0.1, 1.4)
            point = p1.reference + r * np.array([
                math.cos(theta) * math.cos(phi),
                math.cos(theta) * math.sin(phi),
                math.sin(theta),
            ])
            theta1, phi1, _ = los_angles(p1, point)
            theta2, _, _ = los_angles(p2, point)
            (inf_theta, inf_phi), = infer_multipath_far(
                [PathComponent(1.0, theta1, phi1)]).angles
            assert abs(inf_theta - theta2) < math.radians(0.2)


class TestMultipathNear:
    def test_worked_example(self):
        path = PathComponent(1.0, -math.pi / 6, 0.8)
        res = infer_multipath_near([path], 15.0, 16.0, 0.15)
        (rng_out, phi), = res.ranges
        expected = math.atan((15.85 / 15.0) * math.tan(-math.pi / 6))
        assert rng_out.upper == pytest.approx(expected, rel=1e-12)
        assert rng_out.upper == pytest.approx(-0.54776, abs=1e-4)
        assert rng_out.lower == -math.pi / 2
        assert phi == 0.8

    def test_reduces_to_near_free_as_delta_vanishes(self):
        theta1 = -0.6
        d1, d2 = 15.0, 15.0 + 1e-9
        res = infer_multipath_near([PathComponent(1.0, theta1, 0.0)], d1, d2, 0.0)
        expected = math.atan((d2 / d1) * math.tan(theta1))
        assert res.ranges[0][0].upper == pytest.approx(expected, rel=1e-12)

    def test_upper_bound_widens_with_delta(self):
        # larger assumed deviation -> wider range -> upper bound closer to 0
        theta1 = -0.7
        uppers = [
            infer_multipath_near([PathComponent(1.0, theta1, 0.0)], 15.0, 20.0, d).ranges[0][0].upper
            for d in np.linspace(0.0, 4.9, 25)
        ]
        assert all(b > a for a, b in zip(uppers, uppers[1:]))
        widths = [math.pi / 2 + u for u in uppers]
        assert all(b > a for a, b in zip(widths, widths[1:]))

    def test_delta_bound_rejected_distinctly(self):
        with pytest.raises(DeviationBoundError):
            infer_multipath_near([PathComponent(1.0, -0.5, 0.0)], 15.0, 16.0, 1.0)
        with pytest.raises(DeviationBoundError):
            infer_multipath_near([PathComponent(1.0, -0.5, 0.0)], 15.0, 16.0, 1.5)

    def test_horizon_rejected(self):
        with pytest.raises(AngleDomainError):
            infer_multipath_near([PathComponent(1.0, 0.0, 0.0)], 15.0, 16.0, 0.15)
        with pytest.raises(AngleDomainError):
            infer_multipath_near([PathComponent(1.0, 0.4, 0.0)], 15.0, 16.0, 0.15)

    def test_containment_monte_carlo(self):
        p1 = PanelConfig(28e9, 1, 1, (0.0, 0.0, 15.0))
        rng = np.random.default_rng(56)
        d1, delta = 15.0, 0.15
        for _ in range(1000):
            d2 = float(rng.choice([16.0, 18.0, 20.0]))
            p2 = PanelConfig(39e9, 1, 1, (0.0, 0.0, d2))
            theta1 = rng.uniform(-1.45, -0.02)
            phi1 = rng.uniform(0.0, 1.5)
            t_ground = d1 / abs(math.sin(theta1))
            t = rng.uniform(0.0, 1.0) * t_ground
            if t == 0.0:
                continue
            point = p1.reference + t * np.array([
                math.cos(theta1) * math.cos(phi1),
                math.cos(theta1) * math.sin(phi1),
                math.sin(theta1),
            ])
            deviated = point + np.array([0.0, 0.0, rng.uniform(-delta, delta)])
            theta2_true, _, _ = los_angles(p2, deviated)
            res = infer_multipath_near([PathComponent(1.0, theta1, phi1)], d1, d2, delta)
            assert res.ranges[0][0].contains(theta2_true)

    def test_bound_attained_at_ground_point_with_full_deviation(self):
        d1, d2, delta = 15.0, 16.0, 0.15
        p1 = PanelConfig(28e9, 1, 1, (0.0, 0.0, d1))
        p2 = PanelConfig(39e9, 1, 1, (0.0, 0.0, d2))
        theta1, phi1 = -0.62, 0.4
        t_ground = d1 / abs(math.sin(theta1))
        point = p1.reference + t_ground * np.array([
            math.cos(theta1) * math.cos(phi1),
            math.cos(theta1) * math.sin(phi1),
            math.sin(theta1),
        ])
        deviated = point + np.array([0.0, 0.0, delta])
        theta2_true, _, _ = los_angles(p2, deviated)
        res = infer_multipath_near([PathComponent(1.0, theta1, phi1)], d1, d2, delta)
        assert abs(res.ranges[0][0].upper - theta2_true) <= 1e-9


class TestPhaseRobustness:
    def test_f_invariant_to_gain_phase_error(self, panel39):
        # a wrong branch in the inferred gain phase cannot change F
        rng = np.random.default_rng(57)
        truth_path = PathComponent(friis_gain(LAM2, 40.0), -0.5, 0.6)
        truth = synth_far_channel(panel39, [truth_path])
        for psi in rng.uniform(0, 2 * math.pi, 50):
            wrong = PathComponent(truth_path.gain * np.exp(1j * psi), -0.5, 0.6)
            f = correlation(synth_far_channel(panel39, [wrong]), truth)
            assert f == pytest.approx(1.0, abs=1e-12)
