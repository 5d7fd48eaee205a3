import math

import numpy as np
import pytest

from crosspanel import (
    SPEED_OF_LIGHT,
    FieldRegime,
    PanelConfig,
    TwoPanelLayout,
    aperture,
    classify_field,
    element_grid,
    element_position,
    los_angles,
    rayleigh_distance,
)


class TestPanelConfig:
    def test_wavelength_and_spacing(self):
        p = PanelConfig(28e9, 4, 4)
        assert p.wavelength == SPEED_OF_LIGHT / 28e9
        assert p.spacing == p.wavelength / 2
        assert p.n_elements == 16

    @pytest.mark.parametrize("kwargs", [
        dict(frequency_hz=0.0, n_y=4, n_z=4),
        dict(frequency_hz=-1e9, n_y=4, n_z=4),
        dict(frequency_hz=28e9, n_y=0, n_z=4),
        dict(frequency_hz=28e9, n_y=4, n_z=-1),
        dict(frequency_hz=28e9, n_y=4, n_z=4, reference_position=(0.0, math.inf, 1.0)),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            PanelConfig(**kwargs)

    def test_off_plane_layout_rejected(self):
        p1 = PanelConfig(28e9, 2, 2, (0.0, 0.0, 15.0))
        p2 = PanelConfig(39e9, 2, 2, (0.5, 0.0, 16.0))
        with pytest.raises(ValueError, match="x=0"):
            TwoPanelLayout(p1, p2)


class TestElementPosition:
    def test_reference_element(self):
        p = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        assert np.allclose(element_position(p, 0, 0), [0.0, 0.0, 15.0], atol=0)

    def test_one_step_along_y(self):
        p = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        pos = element_position(p, 1, 0)
        assert pos[1] == SPEED_OF_LIGHT / (2 * 28e9)
        assert pos[1] == pytest.approx(0.005353, abs=1e-6)
        assert pos[0] == 0.0 and pos[2] == 15.0

    def test_fifteen_steps_along_z(self):
        p = PanelConfig(28e9, 16, 16, (0.0, 0.0, 15.0))
        pos = element_position(p, 0, 15)
        assert pos[2] == pytest.approx(15.0 + 15 * SPEED_OF_LIGHT / (2 * 28e9), rel=1e-15)
        assert pos[2] == pytest.approx(15.0803, abs=1e-4)

    def test_out_of_range(self):
        p = PanelConfig(28e9, 4, 4)
        for iy, iz in [(-1, 0), (4, 0), (0, -1), (0, 4)]:
            with pytest.raises(IndexError):
                element_position(p, iy, iz)

    def test_spacing_invariant(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            p = PanelConfig(rng.uniform(1e9, 100e9), int(rng.integers(2, 9)),
                            int(rng.integers(2, 9)), tuple(rng.uniform(-5, 20, 3) * [0, 1, 1]))
            half = p.wavelength / 2
            for iy in range(p.n_y - 1):
                d = np.linalg.norm(element_position(p, iy + 1, 0) - element_position(p, iy, 0))
                assert d == pytest.approx(half, rel=1e-12)
            for iz in range(p.n_z - 1):
                d = np.linalg.norm(element_position(p, 0, iz + 1) - element_position(p, 0, iz))
                assert d == pytest.approx(half, rel=1e-12)

    def test_grid_matches_element_position(self):
        p = PanelConfig(39e9, 3, 5, (0.0, 1.0, 8.0))
        grid = element_grid(p)
        for iy in range(p.n_y):
            for iz in range(p.n_z):
                assert np.array_equal(grid[iy * p.n_z + iz], element_position(p, iy, iz))


class TestAperture:
    def test_single_element_panels_one_meter(self):
        p1 = PanelConfig(1e9, 1, 1, (0.0, 0.0, 0.0))
        p2 = PanelConfig(1e9, 1, 1, (0.0, 0.0, 1.0))
        assert aperture(TwoPanelLayout(p1, p2)) == 1.0

    def test_coincident_single_elements(self):
        p = PanelConfig(1e9, 1, 1, (0.0, 0.0, 5.0))
        assert aperture(TwoPanelLayout(p, p)) == 0.0

    def test_brute_force_oracle(self, layout):
        # exhaustive pairwise maximum over all 512 elements of both panels
        pts = np.vstack([element_grid(layout.panel1), element_grid(layout.panel2)])
        best = 0.0
        for i in range(len(pts)):
            d = np.sqrt(((pts[i + 1:] - pts[i]) ** 2).sum(1))
            if len(d):
                best = max(best, float(d.max()))
        assert aperture(layout) == pytest.approx(best, rel=1e-15)

    def test_symmetry_and_delta_d_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p1 = PanelConfig(rng.uniform(1e9, 60e9), int(rng.integers(1, 6)),
                             int(rng.integers(1, 6)), (0.0, rng.uniform(-1, 1), rng.uniform(0, 20)))
            p2 = PanelConfig(rng.uniform(1e9, 60e9), int(rng.integers(1, 6)),
                             int(rng.integers(1, 6)), (0.0, rng.uniform(-1, 1), rng.uniform(0, 20)))
            lay = TwoPanelLayout(p1, p2)
            swapped = TwoPanelLayout(p2, p1)
            assert aperture(lay) == pytest.approx(aperture(swapped), rel=1e-15)
            assert aperture(lay) >= lay.delta_d - 1e-15


class TestRayleighDistance:
    def test_zero_aperture(self):
        assert rayleigh_distance(0.0, 0.01, 0.02) == 0.0

    def test_five_meter_aperture(self):
        lam = SPEED_OF_LIGHT / 39e9
        assert rayleigh_distance(5.0, SPEED_OF_LIGHT / 28e9, lam) == pytest.approx(2 * 25 / lam, rel=1e-15)
        assert rayleigh_distance(5.0, SPEED_OF_LIGHT / 28e9, lam) == pytest.approx(6504.5, abs=0.5)

    def test_equal_wavelengths(self):
        assert rayleigh_distance(1.0, 0.01, 0.01) == pytest.approx(200.0, rel=1e-15)

    def test_min_wavelength_selected(self):
        assert rayleigh_distance(1.0, 0.02, 0.01) == rayleigh_distance(1.0, 0.01, 0.02)

    def test_invalid(self):
        with pytest.raises(ValueError):
            rayleigh_distance(-1.0, 0.01, 0.01)
        with pytest.raises(ValueError):
            rayleigh_distance(1.0, 0.0, 0.01)


class TestClassifyField:
    def test_boundary_is_far(self):
        assert classify_field(200.0, 200.0) is FieldRegime.FAR

    def test_just_inside_is_near(self):
        assert classify_field(199.9, 200.0) is FieldRegime.NEAR

    def test_beyond_rayleigh_example(self):
        lam = SPEED_OF_LIGHT / 39e9
        assert classify_field(6600.0, rayleigh_distance(5.0, lam, lam)) is FieldRegime.FAR

    def test_boundary_property(self):
        rng = np.random.default_rng(3)
        for r_rayl in rng.uniform(0.1, 1e4, 50):
            assert classify_field(r_rayl, r_rayl) is FieldRegime.FAR

    def test_nonpositive_range(self):
        with pytest.raises(ValueError):
            classify_field(0.0, 10.0)


class TestLosAngles:
    def test_forty_five_degrees_down(self):
        p = PanelConfig(28e9, 1, 1, (0.0, 0.0, 15.0))
        theta, phi, r = los_angles(p, (15.0, 0.0, 0.0))
        assert theta == pytest.approx(-math.pi / 4, rel=1e-15)
        assert phi == 0.0
        assert r == pytest.approx(math.sqrt(450.0), rel=1e-15)

    def test_broadside(self):
        p = PanelConfig(28e9, 1, 1, (0.0, 0.0, 15.0))
        theta, phi, r = los_angles(p, (10.0, 0.0, 15.0))
        assert (theta, phi, r) == (0.0, 0.0, 10.0)

    def test_pure_y_offset(self):
        p = PanelConfig(28e9, 1, 1, (0.0, 0.0, 15.0))
        theta, phi, r = los_angles(p, (0.0, 10.0, 15.0))
        assert theta == 0.0
        assert phi == pytest.approx(math.pi / 2, rel=1e-15)
        assert r == 10.0

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        p = PanelConfig(39e9, 4, 4, (0.0, 2.0, 12.0))
        for _ in range(1000):
            point = rng.uniform(-100, 100, 3)
            if np.linalg.norm(point - p.reference) < 1e-3:
                continue
            theta, phi, r = los_angles(p, point)
            rebuilt = p.reference + r * np.array([
                math.cos(theta) * math.cos(phi),
                math.cos(theta) * math.sin(phi),
                math.sin(theta),
            ])
            assert np.allclose(rebuilt, point, atol=1e-9)
            assert -math.pi / 2 <= theta <= math.pi / 2
            assert 0.0 <= phi < 2 * math.pi

    def test_zero_distance(self):
        p = PanelConfig(28e9, 2, 2, (0.0, 0.0, 15.0))
        with pytest.raises(ValueError):
            los_angles(p, (0.0, 0.0, 15.0))
