"""Steering vectors, channel synthesis and synthetic multi-path scenes.

Channel vectors are plain 1-D complex128 arrays of length N = n_y * n_z in
y-major element order (flat index iy * n_z + iz), matching the Kronecker
factorization a = a_y (x) a_z. This ordering is also the on-disk order used
by the harness.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .geometry import PanelConfig, TwoPanelLayout, element_grid, los_angles


@dataclass(frozen=True)
class PathComponent:
    """One multi-path component: complex linear gain and departure angles."""

    gain: complex
    theta: float
    phi: float

    def __post_init__(self):
        if not (-math.pi / 2 <= self.theta <= math.pi / 2):
            raise ValueError(f"theta must be in [-pi/2, pi/2], got {self.theta}")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise ValueError(f"phi must be in [0, 2*pi), got {self.phi}")
        if not (math.isfinite(self.gain.real) and math.isfinite(self.gain.imag)):
            raise ValueError(f"gain must be finite, got {self.gain}")


@dataclass(frozen=True)
class Scatterer:
    """A point scatterer with an opaque complex weight per panel frequency."""

    position: tuple[float, float, float]
    reflectivity: tuple[complex, complex] = (1.0 + 0.0j, 1.0 + 0.0j)

    def __post_init__(self):
        pos = tuple(float(v) for v in self.position)
        if len(pos) != 3 or not all(math.isfinite(v) for v in pos):
            raise ValueError(f"position must be a finite 3D point, got {self.position}")
        object.__setattr__(self, "position", pos)
        refl = tuple(complex(v) for v in self.reflectivity)
        if len(refl) != 2:
            raise ValueError("reflectivity must hold one complex weight per panel")
        object.__setattr__(self, "reflectivity", refl)


def steering_vector(panel: PanelConfig, theta: float, phi: float) -> np.ndarray:
    """Unit-norm array response for direction (theta, phi).

    Entry (iy, iz) carries phase pi*(iy*cos(theta)*sin(phi) + iz*sin(theta))
    and magnitude 1/sqrt(N); the full vector is the Kronecker product of the
    per-axis factors.
    """
    u = math.cos(theta) * math.sin(phi)
    w = math.sin(theta)
    ay = np.exp(1j * np.pi * u * np.arange(panel.n_y)) / math.sqrt(panel.n_y)
    az = np.exp(1j * np.pi * w * np.arange(panel.n_z)) / math.sqrt(panel.n_z)
    return np.kron(ay, az)


def friis_gain(lam: float, r: float) -> complex:
    """Free-space complex gain (lam / (4*pi*r)) * exp(-j*2*pi*r/lam).

    The stored phase is the principal value of -2*pi*r/lam.
    """
    if lam <= 0:
        raise ValueError(f"wavelength must be positive, got {lam}")
    if r <= 0:
        raise ValueError(f"range must be positive, got {r}")
    mag = lam / (4.0 * np.pi * r)
    return complex(mag * np.exp(-2j * np.pi * r / lam))


def synth_far_channel(panel: PanelConfig, paths: list[PathComponent]) -> np.ndarray:
    """Plane-wave multi-path channel sqrt(N) * sum_l gain_l * a(theta_l, phi_l)."""
    if not paths:
        raise ValueError("path list must be nonempty")
    h = np.zeros(panel.n_elements, dtype=complex)
    for p in paths:
        h += p.gain * steering_vector(panel, p.theta, p.phi)
    return math.sqrt(panel.n_elements) * h


def synth_spherical_channel(panel: PanelConfig, source) -> np.ndarray:
    """Exact per-element spherical-wave channel, no far-field approximation.

    Element n receives (lam / (4*pi*r_n)) * exp(-j*2*pi*r_n/lam) with r_n the
    exact element-to-source distance (amplitude taper included).
    """
    src = np.asarray(source, dtype=float)
    positions = element_grid(panel)
    r2 = ((positions - src) ** 2).sum(axis=1)
    if np.any(r2 == 0.0):
        raise ValueError("source coincides with an array element")
    return _kernels.spherical_entries(positions, src, panel.wavelength)


def synth_multipath_scene(
    layout: TwoPanelLayout,
    ue,
    scatterers: list[Scatterer],
    deviation_delta: float,
    seed: int,
    include_los: bool = False,
) -> tuple[list[PathComponent], list[PathComponent], list]:
    """Single-bounce scene with vertically deviating panel-2 scattering points.

    Panel 1 sees each scatterer at its true position; panel 2's scattering
    point is offset vertically by a uniform draw from [-deviation_delta,
    +deviation_delta] (deterministic in the seed, one draw per scatterer in
    input order). Path gains are reflectivity times the free-space factor of
    each leg (panel->point and point->UE); they drive synthesis only and are
    never consumed by inference. When include_los is set, a direct path is
    appended after the scattered ones.

    Returns (paths1, paths2, truth) where truth holds one (point1, point2)
    pair per scattered path and None for the LoS entry.
    """
    if deviation_delta < 0:
        raise ValueError(f"deviation_delta must be >= 0, got {deviation_delta}")
    ue = np.asarray(ue, dtype=float)
    rng = np.random.default_rng(seed)
    offsets = rng.uniform(-deviation_delta, deviation_delta, size=len(scatterers))

    lam1 = layout.panel1.wavelength
    lam2 = layout.panel2.wavelength
    paths1: list[PathComponent] = []
    paths2: list[PathComponent] = []
    truth: list = []
    for sc, dz in zip(scatterers, offsets):
        p1 = np.asarray(sc.position, dtype=float)
        p2 = p1 + np.array([0.0, 0.0, dz])
        th1, ph1, r1 = los_angles(layout.panel1, p1)
        th2, ph2, r2 = los_angles(layout.panel2, p2)
        leg1_ue = float(np.linalg.norm(p1 - ue))
        leg2_ue = float(np.linalg.norm(p2 - ue))
        if leg1_ue == 0.0 or leg2_ue == 0.0:
            raise ValueError("scattering point coincides with the UE")
        g1 = sc.reflectivity[0] * friis_gain(lam1, r1) * friis_gain(lam1, leg1_ue)
        g2 = sc.reflectivity[1] * friis_gain(lam2, r2) * friis_gain(lam2, leg2_ue)
        paths1.append(PathComponent(g1, th1, ph1))
        paths2.append(PathComponent(g2, th2, ph2))
        truth.append((p1, p2))
    if include_los:
        th1, ph1, r1 = los_angles(layout.panel1, ue)
        th2, ph2, r2 = los_angles(layout.panel2, ue)
        paths1.append(PathComponent(friis_gain(lam1, r1), th1, ph1))
        paths2.append(PathComponent(friis_gain(lam2, r2), th2, ph2))
        truth.append(None)
    return paths1, paths2, truth
