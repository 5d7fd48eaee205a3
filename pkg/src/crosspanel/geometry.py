"""Panel placement, apertures, field-regime classification and exact LoS geometry.

Coordinate frame (fixed throughout the package): panels lie in the x = 0
plane, broadside is +x, z is up. Elevation is signed (negative below the
panel horizon), azimuth is measured from +x toward +y and normalized to
[0, 2*pi). With this frame the y-axis element phase is pi*cos(theta)*sin(phi)
and the z-axis phase is pi*sin(theta), with no sign fixups anywhere.
"""

from dataclasses import dataclass
from enum import Enum
import math

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
"Exact speed of light in m/s."


@dataclass(frozen=True)
class PanelConfig:
    """A uniform planar array in the x=0 plane.

    frequency_hz: carrier frequency; element spacing is half the carrier
        wavelength along both panel axes.
    n_y, n_z: element counts along the horizontal (y) and vertical (z) axes.
    reference_position: bottom-left element location in meters, x must be 0.
    """

    frequency_hz: float
    n_y: int
    n_z: int
    reference_position: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (self.frequency_hz > 0 and math.isfinite(self.frequency_hz)):
            raise ValueError(f"frequency_hz must be positive and finite, got {self.frequency_hz}")
        if self.n_y < 1 or self.n_z < 1:
            raise ValueError(f"element counts must be >= 1, got n_y={self.n_y}, n_z={self.n_z}")
        ref = tuple(float(v) for v in self.reference_position)
        if len(ref) != 3 or not all(math.isfinite(v) for v in ref):
            raise ValueError(f"reference_position must be a finite 3D point, got {self.reference_position}")
        object.__setattr__(self, "reference_position", ref)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def spacing(self) -> float:
        "Element pitch along both panel axes (half wavelength)."
        return 0.5 * self.wavelength

    @property
    def n_elements(self) -> int:
        return self.n_y * self.n_z

    @property
    def reference(self) -> np.ndarray:
        return np.array(self.reference_position, dtype=float)


@dataclass(frozen=True)
class TwoPanelLayout:
    """Two panels sharing the vertical x=0 plane.

    The default construction used by the harness stacks panel2 directly
    above panel1 (same x and y), in which case delta_d equals the height
    difference d2 - d1. General in-plane offsets are representable, but the
    free-space inference formulas assume the vertical stack.
    """

    panel1: PanelConfig
    panel2: PanelConfig

    def __post_init__(self):
        for name, panel in (("panel1", self.panel1), ("panel2", self.panel2)):
            if panel.reference_position[0] != 0.0:
                raise ValueError(f"{name} reference must lie in the x=0 plane, got x={panel.reference_position[0]}")

    @property
    def delta_d(self) -> float:
        "Distance between the two reference elements."
        return float(np.linalg.norm(self.panel2.reference - self.panel1.reference))

    @property
    def d1(self) -> float:
        return self.panel1.reference_position[2]

    @property
    def d2(self) -> float:
        return self.panel2.reference_position[2]

    @property
    def is_vertical_stack(self) -> bool:
        "True when panel2 sits directly above/below panel1 (same x and y)."
        return self.panel1.reference_position[:2] == self.panel2.reference_position[:2]


class FieldRegime(Enum):
    FAR = "far"
    NEAR = "near"


def element_position(panel: PanelConfig, iy: int, iz: int) -> np.ndarray:
    """Location of element (iy, iz): reference + half-wavelength steps along y and z."""
    if not (0 <= iy < panel.n_y):
        raise IndexError(f"iy={iy} out of range [0, {panel.n_y})")
    if not (0 <= iz < panel.n_z):
        raise IndexError(f"iz={iz} out of range [0, {panel.n_z})")
    ref = panel.reference
    return ref + np.array([0.0, iy * panel.spacing, iz * panel.spacing])


def element_grid(panel: PanelConfig) -> np.ndarray:
    """All element positions as an (N, 3) array in flat order iy * n_z + iz."""
    iy, iz = np.meshgrid(np.arange(panel.n_y), np.arange(panel.n_z), indexing="ij")
    out = np.empty((panel.n_elements, 3))
    out[:, 0] = panel.reference_position[0]
    out[:, 1] = panel.reference_position[1] + iy.ravel() * panel.spacing
    out[:, 2] = panel.reference_position[2] + iz.ravel() * panel.spacing
    return out


def _corners(panel: PanelConfig) -> np.ndarray:
    ref = panel.reference
    dy = (panel.n_y - 1) * panel.spacing
    dz = (panel.n_z - 1) * panel.spacing
    return ref + np.array([[0, 0, 0], [0, dy, 0], [0, 0, dz], [0, dy, dz]], dtype=float)


def aperture(layout: TwoPanelLayout) -> float:
    """Overall aperture: the largest element-pair distance across both panels.

    Elements form two coplanar rectangles, so the maximum is attained on
    corner pairs; only the 8 corners are examined.
    """
    pts = np.vstack([_corners(layout.panel1), _corners(layout.panel2)])
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff**2).sum(-1)).max())


def rayleigh_distance(d: float, lambda1: float, lambda2: float) -> float:
    """Far-field boundary 2*D^2 / min(lambda1, lambda2) for aperture D."""
    if d < 0:
        raise ValueError(f"aperture must be >= 0, got {d}")
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("wavelengths must be positive")
    return 2.0 * d * d / min(lambda1, lambda2)


def classify_field(r: float, r_rayl: float) -> FieldRegime:
    """FAR iff r >= r_rayl (boundary inclusive), else NEAR."""
    if r <= 0:
        raise ValueError(f"range must be positive, got {r}")
    return FieldRegime.FAR if r >= r_rayl else FieldRegime.NEAR


def los_angles(panel: PanelConfig, point) -> tuple[float, float, float]:
    """Exact line-of-sight (elevation, azimuth, range) from the reference element.

    theta = asin(dz / R) in [-pi/2, pi/2], negative below the panel;
    phi = atan2(dy, dx) normalized to [0, 2*pi); R = |point - reference|.
    """
    delta = np.asarray(point, dtype=float) - panel.reference
    r = float(np.linalg.norm(delta))
    if r == 0.0:
        raise ValueError("point coincides with the panel reference element")
    s = delta[2] / r
    theta = math.asin(min(1.0, max(-1.0, s)))
    phi = math.atan2(delta[1], delta[0])
    if phi < 0.0:
        phi += 2.0 * math.pi
    if phi >= 2.0 * math.pi:  # adding 2*pi to a tiny negative rounds up to 2*pi
        phi = 0.0
    return theta, phi, r
