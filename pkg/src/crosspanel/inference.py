"""Cross-panel inference rules for the four propagation scenarios.

Free-space (one direct path): the second panel's channel is fully inferable.
Shared far scatterers: per-path angles transfer unchanged; gains do not.
Shared near scatterers: azimuths transfer; each elevation is bounded to a
half-open interval determined by the panel heights and the assumed maximum
vertical scattering-point deviation.

All elevation preconditions below require theta in (-pi/2, 0): the geometric
constructions intersect the ground below the panels and are meaningless at
or above the horizon. Out-of-range inputs are rejected, never clamped.
"""

from dataclasses import dataclass
from enum import Enum
import cmath
import math

from .channel import PathComponent, friis_gain


class Scenario(Enum):
    FAR_FREE = "far_free"
    NEAR_FREE = "near_free"
    MULTIPATH_FAR = "multipath_far"
    MULTIPATH_NEAR = "multipath_near"


GAIN_MODES = ("literal-eq7", "amplitude-assisted")


class AngleDomainError(ValueError):
    """An elevation input violates the required (-pi/2, 0) range."""


class DeviationBoundError(ValueError):
    """The deviation bound is too large for the panel spacing to guarantee containment."""


@dataclass(frozen=True)
class AngleRange:
    """Half-open elevation interval (lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (-math.pi / 2 <= self.lower < self.upper <= math.pi / 2):
            raise ValueError(f"invalid angle range ({self.lower}, {self.upper}]")

    def contains(self, theta: float) -> bool:
        return self.lower < theta <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class InferenceResult:
    """Tagged inference output; populated fields depend on the scenario.

    Free-space scenarios carry one fully inferred path (plus the panel-2
    range for the near case). Multipath scenarios carry angle information
    only -- per-path (theta, phi) for far scatterers, (AngleRange, phi) for
    near scatterers -- and never a gain.
    """

    scenario: Scenario
    path: PathComponent | None = None
    r2: float | None = None
    angles: tuple[tuple[float, float], ...] | None = None
    ranges: tuple[tuple[AngleRange, float], ...] | None = None

    def __post_init__(self):
        expected = {
            Scenario.FAR_FREE: ("path",),
            Scenario.NEAR_FREE: ("path", "r2"),
            Scenario.MULTIPATH_FAR: ("angles",),
            Scenario.MULTIPATH_NEAR: ("ranges",),
        }[self.scenario]
        for field in ("path", "r2", "angles", "ranges"):
            value = getattr(self, field)
            if field in expected and value is None:
                raise ValueError(f"{self.scenario.value} result requires {field}")
            if field not in expected and value is not None:
                raise ValueError(f"{self.scenario.value} result must not set {field}")


def _check_theta2(theta2: float, name: str = "theta2"):
    if not (-math.pi / 2 < theta2 < 0.0):
        raise AngleDomainError(f"{name} must lie in (-pi/2, 0), got {theta2}")


def infer_gain_far(
    alpha1: complex,
    lambda1: float,
    lambda2: float,
    delta_d: float,
    theta2: float,
    mode: str = "literal-eq7",
) -> complex:
    """Translate a free-space complex gain to the second panel's frequency.

    literal-eq7 mode: magnitude scales by lambda2/lambda1 exactly; the phase
    is the principal argument of alpha1 (in (-pi, pi]) scaled by
    lambda1/lambda2, plus the reference-element offset 2*pi*delta_d*
    sin(theta2)/lambda2. The fractional complex power uses the principal
    branch; the true propagation phase is only known modulo the first
    wavelength, so any branch carries an inherent ambiguity and the
    principal one is pinned here.

    amplitude-assisted mode: recovers the first-panel range from the gain
    magnitude (r1 = lambda1 / (4*pi*|alpha1|)), shifts it by the projected
    panel offset, and re-evaluates the free-space gain exactly at
    r2 = r1 - delta_d*sin(theta2). Exact whenever alpha1 itself is a
    free-space gain.
    """
    alpha1 = complex(alpha1)
    if alpha1 == 0:
        raise ValueError("alpha1 must be nonzero")
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("wavelengths must be positive")
    if delta_d < 0:
        raise ValueError(f"delta_d must be >= 0, got {delta_d}")
    _check_theta2(theta2)
    if mode not in GAIN_MODES:
        raise ValueError(f"mode must be one of {GAIN_MODES}, got {mode!r}")

    if mode == "amplitude-assisted":
        r1 = lambda1 / (4.0 * math.pi * abs(alpha1))
        return friis_gain(lambda2, r1 - delta_d * math.sin(theta2))

    magnitude = abs(alpha1) * (lambda2 / lambda1)
    phase = cmath.phase(alpha1) * (lambda1 / lambda2)
    phase += 2.0 * math.pi * delta_d * math.sin(theta2) / lambda2
    return magnitude * cmath.exp(1j * phase)


def infer_far_free(
    path1: PathComponent,
    lambda1: float,
    lambda2: float,
    delta_d: float,
    mode: str = "literal-eq7",
) -> InferenceResult:
    """Far-field free-space: angles copy over, the gain is rescaled."""
    gain2 = infer_gain_far(path1.gain, lambda1, lambda2, delta_d, path1.theta, mode)
    return InferenceResult(
        Scenario.FAR_FREE,
        path=PathComponent(gain2, path1.theta, path1.phi),
    )


def infer_near_free(path1: PathComponent, d1: float, d2: float, lambda2: float) -> InferenceResult:
    """Near-field free-space: exact transfer through the shared ground point.

    theta2 = atan((d2/d1) * tan(theta1)), r2 = d2 / |sin(theta2)|, gain from
    the free-space law at r2; azimuth is unchanged. For a ground UE under a
    vertically stacked layout these are identities, not approximations.
    """
    if d1 <= 0 or d2 <= 0:
        raise ValueError(f"panel heights must be positive, got d1={d1}, d2={d2}")
    _check_theta2(path1.theta, "theta1")
    theta2 = math.atan((d2 / d1) * math.tan(path1.theta))
    r2 = d2 / abs(math.sin(theta2))
    return InferenceResult(
        Scenario.NEAR_FREE,
        path=PathComponent(friis_gain(lambda2, r2), theta2, path1.phi),
        r2=r2,
    )


def infer_multipath_far(paths1: list[PathComponent]) -> InferenceResult:
    """Shared far-field scatterers: every path's angle pair transfers as-is."""
    if not paths1:
        raise ValueError("path list must be nonempty")
    return InferenceResult(
        Scenario.MULTIPATH_FAR,
        angles=tuple((p.theta, p.phi) for p in paths1),
    )


def infer_multipath_near(
    paths1: list[PathComponent],
    d1: float,
    d2: float,
    delta: float,
) -> InferenceResult:
    """Shared near-field scatterers: per-path elevation ranges for panel 2.

    Each elevation is bounded by (-pi/2, atan(((d2 - delta)/d1)*tan(theta1))].
    Containment of the true panel-2 elevation is guaranteed when the panel-1
    scattering point lies on its arrival ray above the ground and the
    vertical deviation magnitude is at most delta; this requires
    delta < d2 - d1, enforced here.
    """
    if not paths1:
        raise ValueError("path list must be nonempty")
    if d2 <= d1:
        raise ValueError(f"panel 2 must sit above panel 1, got d1={d1}, d2={d2}")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    if delta >= d2 - d1:
        raise DeviationBoundError(
            f"delta={delta} >= d2-d1={d2 - d1}: elevation containment cannot be guaranteed"
        )
    ranges = []
    for p in paths1:
        _check_theta2(p.theta, "theta_l1")
        upper = math.atan(((d2 - delta) / d1) * math.tan(p.theta))
        ranges.append((AngleRange(-math.pi / 2, upper), p.phi))
    return InferenceResult(Scenario.MULTIPATH_NEAR, ranges=tuple(ranges))
