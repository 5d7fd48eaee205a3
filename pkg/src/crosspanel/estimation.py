"""Multi-path parameter extraction from a known channel vector.

Greedy matched pursuit: repeatedly pick the (theta, phi) maximizing the
matched-filter response |a(theta, phi)^H r| on a coarse grid, refine by
coordinate-wise golden-section search, jointly re-fit all gains by least
squares against the input, and subtract. A cyclic re-refinement pass
(each path polished against the residual with the others removed) runs
after every addition, so exact plane-wave inputs converge to the planted
parameters instead of spawning mop-up paths.

A planar array cannot distinguish front from back (phi and pi - phi yield
identical responses), so extracted azimuths are canonicalized to the front
hemisphere cos(phi) >= 0 -- consistent with sources at x > 0.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from . import _kernels
from .channel import PathComponent, steering_vector
from .geometry import PanelConfig

# Inputs with mean-square element magnitude at or below this are treated as
# zero: extraction returns no paths instead of pursuing numerical noise.
# Kept far below any physical gain here (double-bounce free-space gains at
# tens of km are still ~1e-16 amplitude, energy 1e-32).
ZERO_ENERGY_PER_ELEMENT = 1e-40

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class ExtractionError(Exception):
    """Base class for extraction failures."""


class ExtractionDivergenceError(ExtractionError):
    """Residual energy stopped decreasing before the stop threshold."""


class ExtractionLimitWarning(UserWarning):
    """max_paths reached with residual energy still above the stop threshold."""


@dataclass(frozen=True)
class ExtractionConfig:
    """Pursuit controls.

    coarse_grid_step: grid pitch in radians over theta in [-pi/2, pi/2] and
        phi in [0, 2*pi).
    refine_tolerance: golden-section bracket width at which refinement stops.
    residual_stop: stop once residual energy falls below this fraction of the
        input energy.
    """

    max_paths: int = 25
    coarse_grid_step: float = math.radians(1.0)
    refine_tolerance: float = math.radians(0.01)
    residual_stop: float = 1e-6
    polish_rounds: int = 8

    def __post_init__(self):
        if self.max_paths < 1:
            raise ValueError(f"max_paths must be >= 1, got {self.max_paths}")
        if not (0.0 < self.refine_tolerance < self.coarse_grid_step):
            raise ValueError(
                "refine_tolerance must satisfy 0 < refine_tolerance < coarse_grid_step, "
                f"got {self.refine_tolerance} vs {self.coarse_grid_step}"
            )
        if not (0.0 < self.residual_stop < 1.0):
            raise ValueError(f"residual_stop must be in (0, 1), got {self.residual_stop}")
        if self.polish_rounds < 0:
            raise ValueError(f"polish_rounds must be >= 0, got {self.polish_rounds}")


def _angle_grids(cfg: ExtractionConfig) -> tuple[np.ndarray, np.ndarray]:
    step = cfg.coarse_grid_step
    n_t = int(math.floor(math.pi / step)) + 1
    thetas = -math.pi / 2 + step * np.arange(n_t)
    n_p = int(math.ceil(2.0 * math.pi / step))
    phis = step * np.arange(n_p)
    return thetas, phis


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Deterministic golden-section maximizer on [lo, hi]; returns the midpoint."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _wrap_phi(phi: float) -> float:
    phi = math.fmod(phi, 2.0 * math.pi)
    if phi < 0.0:
        phi += 2.0 * math.pi
    if phi >= 2.0 * math.pi:  # adding 2*pi to a tiny negative rounds up to 2*pi
        phi = 0.0
    return phi


def _refine(h2: np.ndarray, theta: float, phi: float, cfg: ExtractionConfig) -> tuple[float, float]:
    """Coordinate-wise golden-section ascent of |a^H r| around (theta, phi).

    The search runs in direction-cosine coordinates (u, w), where a single
    path's response separates into a product of one-dimensional factors, so
    coordinate descent has no ridge to zigzag along. Two stages: a
    grid-cell-wide bracket, then a narrow bracket searched 100x finer. The
    golden tolerances are divided by 8 so the angle-domain precision
    honors refine_tolerance despite the u->phi conditioning away from
    broadside. The contract is "at least refine_tolerance"; the extra
    precision keeps joint gain refits from leaving tolerance-level residuals
    that would spawn mop-up paths.
    """
    u = math.cos(theta) * math.sin(phi)
    w = math.sin(theta)
    for step, tol in (
        (cfg.coarse_grid_step, cfg.refine_tolerance / 8.0),
        (4.0 * cfg.refine_tolerance, cfg.refine_tolerance / 800.0),
    ):
        for _ in range(2):
            w = _golden_max(
                lambda x: abs(_kernels.corr_point(h2, u, x)),
                max(-1.0, w - step), min(1.0, w + step), tol,
            )
            u = _golden_max(
                lambda x: abs(_kernels.corr_point(h2, x, w)),
                max(-1.0, u - step), min(1.0, u + step), tol,
            )
    theta = math.asin(min(1.0, max(-1.0, w)))
    c = math.cos(theta)
    s = min(1.0, max(-1.0, u / c)) if c > 0.0 else 0.0
    phi = math.asin(s) if s >= 0.0 else 2.0 * math.pi + math.asin(s)
    return theta, _wrap_phi(phi)


def _design_matrix(panel: PanelConfig, angles: list[tuple[float, float]]) -> np.ndarray:
    cols = [math.sqrt(panel.n_elements) * steering_vector(panel, th, ph) for th, ph in angles]
    return np.column_stack(cols)


def _refit(h: np.ndarray, panel: PanelConfig, angles: list[tuple[float, float]]):
    a = _design_matrix(panel, angles)
    gains, *_ = np.linalg.lstsq(a, h, rcond=None)
    residual = h - a @ gains
    return gains, residual

def _pursuit(h: np.ndarray, panel: PanelConfig, cfg: ExtractionConfig):
    """Core loop; returns (angles, gains, residual_history)."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (panel.n_elements,):
        raise ValueError(f"channel length {h.shape} does not match panel N={panel.n_elements}")
    energy = float(np.vdot(h, h).real)
    if energy == 0.0:
        raise ValueError("channel vector must be nonzero")
    if energy <= ZERO_ENERGY_PER_ELEMENT * panel.n_elements:
        return [], np.zeros(0, dtype=complex), [energy]

    thetas, phis = _angle_grids(cfg)
    u_grid = np.cos(thetas)[:, None] * np.sin(phis)[None, :]
    w_grid = np.sin(thetas)

    target = cfg.residual_stop * energy
    angles: list[tuple[float, float]] = []
    gains = np.zeros(0, dtype=complex)
    residual = h
    history = [energy]

    while len(angles) < cfg.max_paths:
        h2 = residual.reshape(panel.n_y, panel.n_z)
        scores = _kernels.corr_grid_scores(h2, w_grid, u_grid)
        flat = int(np.argmax(scores))  # ties: lowest theta index, then phi index
        t_idx, p_idx = divmod(flat, scores.shape[1])
        theta, phi = _refine(h2, float(thetas[t_idx]), float(phis[p_idx]), cfg)
        angles.append((theta, phi))
        gains, residual = _refit(h, panel, angles)
        res_energy = float(np.vdot(residual, residual).real)

        # Cyclic re-refinement against leave-one-out residuals; a round that
        # fails to lower the residual is reverted, keeping the energy history
        # non-increasing by construction.
        for _ in range(cfg.polish_rounds):
            if res_energy < target:
                break
            snapshot = (list(angles), gains, residual, res_energy)
            moved = False
            for i in range(len(angles)):
                others = angles[:i] + angles[i + 1 :]
                if others:
                    a_others = _design_matrix(panel, others)
                    g = np.concatenate([gains[:i], gains[i + 1 :]])
                    partial = h - a_others @ g
                else:
                    partial = h
                new = _refine(partial.reshape(panel.n_y, panel.n_z), *angles[i], cfg)
                # movement below the refiner's own resolution means converged
                if (
                    abs(new[0] - angles[i][0]) > 0.01 * cfg.refine_tolerance
                    or abs(new[1] - angles[i][1]) > 0.01 * cfg.refine_tolerance
                ):
                    moved = True
                angles[i] = new
            gains, residual = _refit(h, panel, angles)
            new_energy = float(np.vdot(residual, residual).real)
            if new_energy > res_energy:
                angles, gains, residual, res_energy = snapshot
                break
            res_energy = new_energy
            if not moved:
                break
        history.append(res_energy)
        if res_energy < target:
            return angles, gains, history
        if res_energy >= history[-2] * (1.0 - 1e-12):
            raise ExtractionDivergenceError(
                f"residual energy stopped decreasing at path {len(angles)}: "
                f"{history[-2]:.6e} -> {res_energy:.6e}"
            )

    warnings.warn(
        f"max_paths={cfg.max_paths} reached with residual energy "
        f"{history[-1]:.3e} above stop threshold {target:.3e}",
        ExtractionLimitWarning,
        stacklevel=3,
    )
    return angles, gains, history


def extract_paths(h: np.ndarray, panel: PanelConfig, cfg: ExtractionConfig | None = None) -> list[PathComponent]:
    """Recover (gain, theta, phi) triples composing a plane-wave channel.

    Gains follow the sqrt(N)-scaled synthesis convention, so
    synth_far_channel(panel, extract_paths(h, panel)) reproduces h for
    resolvable inputs. Raises ExtractionDivergenceError if the residual stops
    decreasing; warns ExtractionLimitWarning when max_paths is exhausted
    first. Near-zero inputs (mean-square element magnitude <= 1e-24) yield
    an empty list.
    """
    cfg = cfg or ExtractionConfig()
    angles, gains, _ = _pursuit(h, panel, cfg)
    return [PathComponent(complex(g), th, ph) for g, (th, ph) in zip(gains, angles)]


def reconstruct(panel: PanelConfig, paths: list[PathComponent]) -> np.ndarray:
    """Rebuild a channel vector from path parameters (synthesis phase 3)."""
    from .channel import synth_far_channel

    if not paths:
        raise ValueError("cannot reconstruct from an empty path list")
    return synth_far_channel(panel, paths)
