"""Inference-quality metrics and per-sweep reporting records.

The correlation coefficient F is the normalized squared inner product of
two channel vectors; F = 1 means the vectors are beamforming-equivalent
(any global complex scale drops out). Elevation errors aggregate as the
mean of absolute errors in degrees. Aggregation order is fixed (record
order) so reports are bit-reproducible.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .inference import AngleRange


def correlation(h_est: np.ndarray, h_true: np.ndarray) -> float:
    """F = |h_est^H h_true|^2 / (||h_est||^2 ||h_true||^2), in [0, 1]."""
    h_est = np.asarray(h_est)
    h_true = np.asarray(h_true)
    if h_est.shape != h_true.shape:
        raise ValueError(f"length mismatch: {h_est.shape} vs {h_true.shape}")
    e_est = float(np.vdot(h_est, h_est).real)
    e_true = float(np.vdot(h_true, h_true).real)
    if e_est == 0.0 or e_true == 0.0:
        raise ValueError("correlation is undefined for a zero vector")
    return abs(np.vdot(h_est, h_true)) ** 2 / (e_est * e_true)


def elevation_error_curve(d1: float, d2: float, dx_values) -> np.ndarray:
    """Far-method elevation error atan(dx*(d2-d1)/(dx^2+d1*d2)) per ground distance.

    Unimodal in dx with its maximum at sqrt(d1*d2).
    """
    if not (0 < d1 <= d2):
        raise ValueError(f"heights must satisfy 0 < d1 <= d2, got d1={d1}, d2={d2}")
    dx = np.asarray(dx_values, dtype=float)
    if np.any(dx <= 0):
        raise ValueError("dx values must be positive")
    return np.arctan(dx * (d2 - d1) / (dx**2 + d1 * d2))


def containment_rate(ranges: list[AngleRange], true_thetas) -> float:
    """Fraction of true elevations falling inside their (lower, upper] range."""
    if len(ranges) == 0:
        raise ValueError("containment_rate requires at least one range")
    if len(ranges) != len(true_thetas):
        raise ValueError(f"length mismatch: {len(ranges)} ranges vs {len(true_thetas)} angles")
    hits = sum(1 for rng, th in zip(ranges, true_thetas) if rng.contains(th))
    return hits / len(ranges)


@dataclass
class UERecord:
    """Per-UE outcome of one scenario run."""

    ue_id: int
    x: float
    y: float
    z: float
    scenario: str
    status: str = "ok"
    f_planar: float = math.nan
    f_spherical: float = math.nan
    n_paths_true: int = 0
    n_paths_extracted: int = 0
    elev_errors_rad: list[float] = field(default_factory=list)
    containment: float = math.nan
    theta2_true_rad: float = math.nan
    theta2_inferred_rad: float = math.nan
    r2_true_m: float = math.nan
    r2_inferred_m: float = math.nan

    @property
    def mean_abs_elev_err_deg(self) -> float:
        if not self.elev_errors_rad:
            return math.nan
        return math.degrees(sum(abs(e) for e in self.elev_errors_rad) / len(self.elev_errors_rad))


@dataclass
class ScenarioReport:
    """All per-UE records of a run plus recomputable aggregates."""

    scenario: str
    records: list[UERecord]

    def aggregates(self) -> dict:
        ok = [r for r in self.records if r.status == "ok"]
        out = {
            "scenario": self.scenario,
            "n_ue": len(self.records),
            "n_failed": len(self.records) - len(ok),
        }
        def _stats(values):
            values = [v for v in values if not math.isnan(v)]
            if not values:
                return None
            return {
                "mean": sum(values) / len(values),
                "min": min(values),
                "max": max(values),
            }

        out["f_planar"] = _stats([r.f_planar for r in ok])
        out["f_spherical"] = _stats([r.f_spherical for r in ok])
        out["mean_abs_elev_err_deg"] = _stats([r.mean_abs_elev_err_deg for r in ok])
        out["containment"] = _stats([r.containment for r in ok])
        return out
