"""Scenario configuration: JSON schema, validation and defaults.

The configuration is a single JSON document. Unknown keys are rejected so
typos surface as schema errors, and every validation failure names the
offending field with dotted-path notation (e.g. "panel2.height_m").

Default values describe the reference setup: 16x16 panels at 28 and 39 GHz,
panel heights 15 and 16 m, ground UEs on a 2.5 m grid, deviation bound
0.15 m, up to 25 extracted paths.

Schema (defaults in parentheses):

  scenario: "far_free" | "near_free" | "multipath_far" | "multipath_near" ("far_free")
  seed: int (0)
  gain_mode: "literal-eq7" | "amplitude-assisted" ("literal-eq7")
  panel1: {frequency_hz (28e9), n_y (16), n_z (16), height_m (15.0)}
  panel2: {frequency_hz (39e9), n_y (16), n_z (16), height_m (16.0)}
  ue: {points: [[x,y,z], ...]}          -- explicit placement, or
      {grid: {x_start, x_stop, y_start, y_stop, spacing_m (2.5), z_m (0.0)}}
      (grid x 10..30, y -10..10)
  extraction: {enabled (true), max_paths (25), coarse_grid_step_deg (1.0),
               refine_tolerance_deg (0.01), residual_stop (1e-6)}
  scatterers: {count (5), seed_offset (1000), min_separation_bw (2.0),
               include_los (false),
               near: {z_min_m (1.0), z_max_frac (0.9), t_min_frac (0.2), t_max_frac (0.9)},
               far: {range_min_rayleigh (5.0), range_max_rayleigh (10.0)}}
  delta_m: float (0.15)        -- assumed max vertical scattering-point deviation
  matching_epsilon_m: float (0.1)  -- interaction-point pairing radius; keep >= the
                                      deviation actually present in the data
  sweep: {dx_start_m, dx_stop_m, dx_step_m (0.5), panel_spacings_m ([1,3,5]),
          scenarios (["far_free","near_free"])}   -- used by the sweep command only
"""

from dataclasses import dataclass, field
import json
import math

from ..geometry import PanelConfig, TwoPanelLayout
from ..estimation import ExtractionConfig
from ..inference import GAIN_MODES, Scenario


class ConfigError(Exception):
    """Base class for configuration failures."""


class ConfigParseError(ConfigError):
    """The file is not readable JSON."""


class ConfigSchemaError(ConfigError):
    """A field is missing, unknown, or of the wrong type/value set."""


class ConfigRangeError(ConfigError):
    """A field value is outside its legal numeric range."""


@dataclass
class PanelSpec:
    frequency_hz: float
    n_y: int
    n_z: int
    height_m: float

    def to_panel(self) -> PanelConfig:
        return PanelConfig(self.frequency_hz, self.n_y, self.n_z, (0.0, 0.0, self.height_m))


@dataclass
class UEPlacement:
    points: list | None = None
    grid: dict | None = None

    def positions(self) -> list[tuple[float, float, float]]:
        if self.points is not None:
            return [tuple(p) for p in self.points]
        g = self.grid
        xs = _arange_inclusive(g["x_start"], g["x_stop"], g["spacing_m"])
        ys = _arange_inclusive(g["y_start"], g["y_stop"], g["spacing_m"])
        return [(x, y, g["z_m"]) for x in xs for y in ys]


@dataclass
class ScattererGenSpec:
    count: int = 5
    seed_offset: int = 1000
    min_separation_bw: float = 2.0
    include_los: bool = False
    near: dict = field(default_factory=lambda: {
        "z_min_m": 1.0, "z_max_frac": 0.9, "t_min_frac": 0.2, "t_max_frac": 0.9,
    })
    far: dict = field(default_factory=lambda: {
        "range_min_rayleigh": 5.0, "range_max_rayleigh": 10.0,
    })


@dataclass
class ScenarioConfig:
    scenario: Scenario
    seed: int
    gain_mode: str
    panel1: PanelSpec
    panel2: PanelSpec
    ue: UEPlacement
    extraction_enabled: bool
    extraction: ExtractionConfig
    scatterers: ScattererGenSpec
    delta_m: float
    matching_epsilon_m: float
    sweep: dict | None = None

    def layout(self, panel_spacing_m: float | None = None) -> TwoPanelLayout:
        """Build the layout; optionally override the height gap d2 - d1."""
        p2 = self.panel2
        if panel_spacing_m is not None:
            p2 = PanelSpec(p2.frequency_hz, p2.n_y, p2.n_z, self.panel1.height_m + panel_spacing_m)
        return TwoPanelLayout(self.panel1.to_panel(), p2.to_panel())


def _arange_inclusive(start: float, stop: float, step: float) -> list[float]:
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def _require_type(value, types, path):
    if isinstance(value, bool) and bool not in (types if isinstance(types, tuple) else (types,)):
        raise ConfigSchemaError(f"{path}: expected {types}, got bool")
    if not isinstance(value, types):
        raise ConfigSchemaError(f"{path}: expected {types}, got {type(value).__name__}")
    return value


def _num(value, path, lo=None, hi=None, lo_open=False) -> float:
    _require_type(value, (int, float), path)
    v = float(value)
    if not math.isfinite(v):
        raise ConfigRangeError(f"{path}: must be finite, got {value}")
    if lo is not None and (v <= lo if lo_open else v < lo):
        op = ">" if lo_open else ">="
        raise ConfigRangeError(f"{path}: must be {op} {lo}, got {value}")
    if hi is not None and v > hi:
        raise ConfigRangeError(f"{path}: must be <= {hi}, got {value}")
    return v


def _int(value, path, lo=None) -> int:
    _require_type(value, int, path)
    if lo is not None and value < lo:
        raise ConfigRangeError(f"{path}: must be >= {lo}, got {value}")
    return value


def _check_keys(d: dict, allowed: set, path: str):
    unknown = set(d) - allowed
    if unknown:
        raise ConfigSchemaError(f"{path or 'config'}: unknown field(s) {sorted(unknown)}")


_PANEL_DEFAULTS = {
    "panel1": {"frequency_hz": 28e9, "n_y": 16, "n_z": 16, "height_m": 15.0},
    "panel2": {"frequency_hz": 39e9, "n_y": 16, "n_z": 16, "height_m": 16.0},
}


def _parse_panel(raw: dict, name: str) -> PanelSpec:
    _require_type(raw, dict, name)
    _check_keys(raw, {"frequency_hz", "n_y", "n_z", "height_m"}, name)
    merged = dict(_PANEL_DEFAULTS[name], **raw)
    return PanelSpec(
        frequency_hz=_num(merged["frequency_hz"], f"{name}.frequency_hz", lo=0, lo_open=True),
        n_y=_int(merged["n_y"], f"{name}.n_y", lo=1),
        n_z=_int(merged["n_z"], f"{name}.n_z", lo=1),
        height_m=_num(merged["height_m"], f"{name}.height_m", lo=0, lo_open=True),
    )


def _parse_ue(raw: dict) -> UEPlacement:
    _require_type(raw, dict, "ue")
    _check_keys(raw, {"points", "grid"}, "ue")
    if "points" in raw and "grid" in raw:
        raise ConfigSchemaError("ue: give either points or grid, not both")
    if "points" in raw:
        pts = _require_type(raw["points"], list, "ue.points")
        if not pts:
            raise ConfigSchemaError("ue.points: must be nonempty")
        for i, p in enumerate(pts):
            _require_type(p, list, f"ue.points[{i}]")
            if len(p) != 3:
                raise ConfigSchemaError(f"ue.points[{i}]: expected [x, y, z]")
            for j, v in enumerate(p):
                _num(v, f"ue.points[{i}][{j}]")
        return UEPlacement(points=[[float(v) for v in p] for p in pts])
    grid_defaults = {
        "x_start": 10.0, "x_stop": 30.0, "y_start": -10.0, "y_stop": 10.0,
        "spacing_m": 2.5, "z_m": 0.0,
    }
    grid_raw = raw.get("grid", {})
    _require_type(grid_raw, dict, "ue.grid")
    _check_keys(grid_raw, set(grid_defaults), "ue.grid")
    g = dict(grid_defaults, **grid_raw)
    grid = {
        "x_start": _num(g["x_start"], "ue.grid.x_start"),
        "x_stop": _num(g["x_stop"], "ue.grid.x_stop"),
        "y_start": _num(g["y_start"], "ue.grid.y_start"),
        "y_stop": _num(g["y_stop"], "ue.grid.y_stop"),
        "spacing_m": _num(g["spacing_m"], "ue.grid.spacing_m", lo=0, lo_open=True),
        "z_m": _num(g["z_m"], "ue.grid.z_m"),
    }
    if grid["x_stop"] < grid["x_start"]:
        raise ConfigRangeError("ue.grid.x_stop: must be >= ue.grid.x_start")
    if grid["y_stop"] < grid["y_start"]:
        raise ConfigRangeError("ue.grid.y_stop: must be >= ue.grid.y_start")
    return UEPlacement(grid=grid)


def _parse_extraction(raw: dict) -> tuple[bool, ExtractionConfig]:
    _require_type(raw, dict, "extraction")
    defaults = {
        "enabled": True, "max_paths": 25, "coarse_grid_step_deg": 1.0,
        "refine_tolerance_deg": 0.01, "residual_stop": 1e-6,
    }
    _check_keys(raw, set(defaults), "extraction")
    e = dict(defaults, **raw)
    enabled = _require_type(e["enabled"], bool, "extraction.enabled")
    step = _num(e["coarse_grid_step_deg"], "extraction.coarse_grid_step_deg", lo=0, lo_open=True)
    tol = _num(e["refine_tolerance_deg"], "extraction.refine_tolerance_deg", lo=0, lo_open=True)
    stop = _num(e["residual_stop"], "extraction.residual_stop", lo=0, hi=1, lo_open=True)
    if stop >= 1.0:
        raise ConfigRangeError(f"extraction.residual_stop: must be < 1, got {stop}")
    if tol >= step:
        raise ConfigRangeError("extraction.refine_tolerance_deg: must be < coarse_grid_step_deg")
    try:
        cfg = ExtractionConfig(
            max_paths=_int(e["max_paths"], "extraction.max_paths", lo=1),
            coarse_grid_step=math.radians(step),
            refine_tolerance=math.radians(tol),
            residual_stop=stop,
        )
    except ValueError as exc:
        raise ConfigRangeError(f"extraction: {exc}") from exc
    return enabled, cfg


def _parse_scatterers(raw: dict) -> ScattererGenSpec:
    _require_type(raw, dict, "scatterers")
    spec = ScattererGenSpec()
    allowed = {"count", "seed_offset", "min_separation_bw", "include_los", "near", "far"}
    _check_keys(raw, allowed, "scatterers")
    if "count" in raw:
        spec.count = _int(raw["count"], "scatterers.count", lo=1)
    if "seed_offset" in raw:
        spec.seed_offset = _int(raw["seed_offset"], "scatterers.seed_offset", lo=0)
    if "min_separation_bw" in raw:
        spec.min_separation_bw = _num(raw["min_separation_bw"], "scatterers.min_separation_bw", lo=0)
    if "include_los" in raw:
        spec.include_los = _require_type(raw["include_los"], bool, "scatterers.include_los")
    if "near" in raw:
        _require_type(raw["near"], dict, "scatterers.near")
        _check_keys(raw["near"], set(spec.near), "scatterers.near")
        merged = dict(spec.near, **raw["near"])
        spec.near = {k: _num(v, f"scatterers.near.{k}") for k, v in merged.items()}
    if "far" in raw:
        _require_type(raw["far"], dict, "scatterers.far")
        _check_keys(raw["far"], set(spec.far), "scatterers.far")
        merged = dict(spec.far, **raw["far"])
        spec.far = {k: _num(v, f"scatterers.far.{k}", lo=0, lo_open=True) for k, v in merged.items()}
    return spec


def _parse_sweep(raw: dict) -> dict:
    _require_type(raw, dict, "sweep")
    defaults = {
        "dx_start_m": 2.0, "dx_stop_m": 60.0, "dx_step_m": 0.5,
        "panel_spacings_m": [1.0, 3.0, 5.0],
        "scenarios": ["far_free", "near_free"],
    }
    _check_keys(raw, set(defaults), "sweep")
    s = dict(defaults, **raw)
    out = {
        "dx_start_m": _num(s["dx_start_m"], "sweep.dx_start_m", lo=0, lo_open=True),
        "dx_stop_m": _num(s["dx_stop_m"], "sweep.dx_stop_m", lo=0, lo_open=True),
        "dx_step_m": _num(s["dx_step_m"], "sweep.dx_step_m", lo=0, lo_open=True),
    }
    if out["dx_stop_m"] < out["dx_start_m"]:
        raise ConfigRangeError("sweep.dx_stop_m: must be >= sweep.dx_start_m")
    spacings = _require_type(s["panel_spacings_m"], list, "sweep.panel_spacings_m")
    out["panel_spacings_m"] = [
        _num(v, f"sweep.panel_spacings_m[{i}]", lo=0, lo_open=True) for i, v in enumerate(spacings)
    ]
    scens = _require_type(s["scenarios"], list, "sweep.scenarios")
    for i, name in enumerate(scens):
        if name not in ("far_free", "near_free"):
            raise ConfigSchemaError(f"sweep.scenarios[{i}]: must be far_free or near_free, got {name!r}")
    out["scenarios"] = list(scens)
    return out


def parse_config(raw: dict) -> ScenarioConfig:
    """Validate a raw JSON document and apply defaults."""
    _require_type(raw, dict, "")
    allowed = {
        "scenario", "seed", "gain_mode", "panel1", "panel2", "ue",
        "extraction", "scatterers", "delta_m", "matching_epsilon_m", "sweep",
    }
    _check_keys(raw, allowed, "")

    scenario_name = raw.get("scenario", "far_free")
    try:
        scenario = Scenario(scenario_name)
    except ValueError:
        valid = [s.value for s in Scenario]
        raise ConfigSchemaError(f"scenario: unknown tag {scenario_name!r}, expected one of {valid}")

    gain_mode = raw.get("gain_mode", "literal-eq7")
    if gain_mode not in GAIN_MODES:
        raise ConfigSchemaError(f"gain_mode: must be one of {list(GAIN_MODES)}, got {gain_mode!r}")

    panel1 = _parse_panel(raw.get("panel1", {}), "panel1")
    panel2 = _parse_panel(raw.get("panel2", {}), "panel2")
    if panel2.height_m <= panel1.height_m:
        raise ConfigRangeError(
            f"panel2.height_m: must exceed panel1.height_m={panel1.height_m}, got {panel2.height_m}"
        )

    enabled, extraction = _parse_extraction(raw.get("extraction", {}))
    delta = _num(raw.get("delta_m", 0.15), "delta_m", lo=0)
    if scenario is Scenario.MULTIPATH_NEAR and delta >= panel2.height_m - panel1.height_m:
        raise ConfigRangeError(
            f"delta_m: must be < panel2.height_m - panel1.height_m "
            f"= {panel2.height_m - panel1.height_m}, got {delta}"
        )

    cfg = ScenarioConfig(
        scenario=scenario,
        seed=_int(raw.get("seed", 0), "seed", lo=0),
        gain_mode=gain_mode,
        panel1=panel1,
        panel2=panel2,
        ue=_parse_ue(raw.get("ue", {})),
        extraction_enabled=enabled,
        extraction=extraction,
        scatterers=_parse_scatterers(raw.get("scatterers", {})),
        delta_m=delta,
        matching_epsilon_m=_num(raw.get("matching_epsilon_m", 0.1), "matching_epsilon_m", lo=0, lo_open=True),
        sweep=_parse_sweep(raw["sweep"]) if "sweep" in raw else None,
    )
    return cfg


def load_config(path) -> ScenarioConfig:
    """Read, parse and validate a JSON scenario configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
