"""Scenario execution: per-UE pipelines, synthetic scenes, sweeps.

Every UE is processed independently (extract -> infer -> reconstruct ->
score) and failures are recorded in the UE's row rather than aborting the
run. All randomness is derived from the config seed and the UE index, so a
run is deterministic for a fixed config regardless of worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
import math
import multiprocessing

import numpy as np

from ..channel import (
    PathComponent,
    Scatterer,
    friis_gain,
    synth_far_channel,
    synth_multipath_scene,
    synth_spherical_channel,
)
from ..estimation import extract_paths
from ..geometry import TwoPanelLayout, aperture, los_angles, rayleigh_distance
from ..inference import (
    Scenario,
    infer_far_free,
    infer_multipath_far,
    infer_multipath_near,
    infer_near_free,
)
from ..metrics import ScenarioReport, UERecord, correlation
from .config import ScenarioConfig, UEPlacement
from .dataset import MpcDataset, MpcRow


def _scene_seed(cfg_seed: int, ue_id: int, stream: int) -> int:
    return int(np.random.SeedSequence((cfg_seed, stream, ue_id)).generate_state(1)[0])


def _separated(u: float, w: float, accepted: list, bw_u: float, bw_w: float, factor: float) -> bool:
    for au, aw in accepted:
        if abs(u - au) < factor * bw_u and abs(w - aw) < factor * bw_w:
            return False
    return True


def generate_scatterers(cfg: ScenarioConfig, layout: TwoPanelLayout, ue, ue_id: int) -> list[Scatterer]:
    """Deterministic per-UE scatterer placement for the multipath scenarios.

    Directions are rejection-sampled so every pair of paths (including the
    LoS direction when configured) is separated by min_separation_bw
    null-to-null beamwidths in at least one of the direction cosines, which
    keeps the scene resolvable by matched pursuit.
    """
    gen = cfg.scatterers
    rng = np.random.default_rng(
        np.random.SeedSequence((cfg.seed, gen.seed_offset, ue_id))
    )
    p1 = layout.panel1
    d1 = layout.d1
    bw_u = 2.0 / p1.n_y
    bw_w = 2.0 / p1.n_z
    near = cfg.scenario is Scenario.MULTIPATH_NEAR

    base_uw: list[tuple[float, float]] = []
    if gen.include_los:
        th, ph, _ = los_angles(p1, ue)
        base_uw.append((math.cos(th) * math.sin(ph), math.sin(th)))
    if not near:
        d = aperture(layout)
        r_rayl = rayleigh_distance(d, p1.wavelength, layout.panel2.wavelength)
        r_lo = gen.far["range_min_rayleigh"] * r_rayl
        r_hi = gen.far["range_max_rayleigh"] * r_rayl

    accepted_uw = list(base_uw)
    out: list[Scatterer] = []
    attempts = 0
    while len(out) < gen.count:
        attempts += 1
        if attempts > 2000 * gen.count:
            raise RuntimeError(
                f"could not place {gen.count} scatterers with separation "
                f"{gen.min_separation_bw} beamwidths (ue {ue_id})"
            )
        if attempts % (100 * gen.count) == 0:
            # an unlucky prefix can block the rest; restart the set
            accepted_uw = list(base_uw)
            out = []
        phi = rng.uniform(0.05, 1.45)  # front hemisphere, +y side
        if near:
            theta = rng.uniform(-1.3, -0.15)
            t_ground = d1 / abs(math.sin(theta))
            t_lo = max(gen.near["t_min_frac"], 1.0 - gen.near["z_max_frac"])
            t_hi = min(gen.near["t_max_frac"], 1.0 - gen.near["z_min_m"] / d1)
            t = rng.uniform(t_lo, t_hi) * t_ground
            r = t
        else:
            r = rng.uniform(r_lo, r_hi)
            w_lo = (gen.near["z_min_m"] - d1) / r
            theta = math.asin(rng.uniform(w_lo, 0.45))
        u = math.cos(theta) * math.sin(phi)
        w = math.sin(theta)
        if not _separated(u, w, accepted_uw, bw_u, bw_w, gen.min_separation_bw):
            continue
        accepted_uw.append((u, w))
        direction = np.array([
            math.cos(theta) * math.cos(phi),
            math.cos(theta) * math.sin(phi),
            math.sin(theta),
        ])
        position = p1.reference + r * direction
        refl = tuple(
            rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
            for _ in range(2)
        )
        out.append(Scatterer(tuple(position), refl))
    return out


def _match_paths(estimated: list[PathComponent], true_paths: list[PathComponent], bw_u: float, bw_w: float):
    """Greedy nearest one-to-one matching in direction-cosine space.

    Returns {true_index: estimated_path} for matches within half a beamwidth.
    """
    def uw(p):
        return (math.cos(p.theta) * math.sin(p.phi), math.sin(p.theta))

    cand = []
    for i, t in enumerate(true_paths):
        tu, tw = uw(t)
        for j, e in enumerate(estimated):
            eu, ew = uw(e)
            d = math.hypot((eu - tu) / bw_u, (ew - tw) / bw_w)
            if d <= 0.5:
                cand.append((d, i, j))
    cand.sort()
    matched: dict[int, PathComponent] = {}
    used_est: set[int] = set()
    for _, i, j in cand:
        if i in matched or j in used_est:
            continue
        matched[i] = estimated[j]
        used_est.add(j)
    return matched


def _free_space_record(cfg: ScenarioConfig, layout: TwoPanelLayout, ue_id: int, ue) -> UERecord:
    p1, p2 = layout.panel1, layout.panel2
    rec = UERecord(ue_id, ue[0], ue[1], ue[2], cfg.scenario.value)
    try:
        th1, ph1, r1 = los_angles(p1, ue)
        th2_true, ph2_true, r2_true = los_angles(p2, ue)
        rec.n_paths_true = 1
        true_path1 = PathComponent(friis_gain(p1.wavelength, r1), th1, ph1)
        if cfg.extraction_enabled:
            h1 = synth_far_channel(p1, [true_path1])
            est_paths = extract_paths(h1, p1, cfg.extraction)
            if not est_paths:
                raise RuntimeError("extraction returned no paths")
            est = max(est_paths, key=lambda p: abs(p.gain))
            rec.n_paths_extracted = len(est_paths)
        else:
            est = true_path1
            rec.n_paths_extracted = 1

        if cfg.scenario is Scenario.FAR_FREE:
            result = infer_far_free(est, p1.wavelength, p2.wavelength, layout.delta_d, cfg.gain_mode)
        else:
            result = infer_near_free(est, layout.d1, layout.d2, p2.wavelength)
            rec.r2_inferred_m = result.r2
        h2_hat = synth_far_channel(p2, [result.path])
        h2_planar = synth_far_channel(
            p2, [PathComponent(friis_gain(p2.wavelength, r2_true), th2_true, ph2_true)]
        )
        rec.f_planar = correlation(h2_hat, h2_planar)
        rec.f_spherical = correlation(h2_hat, synth_spherical_channel(p2, ue))
        rec.theta2_true_rad = th2_true
        rec.theta2_inferred_rad = result.path.theta
        rec.elev_errors_rad = [result.path.theta - th2_true]
        rec.r2_true_m = r2_true
    except Exception as exc:  # recorded per UE, the sweep never aborts
        rec.status = f"error: {exc}"
    return rec


def _multipath_record(cfg: ScenarioConfig, layout: TwoPanelLayout, ue_id: int, ue) -> UERecord:
    p1, p2 = layout.panel1, layout.panel2
    rec = UERecord(ue_id, ue[0], ue[1], ue[2], cfg.scenario.value)
    near = cfg.scenario is Scenario.MULTIPATH_NEAR
    try:
        scatterers = generate_scatterers(cfg, layout, ue, ue_id)
        deviation = cfg.delta_m if near else 0.0
        paths1, paths2, _ = synth_multipath_scene(
            layout, ue, scatterers, deviation,
            seed=_scene_seed(cfg.seed, ue_id, 7),
            include_los=cfg.scatterers.include_los,
        )
        rec.n_paths_true = len(paths1)
        if cfg.extraction_enabled:
            h1 = synth_far_channel(p1, paths1)
            est_paths = extract_paths(h1, p1, cfg.extraction)
        else:
            est_paths = list(paths1)
        rec.n_paths_extracted = len(est_paths)
        matched = _match_paths(est_paths, paths1, 2.0 / p1.n_y, 2.0 / p1.n_z)

        if near:
            hits = 0
            for i, true2 in enumerate(paths2):
                est = matched.get(i)
                if est is None:
                    continue
                result = infer_multipath_near([est], layout.d1, layout.d2, cfg.delta_m)
                rng_i, _ = result.ranges[0]
                if rng_i.contains(true2.theta):
                    hits += 1
            rec.containment = hits / len(paths2)
        else:
            result = infer_multipath_far(list(matched.values()) or est_paths)
            errors = []
            hat_paths = []
            for i, true2 in enumerate(paths2):
                est = matched.get(i)
                if est is None:
                    continue
                errors.append(est.theta - true2.theta)
                hat_paths.append(PathComponent(true2.gain, est.theta, est.phi))
            rec.elev_errors_rad = errors
            if hat_paths:
                h2_hat = synth_far_channel(p2, hat_paths)
                rec.f_planar = correlation(h2_hat, synth_far_channel(p2, paths2))
    except Exception as exc:
        rec.status = f"error: {exc}"
    return rec


def _ue_record(args) -> UERecord:
    cfg, spacing, ue_id, ue = args
    layout = cfg.layout(panel_spacing_m=spacing)
    if cfg.scenario in (Scenario.FAR_FREE, Scenario.NEAR_FREE):
        return _free_space_record(cfg, layout, ue_id, ue)
    return _multipath_record(cfg, layout, ue_id, ue)


def _map_records(arg_list: list, workers: int) -> list[UERecord]:
    if workers <= 1:
        return [_ue_record(a) for a in arg_list]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as ex:
        return list(ex.map(_ue_record, arg_list))


def run_scenario(cfg: ScenarioConfig, workers: int = 1, panel_spacing_m: float | None = None) -> ScenarioReport:
    """Execute one scenario over its UE placement; deterministic for a fixed config."""
    ues = cfg.ue.positions()
    args = [(cfg, panel_spacing_m, ue_id, ue) for ue_id, ue in enumerate(ues)]
    records = _map_records(args, workers)
    return ScenarioReport(cfg.scenario.value, records)


def run_sweep(cfg: ScenarioConfig, workers: int = 1) -> dict:
    """Ground-distance sweep over panel spacings and free-space scenarios.

    Returns {"curves": {(scenario, spacing): [(dx, f_planar), ...]},
             "reports": {(scenario, spacing): ScenarioReport}}.
    """
    if cfg.sweep is None:
        raise ValueError("config has no sweep section")
    sw = cfg.sweep
    n = int(math.floor((sw["dx_stop_m"] - sw["dx_start_m"]) / sw["dx_step_m"] + 1e-9)) + 1
    dxs = [sw["dx_start_m"] + i * sw["dx_step_m"] for i in range(n)]
    placement = UEPlacement(points=[[dx, 0.0, 0.0] for dx in dxs])

    curves: dict = {}
    reports: dict = {}
    for spacing in sw["panel_spacings_m"]:
        for name in sw["scenarios"]:
            sub = replace(cfg, scenario=Scenario(name), ue=placement)
            report = run_scenario(sub, workers=workers, panel_spacing_m=spacing)
            reports[(name, spacing)] = report
            curves[(name, spacing)] = [
                (dx, r.f_planar) for dx, r in zip(dxs, report.records)
            ]
    return {"curves": curves, "reports": reports}


def synth_dataset(cfg: ScenarioConfig) -> MpcDataset:
    """Generate an MPC dataset from the configured scenario (the synth command).

    Multipath scenarios emit one row per scattered path per panel with the
    true interaction points; free-space scenarios emit LoS rows only.
    """
    layout = cfg.layout()
    rows: list[MpcRow] = []
    for ue_id, ue in enumerate(cfg.ue.positions()):
        if cfg.scenario in (Scenario.FAR_FREE, Scenario.NEAR_FREE):
            for panel_id, panel in ((1, layout.panel1), (2, layout.panel2)):
                th, ph, r = los_angles(panel, ue)
                gain = friis_gain(panel.wavelength, r)
                rows.append(MpcRow(ue_id, panel_id, 0, gain, th, ph, None))
            continue
        scatterers = generate_scatterers(cfg, layout, ue, ue_id)
        deviation = cfg.delta_m if cfg.scenario is Scenario.MULTIPATH_NEAR else 0.0
        paths1, paths2, truth = synth_multipath_scene(
            layout, ue, scatterers, deviation,
            seed=_scene_seed(cfg.seed, ue_id, 7),
            include_los=cfg.scatterers.include_los,
        )
        for panel_id, paths in ((1, paths1), (2, paths2)):
            for path_id, p in enumerate(paths):
                pair = truth[path_id]
                point = None if pair is None else tuple(pair[panel_id - 1])
                rows.append(MpcRow(ue_id, panel_id, path_id, p.gain, p.theta, p.phi, point))
    return MpcDataset(rows)
