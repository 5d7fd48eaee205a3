"""Report emission and re-ingestion.

Files are fully deterministic for a given report (no timestamps, fixed
column order, floats printed with 17 significant digits so re-parsing is
lossless). Missing values are empty cells; per-path elevation errors are
semicolon-joined in a single cell.
"""

import csv
import json
import math
from pathlib import Path

from ..metrics import ScenarioReport, UERecord

RECORD_COLUMNS = (
    "ue_id", "x_m", "y_m", "z_m", "scenario", "status",
    "f_planar", "f_spherical", "n_paths_true", "n_paths_extracted",
    "elev_errors_rad", "containment",
    "theta2_true_rad", "theta2_inferred_rad", "r2_true_m", "r2_inferred_m",
)


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else format(float(x), ".17g")


def _parse(text: str) -> float:
    return math.nan if text == "" else float(text)


def write_records_csv(report: ScenarioReport, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)
        for r in report.records:
            writer.writerow([
                r.ue_id, _fmt(r.x), _fmt(r.y), _fmt(r.z), r.scenario, r.status,
                _fmt(r.f_planar), _fmt(r.f_spherical),
                r.n_paths_true, r.n_paths_extracted,
                ";".join(format(e, ".17g") for e in r.elev_errors_rad),
                _fmt(r.containment),
                _fmt(r.theta2_true_rad), _fmt(r.theta2_inferred_rad),
                _fmt(r.r2_true_m), _fmt(r.r2_inferred_m),
            ])


def load_records_csv(path) -> ScenarioReport:
    """Re-parse an emitted records file; inverse of write_records_csv."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != RECORD_COLUMNS:
            raise ValueError(f"unexpected records header {header!r}")
        records = []
        scenario = ""
        for rec in reader:
            row = dict(zip(RECORD_COLUMNS, rec))
            scenario = row["scenario"]
            errors = row["elev_errors_rad"]
            records.append(UERecord(
                ue_id=int(row["ue_id"]),
                x=_parse(row["x_m"]), y=_parse(row["y_m"]), z=_parse(row["z_m"]),
                scenario=scenario,
                status=row["status"],
                f_planar=_parse(row["f_planar"]),
                f_spherical=_parse(row["f_spherical"]),
                n_paths_true=int(row["n_paths_true"]),
                n_paths_extracted=int(row["n_paths_extracted"]),
                elev_errors_rad=[float(t) for t in errors.split(";")] if errors else [],
                containment=_parse(row["containment"]),
                theta2_true_rad=_parse(row["theta2_true_rad"]),
                theta2_inferred_rad=_parse(row["theta2_inferred_rad"]),
                r2_true_m=_parse(row["r2_true_m"]),
                r2_inferred_m=_parse(row["r2_inferred_m"]),
            ))
    return ScenarioReport(scenario, records)


def records_equal(a: UERecord, b: UERecord) -> bool:
    """Field equality treating NaN == NaN as true (round-trip comparison)."""
    def eq(x, y):
        if isinstance(x, float) and isinstance(y, float):
            return (math.isnan(x) and math.isnan(y)) or x == y
        return x == y

    fields = (
        "ue_id", "x", "y", "z", "scenario", "status", "f_planar", "f_spherical",
        "n_paths_true", "n_paths_extracted", "containment",
        "theta2_true_rad", "theta2_inferred_rad", "r2_true_m", "r2_inferred_m",
    )
    if not all(eq(getattr(a, f), getattr(b, f)) for f in fields):
        return False
    return a.elev_errors_rad == b.elev_errors_rad


def write_summary_json(report: ScenarioReport, path, extra: dict | None = None):
    payload = report.aggregates()
    if extra:
        payload["settings"] = extra
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_accuracy_map(report: ScenarioReport, path):
    """(x, y, value) triplets of per-UE containment for map plotting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("x_m", "y_m", "containment"))
        for r in report.records:
            if not math.isnan(r.containment):
                writer.writerow((_fmt(r.x), _fmt(r.y), _fmt(r.containment)))


def write_curve_csv(points: list[tuple[float, float]], path):
    """(dx, F) rows, one per swept ground distance."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("dx_m", "f_corr"))
        for dx, f in points:
            writer.writerow((_fmt(dx), _fmt(f)))


def emit_report(report: ScenarioReport, out_dir, settings: dict | None = None) -> dict:
    """Write the standard bundle; returns {name: path} of everything written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}
    records_path = out / "records.csv"
    write_records_csv(report, records_path)
    written["records"] = records_path
    summary_path = out / "summary.json"
    write_summary_json(report, summary_path, extra=settings)
    written["summary"] = summary_path
    if any(not math.isnan(r.containment) for r in report.records):
        map_path = out / "accuracy_map.csv"
        write_accuracy_map(report, map_path)
        written["accuracy_map"] = map_path
    return written
