"""Multi-path component datasets: CSV ingestion, emission and cross-panel pairing.

CSV schema (header required, one path per row):

    ue_id,panel_id,path_id,gain_real,gain_imag,elev_rad,azim_rad,point_x,point_y,point_z

* panel_id is 1 or 2, (ue_id, panel_id, path_id) must be unique;
* elev_rad in [-pi/2, pi/2], azim_rad in [0, 2*pi);
* point_* is the scattering/interaction point in meters, all three empty
  for a line-of-sight row;
* floats are written with 17 significant digits so a write/read round trip
  is lossless.
"""

import csv
from dataclasses import dataclass
import math


COLUMNS = (
    "ue_id", "panel_id", "path_id", "gain_real", "gain_imag",
    "elev_rad", "azim_rad", "point_x", "point_y", "point_z",
)


class DatasetError(Exception):
    """Base class for MPC dataset failures."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class MissingColumnsError(DatasetError):
    pass


class BadValueError(DatasetError):
    pass


class DuplicateKeyError(DatasetError):
    pass


@dataclass(frozen=True)
class MpcRow:
    """One multi-path component of one panel's channel to one UE."""

    ue_id: int
    panel_id: int
    path_id: int
    gain: complex
    elev_rad: float
    azim_rad: float
    point: tuple[float, float, float] | None  # None for line-of-sight rows

    @property
    def is_los(self) -> bool:
        return self.point is None


@dataclass
class MpcDataset:
    rows: list[MpcRow]

    def __len__(self) -> int:
        return len(self.rows)

    def ue_ids(self) -> list[int]:
        return sorted({r.ue_id for r in self.rows})

    def paths(self, ue_id: int, panel_id: int) -> list[MpcRow]:
        out = [r for r in self.rows if r.ue_id == ue_id and r.panel_id == panel_id]
        out.sort(key=lambda r: r.path_id)
        return out


def _parse_float(text: str, name: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise BadValueError(f"{name}: not a number: {text!r}", line)
    if not math.isfinite(value):
        raise BadValueError(f"{name}: must be finite, got {text!r}", line)
    return value


def _parse_int(text: str, name: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise BadValueError(f"{name}: not an integer: {text!r}", line)


def ingest_mpc_csv(path) -> MpcDataset:
    """Parse and validate an MPC CSV file; fails fast with the offending line number."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingColumnsError("empty file, expected header row", 1)
        if tuple(h.strip() for h in header) != COLUMNS:
            missing = set(COLUMNS) - {h.strip() for h in header}
            if missing:
                raise MissingColumnsError(f"missing column(s) {sorted(missing)}", 1)
            raise MissingColumnsError(f"bad header {header!r}, expected {list(COLUMNS)}", 1)

        rows: list[MpcRow] = []
        seen: set[tuple[int, int, int]] = set()
        for line_no, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(COLUMNS):
                raise BadValueError(f"expected {len(COLUMNS)} fields, got {len(rec)}", line_no)
            ue_id = _parse_int(rec[0], "ue_id", line_no)
            panel_id = _parse_int(rec[1], "panel_id", line_no)
            if panel_id not in (1, 2):
                raise BadValueError(f"panel_id: must be 1 or 2, got {panel_id}", line_no)
            path_id = _parse_int(rec[2], "path_id", line_no)
            key = (ue_id, panel_id, path_id)
            if key in seen:
                raise DuplicateKeyError(f"duplicate (ue_id, panel_id, path_id) = {key}", line_no)
            seen.add(key)
            gain = complex(
                _parse_float(rec[3], "gain_real", line_no),
                _parse_float(rec[4], "gain_imag", line_no),
            )
            elev = _parse_float(rec[5], "elev_rad", line_no)
            if not (-math.pi / 2 <= elev <= math.pi / 2):
                raise BadValueError(f"elev_rad: must be in [-pi/2, pi/2], got {elev}", line_no)
            azim = _parse_float(rec[6], "azim_rad", line_no)
            if not (0.0 <= azim < 2.0 * math.pi):
                raise BadValueError(f"azim_rad: must be in [0, 2*pi), got {azim}", line_no)
            point_text = [t.strip() for t in rec[7:10]]
            if all(t == "" for t in point_text):
                point = None
            elif any(t == "" for t in point_text):
                raise BadValueError("point_x/point_y/point_z: give all three or none", line_no)
            else:
                point = (
                    _parse_float(point_text[0], "point_x", line_no),
                    _parse_float(point_text[1], "point_y", line_no),
                    _parse_float(point_text[2], "point_z", line_no),
                )
            rows.append(MpcRow(ue_id, panel_id, path_id, gain, elev, azim, point))
    return MpcDataset(rows)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_mpc_csv(ds: MpcDataset, path):
    """Emit a dataset in the documented schema with lossless float text."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for r in ds.rows:
            point = ("", "", "") if r.point is None else tuple(_fmt(v) for v in r.point)
            writer.writerow([
                r.ue_id, r.panel_id, r.path_id,
                _fmt(r.gain.real), _fmt(r.gain.imag),
                _fmt(r.elev_rad), _fmt(r.azim_rad),
                *point,
            ])


@dataclass(frozen=True)
class PairedPaths:
    """A panel-1 path matched with a panel-2 path for the same UE."""

    ue_id: int
    path1: MpcRow
    path2: MpcRow
    distance_m: float | None  # None for LoS-LoS pairs


@dataclass
class MatchResult:
    pairs: list[PairedPaths]
    unpaired1: list[MpcRow]
    unpaired2: list[MpcRow]

    def pairing_fraction(self, panel_id: int) -> float:
        paired = len(self.pairs)
        total = paired + len(self.unpaired1 if panel_id == 1 else self.unpaired2)
        return paired / total if total else math.nan


def match_shared_scatterers(ds: MpcDataset, epsilon: float) -> MatchResult:
    """Pair panel-1 and panel-2 paths whose interaction points are within epsilon.

    Greedy nearest-first with a one-to-one constraint per UE; ties broken by
    lower (panel-1 path_id, panel-2 path_id). LoS rows pair with LoS rows in
    path_id order. Unpaired paths are data, not errors.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    pairs: list[PairedPaths] = []
    unpaired1: list[MpcRow] = []
    unpaired2: list[MpcRow] = []
    for ue_id in ds.ue_ids():
        rows1 = ds.paths(ue_id, 1)
        rows2 = ds.paths(ue_id, 2)
        los1 = [r for r in rows1 if r.is_los]
        los2 = [r for r in rows2 if r.is_los]
        for a, b in zip(los1, los2):
            pairs.append(PairedPaths(ue_id, a, b, None))
        unpaired1.extend(los1[len(los2):])
        unpaired2.extend(los2[len(los1):])

        sc1 = [r for r in rows1 if not r.is_los]
        sc2 = [r for r in rows2 if not r.is_los]
        candidates = []
        for i, a in enumerate(sc1):
            for j, b in enumerate(sc2):
                d = math.dist(a.point, b.point)
                if d <= epsilon:
                    candidates.append((d, a.path_id, b.path_id, i, j))
        candidates.sort()
        used1: set[int] = set()
        used2: set[int] = set()
        for d, _, _, i, j in candidates:
            if i in used1 or j in used2:
                continue
            used1.add(i)
            used2.add(j)
            pairs.append(PairedPaths(ue_id, sc1[i], sc2[j], d))
        unpaired1.extend(r for i, r in enumerate(sc1) if i not in used1)
        unpaired2.extend(r for j, r in enumerate(sc2) if j not in used2)
    return MatchResult(pairs, unpaired1, unpaired2)
