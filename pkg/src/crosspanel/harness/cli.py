"""Command-line interface.

Subcommands:
  synth   generate a synthetic MPC dataset (CSV) from a scenario config
  infer   run one scenario end to end and emit a report bundle
  sweep   ground-distance sweep over panel spacings (free-space comparison)
  ingest  validate an external MPC CSV file
  report  re-aggregate an emitted records.csv into a fresh summary

Exit codes: 0 success, 1 usage or configuration error, 2 data error.
"""

import argparse
from dataclasses import replace
import json
import math
from pathlib import Path
import sys

from .config import ConfigError, load_config
from .dataset import DatasetError, ingest_mpc_csv, match_shared_scatterers, write_mpc_csv
from .report import emit_report, load_records_csv, write_curve_csv, write_summary_json
from .runner import run_scenario, run_sweep, synth_dataset
from ..metrics import ScenarioReport

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _apply_overrides(cfg, args):
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    if getattr(args, "mode", None) is not None:
        cfg = replace(cfg, gain_mode=args.mode)
    return cfg


def _settings(cfg) -> dict:
    return {
        "scenario": cfg.scenario.value,
        "seed": cfg.seed,
        "gain_mode": cfg.gain_mode,
        "f1_hz": cfg.panel1.frequency_hz,
        "f2_hz": cfg.panel2.frequency_hz,
        "d1_m": cfg.panel1.height_m,
        "d2_m": cfg.panel2.height_m,
        "delta_m": cfg.delta_m,
        "extraction_enabled": cfg.extraction_enabled,
    }


def _cmd_synth(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ds = synth_dataset(cfg)
    path = out / "mpc.csv"
    write_mpc_csv(ds, path)
    print(f"wrote {len(ds)} rows for {len(ds.ue_ids())} UEs to {path}")
    return EXIT_OK


def _cmd_infer(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    report = run_scenario(cfg, workers=args.workers)
    written = emit_report(report, args.out, settings=_settings(cfg))
    agg = report.aggregates()
    print(f"{agg['n_ue']} UEs, {agg['n_failed']} failed")
    for name, path in sorted(written.items()):
        print(f"wrote {name}: {path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if cfg.sweep is None:
        print("config error: sweep: section is required for the sweep command", file=sys.stderr)
        return EXIT_USAGE
    result = run_sweep(cfg, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    all_records = []
    for (scenario, spacing), curve in sorted(result["curves"].items()):
        name = f"curve_{scenario}_spacing_{format(spacing, 'g')}m.csv"
        write_curve_csv(curve, out / name)
        print(f"wrote {out / name}")
        all_records.extend(result["reports"][(scenario, spacing)].records)
    combined = ScenarioReport("sweep", all_records)
    write_summary_json(combined, out / "summary.json", extra=_settings(cfg))
    print(f"wrote {out / 'summary.json'}")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    ds = ingest_mpc_csv(args.csv)
    counts = {ue: (len(ds.paths(ue, 1)), len(ds.paths(ue, 2))) for ue in ds.ue_ids()}
    print(f"{args.csv}: {len(ds)} rows, {len(counts)} UEs")
    for ue, (n1, n2) in counts.items():
        print(f"  ue {ue}: panel1 {n1} paths, panel2 {n2} paths")
    if args.match_epsilon is not None:
        res = match_shared_scatterers(ds, args.match_epsilon)
        frac1 = res.pairing_fraction(1)
        frac2 = res.pairing_fraction(2)
        print(
            f"matching at eps={args.match_epsilon}: {len(res.pairs)} pairs, "
            f"fractions {frac1 if not math.isnan(frac1) else 'n/a'} / "
            f"{frac2 if not math.isnan(frac2) else 'n/a'}"
        )
    return EXIT_OK


def _cmd_report(args) -> int:
    report = load_records_csv(args.records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "summary.json"
    write_summary_json(report, path)
    print(json.dumps(report.aggregates(), indent=2, sort_keys=True))
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crosspanel", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, workers=False, mode=False):
        p.add_argument("--config", required=True, help="scenario config JSON")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if workers:
            p.add_argument("--workers", type=int, default=1, help="parallel UE workers")
        if mode:
            p.add_argument("--mode", choices=["literal-eq7", "amplitude-assisted"],
                           default=None, help="override the gain inference mode")

    p = sub.add_parser("synth", help="generate a synthetic MPC dataset")
    add_common(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("infer", help="run one scenario")
    add_common(p, workers=True, mode=True)
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("sweep", help="ground-distance sweep over panel spacings")
    add_common(p, workers=True, mode=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("ingest", help="validate an MPC CSV file")
    p.add_argument("csv", help="path to the CSV file")
    p.add_argument("--match-epsilon", type=float, default=None,
                   help="also pair shared scatterers within this distance (m)")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("report", help="re-aggregate an emitted records.csv")
    p.add_argument("--records", required=True, help="records.csv from a previous run")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DatasetError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
