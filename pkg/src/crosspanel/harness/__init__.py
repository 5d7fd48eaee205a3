"""Scenario configs, dataset I/O, sweep execution and report emission."""

from .config import (
    ConfigError,
    ConfigParseError,
    ConfigRangeError,
    ConfigSchemaError,
    ScenarioConfig,
    load_config,
    parse_config,
)
from .dataset import (
    BadValueError,
    DatasetError,
    DuplicateKeyError,
    MissingColumnsError,
    MpcDataset,
    MpcRow,
    MatchResult,
    PairedPaths,
    ingest_mpc_csv,
    match_shared_scatterers,
    write_mpc_csv,
)
from .report import emit_report, load_records_csv, records_equal
from .runner import generate_scatterers, run_scenario, run_sweep, synth_dataset

__all__ = [
    "BadValueError",
    "ConfigError",
    "ConfigParseError",
    "ConfigRangeError",
    "ConfigSchemaError",
    "DatasetError",
    "DuplicateKeyError",
    "MatchResult",
    "MissingColumnsError",
    "MpcDataset",
    "MpcRow",
    "PairedPaths",
    "ScenarioConfig",
    "emit_report",
    "generate_scatterers",
    "ingest_mpc_csv",
    "load_config",
    "load_records_csv",
    "match_shared_scatterers",
    "parse_config",
    "records_equal",
    "run_scenario",
    "run_sweep",
    "synth_dataset",
    "write_mpc_csv",
]
