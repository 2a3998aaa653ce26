"""Configured experiments, report bundles and the acceptance suite."""
from ._acceptance import (
    CRITERIA,
    SETTINGS,
    AcceptanceSummary,
    Level,
    LevelSettings,
    acceptance_suite,
)
from ._config import (
    ExperimentConfig,
    Kind,
    load_config,
    parse_config,
    worker_count,
)
from ._experiments import execute, prepare_field, run_experiment
from ._plots import emit_plots
from ._printer import Mark, Outcome, Printer, PrinterOptions, Spacing
from ._report import (
    REPORT_KEYS,
    Bundle,
    ExperimentResult,
    read_report,
    read_series,
    write_bundle,
)
