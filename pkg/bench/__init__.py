"""Benchmark engine: single solves, Monte Carlo experiments and CSV output."""

from .models import (
    CellStatus,
    ResultRecord,
    SummaryRow,
    ExperimentRun,
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    TIMING_COLUMN
)
from .csv_writer import (
    format_cell,
    record_columns,
    records_to_csv,
    summarize_records,
    summary_from_csv,
    summary_to_csv
)
from .experiment_service import ExperimentRunner, run_experiment, default_workers, process_resources
from .single import SolveReport, CertifyReport, run_single, certify_stored

__all__ = [
    'CellStatus',
    'ResultRecord',
    'SummaryRow',
    'ExperimentRun',
    'RECORD_COLUMNS',
    'SUMMARY_COLUMNS',
    'TIMING_COLUMN',
    'format_cell',
    'record_columns',
    'records_to_csv',
    'summarize_records',
    'summary_from_csv',
    'summary_to_csv',
    'ExperimentRunner',
    'run_experiment',
    'default_workers',
    'process_resources',
    'SolveReport',
    'CertifyReport',
    'run_single',
    'certify_stored'
]
