"""CSV serialization of result records and per-method summaries."""

import csv
import io
import math
from collections import OrderedDict
from typing import Iterable, List, Optional, Sequence, Tuple

from .models import (
    RECORD_COLUMNS, SUMMARY_COLUMNS, TIMING_COLUMN, CellStatus, ResultRecord, SummaryRow
)


def format_cell(value) -> str:
    """Floats use repr so values read back exactly; None is an empty cell."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, CellStatus):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def record_columns(timing: bool = False) -> List[str]:
    return RECORD_COLUMNS + [TIMING_COLUMN] if timing else list(RECORD_COLUMNS)


def records_to_csv(records: Iterable[ResultRecord], timing: bool = False) -> str:
    """Header plus one line per record, comma separated with '\\n' line endings."""
    columns = record_columns(timing)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for record in records:
        data = record.to_dict()
        writer.writerow([format_cell(data[column]) for column in columns])
    return buffer.getvalue()


def summarize(rows: Sequence[Tuple[str, str, str, str, str, str]]) -> List[SummaryRow]:
    """
    Mean output SINR per (grid value, method) from written CSV cells.

    Args:
        rows: (experiment, grid, grid_value, method, status, output_sinr_db) as text

    Returns:
        Summary rows in first-appearance order; the mean is math.fsum over the
        successful values in row order divided by their count
    """
    groups: 'OrderedDict[Tuple[str, str, str, str], List[float]]' = OrderedDict()
    for experiment, grid, grid_value, method, status, sinr in rows:
        values = groups.setdefault((experiment, grid, grid_value, method), [])
        if status == CellStatus.OK.value and sinr != '':
            values.append(float(sinr))

    summary = []
    for (experiment, grid, grid_value, method), values in groups.items():
        mean: Optional[float] = math.fsum(values) / len(values) if values else None
        summary.append(SummaryRow(experiment, grid, float(grid_value), method, len(values), mean))
    return summary


def summarize_records(records: Iterable[ResultRecord]) -> List[SummaryRow]:
    """Summary computed from the cell text the records serialize to."""
    return summarize([
        (
            record.experiment, record.grid, format_cell(record.grid_value), record.method,
            record.status.value, format_cell(record.output_sinr_db)
        )
        for record in records
    ])


def summary_from_csv(text: str) -> List[SummaryRow]:
    """Recompute the summary from a records CSV."""
    reader = csv.DictReader(io.StringIO(text))
    return summarize([
        (row['experiment'], row['grid'], row['grid_value'], row['method'], row['status'], row['output_sinr_db'])
        for row in reader
    ])


def summary_to_csv(summary: Iterable[SummaryRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(SUMMARY_COLUMNS)
    for row in summary:
        writer.writerow([
            row.experiment, row.grid, format_cell(row.grid_value), row.method,
            format_cell(row.count), format_cell(row.mean_output_sinr_db)
        ])
    return buffer.getvalue()
