"""Benchmark record models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class CellStatus(Enum):
    """Outcome of one (grid point, trial, method) cell."""
    OK = "ok"
    FAILED = "failed"


RECORD_COLUMNS = [
    'experiment', 'grid', 'grid_value', 'rs_rank', 'trial', 'method', 'status',
    'output_sinr_db', 'relaxation_value', 'achieved_value', 'rank_of_W',
    'thm42', 'cor43', 'cor44', 'constructed'
]
TIMING_COLUMN = 'wall_time_ms'
SUMMARY_COLUMNS = ['experiment', 'grid', 'grid_value', 'method', 'count', 'mean_output_sinr_db']


@dataclass
class ResultRecord:
    """One CSV row: a method evaluated on one trial at one grid point.

    Fields that do not apply to a method (relaxation values for the baselines,
    anything after a failure) stay None and are written as empty cells.
    """
    experiment: str
    grid: str
    grid_value: float
    rs_rank: int
    trial: int
    method: str
    status: CellStatus = CellStatus.OK
    output_sinr_db: Optional[float] = None
    relaxation_value: Optional[float] = None
    achieved_value: Optional[float] = None
    rank_of_W: Optional[int] = None
    thm42: Optional[bool] = None
    cor43: Optional[bool] = None
    cor44: Optional[bool] = None
    constructed: Optional[bool] = None
    wall_time_ms: Optional[float] = None
    error_message: Optional[str] = None

    @property
    def key(self):
        return (self.grid_value, self.trial, self.method)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'experiment': self.experiment,
            'grid': self.grid,
            'grid_value': self.grid_value,
            'rs_rank': self.rs_rank,
            'trial': self.trial,
            'method': self.method,
            'status': self.status.value,
            'output_sinr_db': self.output_sinr_db,
            'relaxation_value': self.relaxation_value,
            'achieved_value': self.achieved_value,
            'rank_of_W': self.rank_of_W,
            'thm42': self.thm42,
            'cor43': self.cor43,
            'cor44': self.cor44,
            'constructed': self.constructed,
            'wall_time_ms': self.wall_time_ms,
            'error_message': self.error_message
        }


@dataclass
class SummaryRow:
    """Mean output SINR of one method at one grid point, over successful trials."""
    experiment: str
    grid: str
    grid_value: float
    method: str
    count: int
    mean_output_sinr_db: Optional[float]


@dataclass
class ExperimentRun:
    """Records of a finished experiment in canonical (grid, trial, method) order."""
    experiment: str
    records: List[ResultRecord] = field(default_factory=list)
    summary: List[SummaryRow] = field(default_factory=list)
    failures: int = 0
    resources: Dict[str, float] = field(default_factory=dict)
