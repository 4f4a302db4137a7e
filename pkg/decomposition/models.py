"""Data models for the rank-one decomposition."""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np


@dataclass
class DecompositionResult:
    """Vectors x_1..x_R with Σ x_r x_rᴴ = X and equal A- and B-forms."""
    vectors: List[np.ndarray]
    rank: int
    residuals: Dict[str, float] = field(default_factory=dict)
    updates: int = 0

    def matrix(self) -> np.ndarray:
        """Reassembled Σ x_r x_rᴴ."""
        stacked = np.column_stack(self.vectors)
        return stacked @ stacked.conj().T

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)
