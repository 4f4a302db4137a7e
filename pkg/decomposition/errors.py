"""Errors raised by the rank-one decomposition."""

from dataclasses import dataclass, field
from typing import Dict


@dataclass
class DecompositionFailure(Exception):
    """Quadratic-form equalization did not reach tolerance within the update cap."""
    message: str
    residuals: Dict[str, float] = field(default_factory=dict)

    def __str__(self):
        detail = ', '.join(f"{k}={v:.2e}" for k, v in self.residuals.items())
        return f"Rank-one decomposition failed: {self.message}" + (f" ({detail})" if detail else "")
