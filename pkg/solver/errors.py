"""Errors raised by the conic solver."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class SolverInputError(Exception):
    """Problem data outside the solver's domain (A not PD, bad dimensions, ε ≤ 0)."""
    field: str
    message: str

    def __str__(self):
        return f"Invalid solver input for {self.field}: {self.message}"


@dataclass
class SolverFailure(Exception):
    """Interior-point run that did not reach even the degraded tolerance."""
    message: str
    iterations: int
    best: Optional[Any] = None
    residuals: Dict[str, float] = field(default_factory=dict)

    def __str__(self):
        detail = ', '.join(f"{k}={v:.2e}" for k, v in self.residuals.items())
        return f"Solver failed after {self.iterations} iterations: {self.message}" + (
            f" ({detail})" if detail else ""
        )


@dataclass
class SolverNumericalError(SolverFailure):
    """Breakdown of the solver's linear algebra (non-finite data, singular systems)."""

    def __str__(self):
        return f"Numerical breakdown after {self.iterations} iterations: {self.message}"
