"""Data models for the conic relaxation solver."""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import List, Optional, Dict, Any

import numpy as np

from linalg import HermitianMatrix


class SolveStatus(Enum):
    """Outcome of an interior-point run."""
    OPTIMAL = "optimal"
    DEGRADED = "degraded"
    FAILED = "failed"


@dataclass
class SolverOptions:
    """Interior-point settings."""
    max_iterations: int = 200
    feas_tol: float = 1e-8
    gap_tol: float = 1e-8
    degraded_tol: float = 1e-6
    step_fraction: float = 0.99
    centering_exponent: float = 3.0
    # Relative margin of the dual starting multiplier above its feasibility bound.
    initial_centering: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SolverOptions':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


@dataclass
class IterationRecord:
    """One interior-point iteration, objectives in the maximization frame."""
    iteration: int
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    gap: float
    step: float = 0.0


@dataclass
class ConicIterate:
    """Raw engine iterate: x, s (cone slack), y (equality multipliers), z (cone duals)."""
    x: np.ndarray
    s: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def copy(self) -> 'ConicIterate':
        return ConicIterate(self.x.copy(), self.s.copy(), self.y.copy(), self.z.copy())


@dataclass
class RelaxationProblem:
    """max tr(R̂_s Y) − ε‖Y‖ s.t. tr(A W) = 1, W − Y ⪰ 0, W ⪰ 0."""
    Rs_hat: HermitianMatrix
    A: HermitianMatrix
    eps: float

    @property
    def dim(self) -> int:
        return self.A.dim


@dataclass
class KktReport:
    """Complementarity and feasibility residuals of a primal-dual pair."""
    r_comp1: float
    r_comp2: float
    r_comp3: float
    r_compact: float
    r_primal: float
    r_dual: float
    r_gap: float

    @property
    def worst(self) -> float:
        return max(self.r_comp1, self.r_comp2, self.r_comp3,
                   self.r_compact, self.r_primal, self.r_dual, self.r_gap)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass
class ConicSolution:
    """Primal (W, Y, t) and dual (z, Z) blocks of the relaxation."""
    W: HermitianMatrix
    Y: HermitianMatrix
    t: float
    z: float
    Z: HermitianMatrix
    primal_value: float = 0.0
    dual_value: float = 0.0
    residuals: Optional[KktReport] = None
    status: SolveStatus = SolveStatus.OPTIMAL
    iterations: int = 0
    history: List[IterationRecord] = field(default_factory=list)

    @property
    def degraded(self) -> bool:
        return self.status == SolveStatus.DEGRADED


@dataclass
class InnerSolution:
    """Fixed-weight inner problem result; unpacks as (Y, value)."""
    Y: HermitianMatrix
    value: float
    Z: HermitianMatrix
    t: float
    dual_value: float
    status: SolveStatus = SolveStatus.OPTIMAL
    iterations: int = 0

    def __iter__(self):
        return iter((self.Y, self.value))
