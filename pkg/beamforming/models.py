"""Data models for robust beamforming."""

import math
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional

import numpy as np

from linalg import HermitianMatrix, MatrixInputError, as_hermitian, canonical_phase
from solver import ConicSolution, SolverInputError, SolverOptions


@dataclass(frozen=True, eq=False)
class BeamWeights:
    """Complex beamvector w; finite and not identically zero."""
    w: np.ndarray

    def __post_init__(self):
        vector = np.array(self.w, dtype=np.complex128).reshape(-1)
        if vector.size == 0 or not np.all(np.isfinite(vector)):
            raise MatrixInputError('w', vector.size, 'beamvector must be finite and non-empty')
        if not np.any(vector != 0):
            raise MatrixInputError('w', 0, 'beamvector must not be zero')
        vector.setflags(write=False)
        object.__setattr__(self, 'w', vector)

    @property
    def dim(self) -> int:
        return self.w.size

    def outer(self) -> HermitianMatrix:
        return HermitianMatrix.outer(self.w)

    def canonical(self, A) -> 'BeamWeights':
        """Scaled so wᴴAw = 1, first non-negligible entry real and positive."""
        return canonicalize(self.w, A)

    def to_list(self) -> List[List[float]]:
        return [[float(x.real), float(x.imag)] for x in self.w]


def canonicalize(w, A) -> BeamWeights:
    """
    Canonical representative of the SINR-equivalence class of w.

    Raises:
        MatrixInputError: If wᴴAw is not positive
    """
    vector = canonical_phase(np.asarray(w, dtype=np.complex128).reshape(-1))
    quad = as_hermitian(A).quad(vector)
    if not quad > 0.0:
        raise MatrixInputError('w', f"{quad:.3e}", 'wᴴAw must be positive to normalize')
    return BeamWeights(vector / math.sqrt(quad))


@dataclass(frozen=True)
class UncertaintyModel:
    """Radii of the two covariance uncertainty balls.

    gamma bounds the sample covariance error and acts as the diagonal loading factor;
    eps bounds the presumed signal covariance error.
    """
    gamma: float
    eps: float

    def __post_init__(self):
        for name in ('gamma', 'eps'):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value <= 0.0:
                raise SolverInputError(name, f"must be a positive finite number, got {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_rules(cls, R_hat, Rs_hat, gamma_factor: float, eps_factor: float) -> 'UncertaintyModel':
        """γ = gamma_factor·‖R̂‖ and ε = eps_factor·‖R̂_s‖ (Frobenius norms)."""
        return cls(gamma=gamma_factor * float(np.linalg.norm(as_hermitian(R_hat).data)),
                   eps=eps_factor * float(np.linalg.norm(as_hermitian(Rs_hat).data)))


@dataclass
class BeamformerOptions:
    """Settings for the relaxation-and-decomposition procedure."""
    solver: SolverOptions = field(default_factory=SolverOptions)
    rank_tol: float = 1e-6
    borderline_low: float = 1e-7
    borderline_high: float = 1e-5
    tie_tol: float = 1e-9
    branch_tol: float = 1e-6
    certificate_psd_tol: float = 1e-7
    decomposition_tol: float = 1e-8
    workers: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class CertificateReport:
    """Evaluated sufficient conditions for a rank-one relaxation solution.

    The flags hold the raw inequality outcomes; `applicable` is False when the
    relaxation value is not positive, in which case the guarantees behind the flags
    do not apply.
    """
    rank_one_at_solver: bool = False
    thm42_holds: bool = False
    cor43_holds: bool = False
    cor44_holds: bool = False
    constructed_optimal: bool = False
    applicable: bool = True
    lhs_rhs_values: Dict[str, float] = field(default_factory=dict)

    @property
    def any_holds(self) -> bool:
        return self.thm42_holds or self.cor43_holds or self.cor44_holds

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class Algorithm1Diagnostics:
    """What the relaxation-and-decomposition procedure saw and chose."""
    relaxation_value: float
    rank_of_W: int
    per_branch_values: List[float]
    selected_index: int
    certificate: CertificateReport
    achieved_value: float
    branch_optimal: List[bool] = field(default_factory=list)
    output_source: str = 'rank_one'
    dual_eigen_value: float = 0.0
    borderline: bool = False
    solution: Optional[ConicSolution] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'relaxation_value': self.relaxation_value,
            'rank_of_W': self.rank_of_W,
            'per_branch_values': list(self.per_branch_values),
            'selected_index': self.selected_index,
            'certificate': self.certificate.to_dict(),
            'achieved_value': self.achieved_value,
            'branch_optimal': list(self.branch_optimal),
            'output_source': self.output_source,
            'dual_eigen_value': self.dual_eigen_value,
            'borderline': self.borderline,
            'iterations': self.solution.iterations if self.solution else 0,
            'residuals': self.solution.residuals.to_dict()
            if self.solution and self.solution.residuals else {}
        }
