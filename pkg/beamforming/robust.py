"""Robust beamformer for general-rank signals via the LMI relaxation.

Procedure:
    1. solve the relaxation and its dual, giving (W*, Y*) and (z*, Z*)
    2. if W* has rank one, its scaled principal eigenvector is optimal
    3. otherwise split W* = Σ w_i w_iᴴ with D(W*, R̂ + γI, Z*)
    4. for each branch solve the inner problem at R·w_i w_iᴴ
    5. keep the branch with the largest inner value
    6. return whichever of the rank-one vector, the best branch, the constructed
       certificate vector or the plug-in vector has the largest inner value
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from decomposition import numeric_rank, rank_one_decompose
from linalg import HermitianMatrix, as_hermitian, eig_hermitian
from solver import (
    InnerSolution, RelaxationProblem, compact_form_residual, dual_eigen_value,
    solve_inner, solve_relaxation
)
from .certificates import check_certificates, construct_rank_one_certificate, truncate_to_rank
from .models import (
    Algorithm1Diagnostics, BeamWeights, BeamformerOptions, UncertaintyModel, canonicalize
)
from .sinr import loaded_covariance, plugin_beamformer

logger = logging.getLogger(__name__)


@dataclass
class _Candidate:
    w: np.ndarray
    value: float
    source: str


def _inner_values(vectors: List[np.ndarray], Rs_hat: HermitianMatrix, eps: float,
                  opts: BeamformerOptions) -> List[InnerSolution]:
    """Solve the inner problem per branch; results come back in branch order."""
    matrices = [HermitianMatrix.outer(v) for v in vectors]
    if opts.workers > 1 and len(matrices) > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as executor:
            return list(executor.map(lambda m: solve_inner(m, Rs_hat, eps, opts.solver), matrices))
    return [solve_inner(m, Rs_hat, eps, opts.solver) for m in matrices]


def _select(values: List[float], tie_tol: float) -> int:
    """Lowest index whose value is within tie_tol of the maximum."""
    top = max(values)
    return next(i for i, v in enumerate(values) if v >= top - tie_tol * max(1.0, abs(top)))


def _eigen_ratio(W: HermitianMatrix) -> float:
    values = eig_hermitian(W).values
    if values.size < 2 or values[0] <= 0.0:
        return 0.0
    return max(0.0, float(values[1] / values[0]))


def algorithm1(R_hat, Rs_hat, u: UncertaintyModel,
               opts: Optional[BeamformerOptions] = None) -> Tuple[BeamWeights, Algorithm1Diagnostics]:
    """
    Compute a robust beamvector maximizing the worst-case SINR.

    Args:
        R_hat: Sample covariance (PSD)
        Rs_hat: Presumed signal covariance (PSD)
        u: Uncertainty radii (γ, ε)
        opts: Rank, tie and solver settings

    Returns:
        (w, diagnostics) with w canonical: wᴴ(R̂ + γI)w = 1, first entry phase zero

    Raises:
        SolverInputError: If the data is invalid
        SolverNumericalError: If the solver's linear algebra breaks down
        SolverFailure: If the relaxation or an inner problem does not converge
        DecompositionFailure: If the rank-one decomposition does not converge
    """
    opts = opts or BeamformerOptions()
    R_hat = as_hermitian(R_hat)
    Rs_hat = as_hermitian(Rs_hat)
    A = loaded_covariance(R_hat, u.gamma)

    solution = solve_relaxation(RelaxationProblem(Rs_hat=Rs_hat, A=A, eps=u.eps), opts.solver)
    v_star = solution.primal_value
    W, Y, Z, z = solution.W, solution.Y, solution.Z, solution.z

    rank = numeric_rank(W, opts.rank_tol)
    ratio = _eigen_ratio(W)
    borderline = rank > 1 and opts.borderline_low <= ratio <= opts.borderline_high
    if borderline:
        logger.warning(f"Borderline rank of W (λ₂/λ₁ = {ratio:.2e}); evaluating both paths")

    candidates: List[_Candidate] = []
    branch_values: List[float] = []
    branch_optimal: List[bool] = []

    if rank == 1 or borderline:
        pair = eig_hermitian(W)
        w = math.sqrt(pair.largest) * pair.vector(0)
        w = canonicalize(w, A).w
        inner = solve_inner(HermitianMatrix.outer(w), Rs_hat, u.eps, opts.solver)
        candidates.append(_Candidate(w, inner.value, 'rank_one'))
        if rank == 1:
            branch_values.append(inner.value)
            branch_optimal.append(
                compact_form_residual(HermitianMatrix.outer(w), inner.Y, z, Z, Rs_hat, u.eps)
                <= opts.branch_tol * max(1.0, abs(v_star))
            )

    if rank > 1:
        truncated, _ = truncate_to_rank(W, A, opts.rank_tol)
        decomposition = rank_one_decompose(truncated, A, Z, tol=opts.decomposition_tol)
        scale = math.sqrt(decomposition.rank)
        branches = [scale * x for x in decomposition.vectors]
        solutions = _inner_values(branches, Rs_hat, u.eps, opts)
        for w, inner in zip(branches, solutions):
            branch_values.append(inner.value)
            branch_optimal.append(
                compact_form_residual(HermitianMatrix.outer(w), inner.Y, z, Z, Rs_hat, u.eps)
                <= opts.branch_tol * max(1.0, abs(v_star))
            )
        selected = _select(branch_values, opts.tie_tol)
        candidates.append(_Candidate(branches[selected], branch_values[selected], 'branch'))
        logger.debug(f"Branch values (R={decomposition.rank}): {branch_values}")

    selected_index = _select(branch_values, opts.tie_tol)

    certificate = check_certificates(W, Y, v_star, Rs_hat, R_hat, u)
    constructed = construct_rank_one_certificate(W, Y, A, Z, opts.certificate_psd_tol, opts.rank_tol)
    if constructed is not None:
        certificate.constructed_optimal = True
        if rank > 1:
            inner = solve_inner(constructed.outer(), Rs_hat, u.eps, opts.solver)
            candidates.append(_Candidate(constructed.w, inner.value, 'certificate'))

    plugin = plugin_beamformer(R_hat, Rs_hat, u.gamma)
    inner = solve_inner(plugin.outer(), Rs_hat, u.eps, opts.solver)
    candidates.append(_Candidate(plugin.w, inner.value, 'plugin'))

    best = candidates[_select([c.value for c in candidates], opts.tie_tol)]
    w = canonicalize(best.w, A)

    diagnostics = Algorithm1Diagnostics(
        relaxation_value=v_star,
        rank_of_W=rank,
        per_branch_values=branch_values,
        selected_index=selected_index,
        certificate=certificate,
        achieved_value=best.value,
        branch_optimal=branch_optimal,
        output_source=best.source,
        dual_eigen_value=dual_eigen_value(Z, A),
        borderline=borderline,
        solution=solution
    )
    logger.info(
        f"Robust beamformer: rank(W)={rank}, relaxation={v_star:.10g}, "
        f"achieved={best.value:.10g} ({best.source})"
    )
    return w, diagnostics
