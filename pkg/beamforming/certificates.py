"""Sufficient conditions for a rank-one optimal solution of the LMI relaxation.

All three conditions bound tr(W − Y) (or tr(Y)) from the trace-norm criterion: a
Hermitian X with √(N−1)‖X‖ ≤ tr(X) is PSD, so a decomposition vector w of W with
wᴴw = tr(W) and wᴴAw = 1 keeps wwᴴ − Y ⪰ 0 and (wwᴴ, Y) stays optimal.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from decomposition import numeric_rank, rank_one_decompose
from linalg import HermitianMatrix, as_hermitian, eig_hermitian, frob_norm, is_psd
from .models import BeamWeights, CertificateReport, UncertaintyModel

logger = logging.getLogger(__name__)

RANK_ONE_TOL = 1e-6
CONSTRUCTION_PSD_TOL = 1e-7
# Relative slack on each certificate inequality.
INEQUALITY_SLACK = 1e-9


def trace_norm_premise(X) -> bool:
    """√(N−1)‖X‖ ≤ tr(X); any Hermitian X satisfying it is PSD."""
    matrix = as_hermitian(X)
    return math.sqrt(matrix.dim - 1) * frob_norm(matrix) <= matrix.trace()


def qmi_holds(w, Y, tol: float = CONSTRUCTION_PSD_TOL) -> bool:
    """wwᴴ − Y ⪰ 0, with tol relative to the larger of ‖w‖² and ‖Y‖."""
    vector = np.asarray(w.w if isinstance(w, BeamWeights) else w, dtype=np.complex128)
    Y = as_hermitian(Y)
    scale = max(float(np.vdot(vector, vector).real), frob_norm(Y), np.finfo(float).tiny)
    return is_psd((HermitianMatrix.outer(vector) - Y) * (1.0 / scale), tol)


def _holds(lhs: float, rhs: float) -> bool:
    return lhs >= rhs - INEQUALITY_SLACK * max(1.0, abs(lhs), abs(rhs))


def check_certificates(W, Y, v_star: float, Rs_hat, R_hat, u: UncertaintyModel) -> CertificateReport:
    """
    Evaluate both sides of the three sufficient conditions at a relaxation solution.

    Args:
        W, Y: Optimal primal blocks of the relaxation
        v_star: Optimal relaxation value
        Rs_hat, R_hat: Presumed signal and sample covariances
        u: Uncertainty radii

    Returns:
        CertificateReport; not applicable when v_star ≤ 0
    """
    W, Y = as_hermitian(W), as_hermitian(Y)
    n = W.dim
    root = math.sqrt(n - 1)
    lam_s = eig_hermitian(Rs_hat).largest
    r_values = eig_hermitian(R_hat).values
    lam_1, lam_n = float(r_values[0]), float(r_values[-1])

    tr_w = W.trace()
    tr_y = Y.trace()
    gap = tr_w - tr_y
    factor = 1.0 + lam_s / u.eps

    thm42_rhs = tr_w * root * factor
    cor43_rhs = 1.0 / (u.gamma + lam_1) - root / (u.gamma + lam_n) * factor
    cor44_rhs = tr_w * root * (factor - v_star / (u.eps * tr_w)) if tr_w > 0.0 else math.inf

    values = {
        'thm42_lhs': gap,
        'thm42_rhs': thm42_rhs,
        'cor43_lhs': tr_y,
        'cor43_rhs': cor43_rhs,
        'cor44_lhs': gap,
        'cor44_rhs': cor44_rhs,
        'relaxation_value': float(v_star)
    }
    report = CertificateReport(
        rank_one_at_solver=numeric_rank(W, RANK_ONE_TOL) == 1,
        thm42_holds=_holds(gap, thm42_rhs),
        cor43_holds=_holds(cor43_rhs, tr_y),
        cor44_holds=_holds(gap, cor44_rhs),
        applicable=v_star > 0.0,
        lhs_rhs_values=values
    )
    if not report.applicable:
        logger.debug(f"Certificates not applicable: relaxation value {v_star:.3e} is not positive")
    return report


def construct_rank_one_certificate(W, Y, A, Z, psd_tol: float = CONSTRUCTION_PSD_TOL,
                                   rank_tol: float = RANK_ONE_TOL) -> Optional[BeamWeights]:
    """
    Look for a decomposition vector w of W with wᴴAw = 1 and wwᴴ − Y ⪰ 0.

    Candidates come from D(W, A, I), scaled by √R so that wᴴw = tr(W), and then from
    D(W, A, Z), whose vectors also keep tr(wwᴴZ) = tr(WZ).

    Returns:
        The first compliant vector, or None when every candidate violates wwᴴ − Y ⪰ 0

    Raises:
        DecompositionFailure: If a decomposition does not converge
    """
    W, Y, A, Z = (as_hermitian(m) for m in (W, Y, A, Z))
    truncated, rank = truncate_to_rank(W, A, rank_tol)
    scale = math.sqrt(rank)

    for B in (HermitianMatrix.identity(W.dim), Z):
        result = rank_one_decompose(truncated, A, B)
        for index, x in enumerate(result.vectors):
            w = scale * x
            if qmi_holds(w, Y, psd_tol):
                logger.debug(f"Rank-one certificate found from vector {index} of {rank}")
                return BeamWeights(w)
    return None


def truncate_to_rank(W, A, rank_tol: float = RANK_ONE_TOL) -> Tuple[HermitianMatrix, int]:
    """Drop eigenvalues below rank_tol·λ₁ and rescale so tr(AW) = 1; returns (W, rank)."""
    A = as_hermitian(A)
    pair = eig_hermitian(W)
    keep = pair.values > rank_tol * pair.largest
    vectors = pair.vectors[:, keep]
    trimmed = (vectors * pair.values[keep]) @ vectors.conj().T
    weight = float(np.trace(A.data @ trimmed).real)
    return HermitianMatrix(trimmed / weight), int(np.sum(keep))
