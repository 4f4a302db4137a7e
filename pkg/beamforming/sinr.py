"""SINR evaluation: nominal, optimal, worst-case and the plug-in baseline."""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from linalg import (
    HermitianMatrix, MatrixDomainError, as_hermitian, eig_hermitian, inv_sqrt_pd
)
from solver import SolverOptions, solve_inner
from .models import BeamWeights, UncertaintyModel, canonicalize

logger = logging.getLogger(__name__)


def _vector(w) -> np.ndarray:
    if isinstance(w, BeamWeights):
        return w.w
    return BeamWeights(w).w


def loaded_covariance(R_hat, gamma: float) -> HermitianMatrix:
    """Worst-case interference-plus-noise covariance R̂ + γI."""
    R = as_hermitian(R_hat)
    return R + gamma * HermitianMatrix.identity(R.dim)


def output_sinr(w, R_s, R_in) -> float:
    """
    wᴴR_s w / wᴴR_in w.

    Raises:
        MatrixDomainError: If wᴴR_in w ≤ 0
    """
    vector = _vector(w)
    denominator = as_hermitian(R_in).quad(vector)
    if denominator <= 0.0:
        raise MatrixDomainError('output_sinr', f"wᴴR_in w = {denominator:.3e} is not positive")
    return as_hermitian(R_s).quad(vector) / denominator


def optimal_sinr(R_s, R_in) -> Tuple[float, BeamWeights]:
    """
    Maximum SINR and its beamvector.

    The value is λ_max(R_in^(−1/2) R_s R_in^(−1/2)); the vector is R_in^(−1/2) times
    the principal eigenvector, canonicalized against R_in.

    Raises:
        MatrixDomainError: If R_in is singular or indefinite
    """
    root = inv_sqrt_pd(R_in).data
    whitened = eig_hermitian(root @ as_hermitian(R_s).data @ root)
    w = canonicalize(root @ whitened.vector(0), R_in)
    return whitened.largest, w


def plugin_beamformer(R_hat, Rs_hat, gamma: float) -> BeamWeights:
    """Non-robust baseline: principal generalized eigenvector of (R̂_s, R̂ + γI)."""
    return optimal_sinr(Rs_hat, loaded_covariance(R_hat, gamma))[1]


def worst_case_numerator(w, Rs_hat, eps: float, opts: Optional[SolverOptions] = None) -> float:
    """Minimum of wᴴ(R̂_s + Δ₂)w over the signal uncertainty ball; never negative."""
    vector = _vector(w)
    value = solve_inner(HermitianMatrix.outer(vector), Rs_hat, eps, opts).value
    return max(0.0, value)


def worst_case_denominator(w, R_hat, gamma: float) -> float:
    """wᴴR̂w + γ‖w‖², attained by Δ₁ = γwwᴴ/‖w‖²."""
    vector = _vector(w)
    return as_hermitian(R_hat).quad(vector) + gamma * float(np.vdot(vector, vector).real)


def worst_case_sinr(w, R_hat, Rs_hat, u: UncertaintyModel,
                    opts: Optional[SolverOptions] = None) -> float:
    """Worst-case SINR of w over both uncertainty sets."""
    return worst_case_numerator(w, Rs_hat, u.eps, opts) / worst_case_denominator(w, R_hat, u.gamma)


def maximin_objective(w, R_hat, Rs_hat, u: UncertaintyModel,
                      opts: Optional[SolverOptions] = None) -> Tuple[float, BeamWeights]:
    """
    Objective of the unit-denominator maximin form at w/‖(R̂ + γI)^(1/2) w‖.

    Returns:
        (objective value, normalized vector); the value equals worst_case_sinr(w)
    """
    vector = _vector(w)
    scale = math.sqrt(loaded_covariance(R_hat, u.gamma).quad(vector))
    normalized = BeamWeights(vector / scale)
    return worst_case_numerator(normalized, Rs_hat, u.eps, opts), normalized


def sinr_db(value: float) -> float:
    """10·log10 of a linear SINR; −inf for zero."""
    return 10.0 * math.log10(value) if value > 0.0 else -math.inf
