"""Rank-one decomposition D(X, A, B) of a PSD matrix with two equalized forms.

Given X ⪰ 0 of rank R and Hermitian A, B, find x_1..x_R with

    Σ x_r x_rᴴ = X,   x_rᴴ A x_r = tr(AX)/R,   x_rᴴ B x_r = tr(BX)/R.

Writing X = V Vᴴ, the problem becomes finding a unitary Q whose columns q satisfy
qᴴ C q = 0 for the trace-free complex matrix C = (VᴴAV − a I) + i (VᴴBV − b I).
The numerical range of C is convex and contains its mean eigenvalue 0, so a unit
vector u with uᴴ C u = 0 can always be found inside the span of two or three basis
vectors; completing u to a unitary basis deflates the problem by one dimension.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from linalg import MatrixDomainError, as_hermitian, eig_hermitian, is_psd, canonical_phase
from .errors import DecompositionFailure
from .models import DecompositionResult

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_RANK_TOL = 1e-9

# Relative size below which a diagonal entry of C counts as already equalized.
ZERO_DIAGONAL_TOL = 1e-13
# Relative cross product below which two diagonal entries count as collinear with 0.
COLLINEAR_TOL = 1e-10


def numeric_rank(X, rel_tol: float = 1e-6) -> int:
    """
    Count eigenvalues above rel_tol · λ₁(X).

    Raises:
        MatrixDomainError: If X is not PSD within the default tolerance
    """
    matrix = as_hermitian(X)
    if not is_psd(matrix):
        raise MatrixDomainError('numeric_rank', 'matrix is not positive semidefinite')
    values = eig_hermitian(matrix).values
    top = float(values[0])
    if top <= 0.0:
        return 0
    return int(np.sum(values > rel_tol * top))


def _complete_unitary(u: np.ndarray) -> np.ndarray:
    """Unitary matrix whose first column is u."""
    m = u.size
    u = u / np.linalg.norm(u)
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(m, dtype=np.complex128)]))
    q = q[:, :m].copy()
    # the first QR column equals u up to a unit phase
    q[:, 0] = u
    return q


def _zero_of_pair(m: np.ndarray, target: complex) -> np.ndarray:
    """
    Unit u ∈ C² with uᴴ M u = target, for target on the segment [m11, m22].

    Uses u = (1, t e^{iφ}) / √(1 + t²): φ makes the linear coefficient real relative
    to m11 and t is the root of smallest modulus of the resulting real quadratic.
    """
    m11 = m[0, 0] - target
    m22 = m[1, 1] - target
    scale = max(abs(m11), abs(m22), abs(m[0, 1]), abs(m[1, 0]), np.finfo(float).tiny)
    if abs(m11) <= ZERO_DIAGONAL_TOL * scale:
        return np.array([1.0, 0.0], dtype=np.complex128)
    if abs(m22) <= ZERO_DIAGONAL_TOL * scale:
        return np.array([0.0, 1.0], dtype=np.complex128)

    norm11 = abs(m11) ** 2
    alpha = m[0, 1] * np.conj(m11)
    beta = m[1, 0] * np.conj(m11)
    phi = math.atan2(-(alpha.imag + beta.imag), alpha.real - beta.real)
    kappa = max(0.0, -float((m22 * np.conj(m11)).real) / norm11)

    g = np.exp(1j * phi) * m[0, 1] + np.exp(-1j * phi) * m[1, 0]
    rho = float((g * np.conj(m11)).real) / norm11
    if rho > 0.0:
        phi += math.pi
        rho = -rho
    denom = abs(rho) + math.sqrt(rho * rho + 4.0 * kappa)
    if denom <= 0.0:
        return np.array([0.0, 1.0], dtype=np.complex128)
    t = 2.0 / denom
    return np.array([1.0, t * np.exp(1j * phi)], dtype=np.complex128) / math.sqrt(1.0 + t * t)


def _pick_support(d: np.ndarray) -> Tuple[Tuple[int, ...], Optional[np.ndarray]]:
    """
    Choose two or three diagonal entries whose convex hull contains 0.

    Returns the index tuple and its barycentric weights (None for an exact zero).
    Candidates are ranked by their smallest barycentric weight; when roundoff leaves
    no candidate containing 0, the best-conditioned one is used anyway and the
    repair sweep absorbs the error.
    """
    m = d.size
    scale = float(np.max(np.abs(d)))
    small = int(np.argmin(np.abs(d)))
    if abs(d[small]) <= ZERO_DIAGONAL_TOL * max(scale, np.finfo(float).tiny):
        return (small,), None

    best: Tuple[Tuple[int, ...], Optional[np.ndarray]] = ((), None)
    best_score = -math.inf
    for i in range(m):
        for j in range(i + 1, m):
            di, dj = d[i], d[j]
            cross = float((di * np.conj(dj)).imag)
            if abs(cross) > COLLINEAR_TOL * abs(di) * abs(dj):
                continue
            if float((di * np.conj(dj)).real) >= 0.0:
                continue
            weights = np.array([abs(dj), abs(di)]) / (abs(di) + abs(dj))
            score = float(weights.min())
            if score > best_score:
                best_score, best = score, ((i, j), weights)

    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                pts = d[[i, j, k]]
                system = np.vstack([pts.real, pts.imag, np.ones(3)])
                det = float(np.linalg.det(system))
                if abs(det) <= COLLINEAR_TOL * scale * scale:
                    continue
                weights = np.linalg.solve(system, np.array([0.0, 0.0, 1.0]))
                score = float(weights.min())
                if score > best_score:
                    best_score, best = score, ((i, j, k), weights)

    if not best[0]:
        # all entries collinear and on one side of 0 only through roundoff
        order = np.argsort(np.abs(d))
        i, j = int(order[0]), int(order[-1])
        return (i, j), np.array([0.5, 0.5])
    if best_score < 0.0:
        logger.debug(f"No exact support found for zero (best weight {best_score:.2e})")
    return best


def _isotropic_vector(C: np.ndarray) -> np.ndarray:
    """Unit u with uᴴ C u = 0 for a trace-free C of order ≥ 2."""
    m = C.shape[0]
    d = C.diagonal().copy()
    support, weights = _pick_support(d)
    u = np.zeros(m, dtype=np.complex128)

    if len(support) == 1:
        u[support[0]] = 1.0
        return u

    if len(support) == 2:
        i, j = support
        pair = _zero_of_pair(C[np.ix_([i, j], [i, j])], 0.0)
        u[i], u[j] = pair
        return u

    i, j, k = support
    _, wj, wk = weights
    pk = wj + wk
    p_star = (wj * d[j] + wk * d[k]) / pk if pk > 0.0 else d[j]
    inner = _zero_of_pair(C[np.ix_([j, k], [j, k])], p_star)
    v = np.zeros(m, dtype=np.complex128)
    v[j], v[k] = inner

    ei = np.zeros(m, dtype=np.complex128)
    ei[i] = 1.0
    basis = np.column_stack([ei, v])
    outer = _zero_of_pair(basis.conj().T @ C @ basis, 0.0)
    return basis @ outer


def _deflate(C: np.ndarray) -> Tuple[np.ndarray, int]:
    """Unitary Q with (Qᴴ C Q)_rr ≈ 0 for every r; returns Q and the update count."""
    m = C.shape[0]
    Q = np.eye(m, dtype=np.complex128)
    updates = 0
    for fixed in range(m - 1):
        tail = Q[:, fixed:]
        sub = tail.conj().T @ C @ tail
        u = _isotropic_vector(sub)
        Q[:, fixed:] = tail @ _complete_unitary(u)
        updates += 1
    return Q, updates


def _form_residuals(vectors: np.ndarray, X: np.ndarray, A: np.ndarray, B: np.ndarray,
                    a: float, b: float, rank: int) -> dict:
    x_norm = float(np.linalg.norm(X))
    a_forms = np.einsum('ir,ij,jr->r', vectors.conj(), A, vectors).real
    b_forms = np.einsum('ir,ij,jr->r', vectors.conj(), B, vectors).real
    trace = float(np.trace(X).real)
    a_scale = max(1.0, abs(a), float(np.linalg.norm(A)) * trace / rank)
    b_scale = max(1.0, abs(b), float(np.linalg.norm(B)) * trace / rank)
    rebuilt = vectors @ vectors.conj().T
    return {
        'reconstruction': float(np.linalg.norm(rebuilt - X)) / max(1.0, x_norm),
        'a_form': float(np.max(np.abs(a_forms - a))) / a_scale,
        'b_form': float(np.max(np.abs(b_forms - b))) / b_scale
    }


def rank_one_decompose(X, A, B, tol: float = DEFAULT_TOL,
                       rank_tol: float = DEFAULT_RANK_TOL) -> DecompositionResult:
    """
    Decompose X = Σ_r x_r x_rᴴ with x_rᴴ A x_r = tr(AX)/R and x_rᴴ B x_r = tr(BX)/R.

    Args:
        X: PSD matrix; its rank R is counted with rank_tol relative to λ₁(X)
        A, B: Hermitian matrices of the same order
        tol: Relative tolerance for the two quadratic-form equalities
        rank_tol: Relative eigenvalue threshold defining R

    Returns:
        DecompositionResult with R vectors in canonical phase

    Raises:
        MatrixDomainError: If X is not PSD or is zero
        DecompositionFailure: If the forms cannot be equalized within 4R updates
    """
    Xh, Ah, Bh = as_hermitian(X), as_hermitian(A), as_hermitian(B)
    if not (Xh.dim == Ah.dim == Bh.dim):
        raise MatrixDomainError(
            'rank_one_decompose', f"dimension mismatch: X {Xh.dim}, A {Ah.dim}, B {Bh.dim}"
        )
    rank = numeric_rank(Xh, rank_tol)
    if rank == 0:
        raise MatrixDomainError('rank_one_decompose', 'matrix X is zero')

    pair = eig_hermitian(Xh)
    V = pair.vectors[:, :rank] * np.sqrt(pair.values[:rank])
    X_r = V @ V.conj().T
    A_mat, B_mat = Ah.data, Bh.data
    a = float(np.trace(A_mat @ X_r).real) / rank
    b = float(np.trace(B_mat @ X_r).real) / rank

    if rank == 1:
        vectors = V.copy()
        residuals = _form_residuals(vectors, Xh.data, A_mat, B_mat, a, b, rank)
        return DecompositionResult([canonical_phase(V[:, 0])], 1, residuals, 0)

    VA = V.conj().T @ A_mat @ V
    VB = V.conj().T @ B_mat @ V
    C = (VA - a * np.eye(rank)) + 1j * (VB - b * np.eye(rank))

    Q = np.eye(rank, dtype=np.complex128)
    updates = 0
    cap = 4 * rank
    while True:
        vectors = V @ Q
        residuals = _form_residuals(vectors, Xh.data, A_mat, B_mat, a, b, rank)
        if max(residuals['a_form'], residuals['b_form']) <= tol:
            break
        if updates >= cap:
            raise DecompositionFailure(
                message=f"forms not equalized after {updates} updates (rank {rank})",
                residuals=residuals
            )
        step, count = _deflate(Q.conj().T @ C @ Q)
        Q = Q @ step
        updates += count
        logger.debug(f"Decomposition sweep: rank={rank}, updates={updates}")

    logger.debug(
        f"Rank-one decomposition of rank {rank} in {updates} updates "
        f"(a_form={residuals['a_form']:.1e}, b_form={residuals['b_form']:.1e})"
    )
    return DecompositionResult(
        vectors=[canonical_phase(vectors[:, r]) for r in range(rank)],
        rank=rank,
        residuals=residuals,
        updates=updates
    )
