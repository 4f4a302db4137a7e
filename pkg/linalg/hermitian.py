"""Dense complex-Hermitian matrices, Jacobi eigendecomposition and PSD helpers."""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import MatrixInputError, MatrixDomainError

logger = logging.getLogger(__name__)

# Pre-symmetrization asymmetry allowed at construction (relative to max entry).
ASYMMETRY_TOL = 1e-8
DEFAULT_PSD_TOL = 1e-9

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-14
JACOBI_SKIP_TOL = 1e-17

# Relative modulus below which an entry is treated as zero for phase conventions.
PHASE_ZERO_TOL = 1e-12


class HermitianMatrix:
    """Immutable N×N complex Hermitian matrix.

    Entries are validated on construction: the input must be square, finite and
    Hermitian up to ASYMMETRY_TOL (relative). The stored array is the symmetrized
    (M + Mᴴ)/2 and is read-only.
    """

    __slots__ = ('_data',)

    def __init__(self, entries):
        data = np.array(entries, dtype=np.complex128)
        if data.ndim == 0:
            data = data.reshape(1, 1)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] < 1:
            raise MatrixInputError('shape', data.shape, 'expected a non-empty square matrix')
        if not np.all(np.isfinite(data)):
            raise MatrixInputError('entries', 'non-finite', 'matrix contains NaN or infinite entries')

        scale = max(1.0, float(np.max(np.abs(data))))
        asymmetry = float(np.max(np.abs(data - data.conj().T)))
        if asymmetry > ASYMMETRY_TOL * scale:
            raise MatrixInputError(
                'entries', f"{asymmetry:.3e}",
                f"matrix is not Hermitian (asymmetry exceeds {ASYMMETRY_TOL:g} relative)"
            )

        data = 0.5 * (data + data.conj().T)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def identity(cls, n: int) -> 'HermitianMatrix':
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, n: int) -> 'HermitianMatrix':
        return cls(np.zeros((n, n)))

    @classmethod
    def diag(cls, values) -> 'HermitianMatrix':
        return cls(np.diag(np.asarray(values, dtype=float)))

    @classmethod
    def outer(cls, vector) -> 'HermitianMatrix':
        """Rank-one Gram matrix v vᴴ."""
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        return cls(np.outer(v, v.conj()))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def trace(self) -> float:
        return float(np.trace(self._data).real)

    def quad(self, vector) -> float:
        """Real quadratic form vᴴ M v."""
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        return float(np.vdot(v, self._data @ v).real)

    def inner(self, other) -> float:
        """Real inner product tr(M·other) for Hermitian operands."""
        return float(np.sum(self._data * as_array(other).T).real)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    def __add__(self, other):
        return HermitianMatrix(self._data + as_array(other))

    def __sub__(self, other):
        return HermitianMatrix(self._data - as_array(other))

    def __neg__(self):
        return HermitianMatrix(-self._data)

    def __mul__(self, scalar):
        if not np.isreal(scalar):
            raise MatrixInputError('scalar', scalar, 'only real scaling preserves Hermitian structure')
        return HermitianMatrix(self._data * float(np.real(scalar)))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


MatrixLike = Union[HermitianMatrix, np.ndarray, list]


def as_array(matrix: MatrixLike) -> np.ndarray:
    """Plain complex array view of a HermitianMatrix or array-like."""
    if isinstance(matrix, HermitianMatrix):
        return matrix.data
    return np.asarray(matrix, dtype=np.complex128)


def as_hermitian(matrix: MatrixLike) -> HermitianMatrix:
    if isinstance(matrix, HermitianMatrix):
        return matrix
    return HermitianMatrix(matrix)


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns."""
    values: np.ndarray
    vectors: np.ndarray

    @property
    def largest(self) -> float:
        return float(self.values[0])

    @property
    def smallest(self) -> float:
        return float(self.values[-1])

    def vector(self, k: int) -> np.ndarray:
        return self.vectors[:, k]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def canonical_phase(vector: np.ndarray, tol: float = PHASE_ZERO_TOL) -> np.ndarray:
    """Rotate a vector so its first non-negligible entry is real and nonnegative."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    magnitudes = np.abs(v)
    peak = float(np.max(magnitudes)) if v.size else 0.0
    if peak == 0.0:
        return v.copy()
    first = int(np.argmax(magnitudes > tol * peak))
    rotated = v * (np.conj(v[first]) / magnitudes[first])
    rotated[first] = magnitudes[first]
    return rotated


def _jacobi(a: np.ndarray):
    """Cyclic complex Jacobi sweeps over row-major (p, q) pairs.

    Each rotation first removes the phase of a[p, q] and then applies the real
    symmetric Jacobi rotation with the smaller rotation angle.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return a.diagonal().real.copy(), v, 0

    sweeps = 0
    for sweeps in range(1, JACOBI_MAX_SWEEPS + 1):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= JACOBI_OFF_TOL * scale:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= JACOBI_SKIP_TOL * scale:
                    continue
                phase = np.conj(apq) / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * phase, c * phase]], dtype=np.complex128)

                pair = [p, q]
                a[:, pair] = a[:, pair] @ rot
                a[pair, :] = rot.conj().T @ a[pair, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, pair] = v[:, pair] @ rot
    else:
        logger.warning(f"Jacobi eigensolver stopped after {JACOBI_MAX_SWEEPS} sweeps (n={n})")

    return a.diagonal().real.copy(), v, sweeps


def eig_hermitian(matrix: MatrixLike) -> EigenPair:
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Args:
        matrix: Hermitian matrix (HermitianMatrix or array-like)

    Returns:
        EigenPair with values sorted descending; ties keep index order.

    Raises:
        MatrixInputError: If the input is not square, finite and Hermitian
    """
    m = as_hermitian(matrix)
    values, vectors, sweeps = _jacobi(np.array(m.data, dtype=np.complex128))
    logger.debug(f"Jacobi converged in {sweeps} sweeps for n={m.dim}")

    order = np.argsort(-values, kind='stable')
    values = values[order]
    vectors = vectors[:, order]
    for k in range(vectors.shape[1]):
        vectors[:, k] = canonical_phase(vectors[:, k])

    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenPair(values=values, vectors=vectors)


def is_psd(matrix: MatrixLike, tol: float = DEFAULT_PSD_TOL) -> bool:
    """True iff λ_min ≥ −tol·max(1, spectral radius)."""
    if tol < 0:
        raise MatrixInputError('tol', tol, 'tolerance must be nonnegative')
    values = eig_hermitian(matrix).values
    radius = max(abs(values[0]), abs(values[-1]))
    return bool(values[-1] >= -tol * max(1.0, radius))


def sqrt_psd(matrix: MatrixLike, tol: float = DEFAULT_PSD_TOL) -> HermitianMatrix:
    """
    Principal square root of a PSD matrix.

    Raises:
        MatrixDomainError: If the matrix is not PSD at the given tolerance
    """
    pair = eig_hermitian(matrix)
    radius = max(abs(pair.values[0]), abs(pair.values[-1]))
    if pair.values[-1] < -tol * max(1.0, radius):
        raise MatrixDomainError(
            'sqrt_psd', f"matrix is not PSD (smallest eigenvalue {pair.values[-1]:.3e})"
        )
    roots = np.sqrt(np.clip(pair.values, 0.0, None))
    return HermitianMatrix((pair.vectors * roots) @ pair.vectors.conj().T)


def inv_sqrt_pd(matrix: MatrixLike, rcond: float = 1e-13) -> HermitianMatrix:
    """
    Inverse principal square root of a positive definite matrix.

    Raises:
        MatrixDomainError: If the matrix is singular or indefinite
    """
    pair = eig_hermitian(matrix)
    if pair.values[-1] <= rcond * max(abs(pair.values[0]), np.finfo(float).tiny):
        raise MatrixDomainError(
            'inv_sqrt_pd', f"matrix is not positive definite (smallest eigenvalue {pair.values[-1]:.3e})"
        )
    inv_roots = 1.0 / np.sqrt(pair.values)
    return HermitianMatrix((pair.vectors * inv_roots) @ pair.vectors.conj().T)


def frob_norm(matrix: MatrixLike) -> float:
    return float(np.linalg.norm(as_array(matrix)))
