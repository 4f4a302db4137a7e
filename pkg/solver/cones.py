"""Cone blocks for the primal-dual engine: Hermitian PSD and second-order cones.

Cone vectors are real. A Hermitian PSD block of order n is stored through an
isometric vectorization with n² real coordinates (diagonal, √2·Re and √2·Im of the
strict upper triangle) so that the Euclidean inner product equals Re tr(UV) and the
Euclidean norm equals the Frobenius norm. Scaling, Jordan products and step lengths
are computed on the complex matrices themselves: the Nesterov–Todd scaling of a
complex PSD block is built from complex Cholesky factors and an SVD, so the usual
embedding of an n×n Hermitian block as a 2n×2n real symmetric block is never formed.

A direction with non-finite entries has step length zero, which stops the engine at
its best iterate.
"""

import math
from typing import List, Sequence

import numpy as np
import scipy.linalg

SQRT2 = math.sqrt(2.0)

APPLY_MODES = ('W', 'Wt', 'Winv', 'Winvt')


class HermitianPacking:
    """Isometric packing between Hermitian n×n matrices and R^(n²)."""

    def __init__(self, n: int):
        self.n = n
        self.size = n * n
        self.rows, self.cols = np.triu_indices(n, 1)
        self.n_off = len(self.rows)
        self.diagonal = np.arange(n)

    def pack(self, matrices: np.ndarray) -> np.ndarray:
        """(n, n) -> (n²,) or (k, n, n) -> (n², k)."""
        single = matrices.ndim == 2
        mats = matrices[None] if single else matrices
        n, p = self.n, self.n_off
        out = np.empty((mats.shape[0], self.size))
        out[:, :n] = mats[:, self.diagonal, self.diagonal].real
        upper = 0.5 * (mats[:, self.rows, self.cols] + mats[:, self.cols, self.rows].conj())
        out[:, n:n + p] = SQRT2 * upper.real
        out[:, n + p:] = SQRT2 * upper.imag
        return out[0] if single else out.T

    def unpack(self, vectors: np.ndarray) -> np.ndarray:
        """(n²,) -> (n, n) or (n², k) -> (k, n, n)."""
        single = vectors.ndim == 1
        cols = vectors[None] if single else vectors.T
        n, p = self.n, self.n_off
        mats = np.zeros((cols.shape[0], n, n), dtype=np.complex128)
        mats[:, self.diagonal, self.diagonal] = cols[:, :n]
        upper = (cols[:, n:n + p] + 1j * cols[:, n + p:]) / SQRT2
        mats[:, self.rows, self.cols] = upper
        mats[:, self.cols, self.rows] = upper.conj()
        return mats[0] if single else mats

    def identity(self) -> np.ndarray:
        e = np.zeros(self.size)
        e[:self.n] = 1.0
        return e


def _psd_factor(matrix: np.ndarray) -> np.ndarray:
    """Lower factor L with L Lᴴ = matrix; eigen fallback when Cholesky breaks down."""
    try:
        return scipy.linalg.cholesky(matrix, lower=True)
    except np.linalg.LinAlgError:
        values, vectors = scipy.linalg.eigh(matrix)
        floor = np.finfo(float).eps * max(abs(values[-1]), np.finfo(float).tiny)
        return vectors * np.sqrt(np.clip(values, floor, None))


class PsdBlock:
    """Hermitian positive semidefinite cone of order n."""

    def __init__(self, n: int):
        self.packing = HermitianPacking(n)
        self.size = self.packing.size
        self.degree = n

    def identity(self) -> np.ndarray:
        return self.packing.identity()

    def jordan(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        U = self.packing.unpack(u)
        V = self.packing.unpack(v)
        return self.packing.pack(0.5 * (U @ V + V @ U))

    def is_interior(self, u: np.ndarray) -> bool:
        try:
            scipy.linalg.cholesky(self.packing.unpack(u), lower=True)
            return True
        except np.linalg.LinAlgError:
            return False

    def scaling(self, s: np.ndarray, z: np.ndarray) -> 'PsdScaling':
        return PsdScaling(self.packing, s, z)


class PsdScaling:
    """Nesterov–Todd scaling W(U) = Rᴴ U R with Rᴴ Z R = R⁻¹ S R⁻ᴴ = diag(λ)."""

    def __init__(self, packing: HermitianPacking, s: np.ndarray, z: np.ndarray):
        self.packing = packing
        ls = _psd_factor(packing.unpack(s))
        lz = _psd_factor(packing.unpack(z))
        u, lam, vh = scipy.linalg.svd(lz.conj().T @ ls)
        root = np.sqrt(lam)
        self.values = lam
        self.r = (ls @ vh.conj().T) / root
        self.r_inv = (u.conj().T @ lz.conj().T) / root[:, None]

        n = packing.n
        weights = np.empty(packing.size)
        weights[:n] = lam
        pair = 0.5 * (lam[packing.rows] + lam[packing.cols])
        weights[n:n + packing.n_off] = pair
        weights[n + packing.n_off:] = pair
        self._jordan_weights = weights

    @property
    def lam(self) -> np.ndarray:
        return self.packing.pack(np.diag(self.values).astype(np.complex128))

    def apply(self, u: np.ndarray, mode: str) -> np.ndarray:
        U = self.packing.unpack(u)
        if mode == 'W':
            out = self.r.conj().T @ U @ self.r
        elif mode == 'Wt':
            out = self.r @ U @ self.r.conj().T
        elif mode == 'Winv':
            out = self.r_inv.conj().T @ U @ self.r_inv
        else:
            out = self.r_inv @ U @ self.r_inv.conj().T
        return self.packing.pack(out)

    def inv_product(self, y: np.ndarray) -> np.ndarray:
        """Solve λ ∘ x = y for x (λ diagonal makes this entrywise)."""
        return y / self._jordan_weights

    def max_step(self, d: np.ndarray) -> float:
        if not np.all(np.isfinite(d)):
            return 0.0
        D = self.packing.unpack(d)
        root = np.sqrt(self.values)
        scaled = D / np.outer(root, root)
        smallest = scipy.linalg.eigvalsh(0.5 * (scaled + scaled.conj().T))[0]
        return -1.0 / smallest if smallest < 0.0 else math.inf


class SocBlock:
    """Second-order cone {(u0, u1): u0 ≥ ‖u1‖} of dimension m."""

    def __init__(self, m: int):
        self.size = m
        self.degree = 1

    def identity(self) -> np.ndarray:
        e = np.zeros(self.size)
        e[0] = 1.0
        return e

    def jordan(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        out = np.empty(self.size)
        out[0] = u @ v
        out[1:] = u[0] * v[1:] + v[0] * u[1:]
        return out

    def is_interior(self, u: np.ndarray) -> bool:
        return bool(u[0] > 0.0 and u[0] * u[0] - u[1:] @ u[1:] > 0.0)

    def scaling(self, s: np.ndarray, z: np.ndarray) -> 'SocScaling':
        return SocScaling(s, z)


def _lorentz(u: np.ndarray) -> float:
    """u0² − ‖u1‖² in factored form, accurate near the cone boundary."""
    tail = float(np.linalg.norm(u[1:]))
    return float((u[0] - tail) * (u[0] + tail))


class SocScaling:
    """Nesterov–Todd scaling W = β·W̄ with W̄ = [[w0, w1ᵀ], [w1, I + w1w1ᵀ/(1+w0)]]."""

    def __init__(self, s: np.ndarray, z: np.ndarray):
        s_norm = math.sqrt(max(_lorentz(s), np.finfo(float).tiny))
        z_norm = math.sqrt(max(_lorentz(z), np.finfo(float).tiny))
        s_bar = s / s_norm
        z_bar = z / z_norm
        gamma = math.sqrt(max(0.5 * (1.0 + s_bar @ z_bar), np.finfo(float).tiny))
        w = s_bar.copy()
        w[0] += z_bar[0]
        w[1:] -= z_bar[1:]
        w /= 2.0 * gamma
        self.w = w
        self.beta = math.sqrt(s_norm / z_norm)
        self._lam = self.apply(z, 'W')

    @property
    def lam(self) -> np.ndarray:
        return self._lam

    def _wbar(self, u: np.ndarray, reflect: bool) -> np.ndarray:
        w0, w1 = self.w[0], self.w[1:]
        single = u.ndim == 1
        cols = u[:, None] if single else u
        u0, u1 = cols[0], cols[1:]
        if reflect:
            u1 = -u1
        inner = w1 @ u1
        out = np.empty_like(cols)
        out[0] = w0 * u0 + inner
        out[1:] = u1 + np.outer(w1, u0 + inner / (1.0 + w0))
        if reflect:
            out[1:] = -out[1:]
        return out[:, 0] if single else out

    def apply(self, u: np.ndarray, mode: str) -> np.ndarray:
        if mode in ('W', 'Wt'):
            return self.beta * self._wbar(u, reflect=False)
        return self._wbar(u, reflect=True) / self.beta

    def inv_product(self, y: np.ndarray) -> np.ndarray:
        lam = self._lam
        det = _lorentz(lam)
        x = np.empty_like(y)
        x[0] = (lam[0] * y[0] - lam[1:] @ y[1:]) / det
        x[1:] = (y[1:] - x[0] * lam[1:]) / lam[0]
        return x

    def max_step(self, d: np.ndarray) -> float:
        if not np.all(np.isfinite(d)):
            return 0.0
        lam = self._lam
        a = _lorentz(d)
        b = float(lam[0] * d[0] - lam[1:] @ d[1:])
        c = _lorentz(lam)
        if a == 0.0:
            return -c / (2.0 * b) if b < 0.0 else math.inf
        disc = b * b - a * c
        if disc < 0.0:
            return math.inf
        q = -(b + math.copysign(math.sqrt(disc), b))
        roots = [q / a]
        if q != 0.0:
            roots.append(c / q)
        positive = [r for r in roots if r > 0.0]
        return min(positive) if positive else math.inf


class ProductCone:
    """Cartesian product of PSD and second-order cone blocks."""

    def __init__(self, blocks: Sequence):
        self.blocks: List = list(blocks)
        self.offsets = np.cumsum([0] + [b.size for b in self.blocks])
        self.size = int(self.offsets[-1])
        self.degree = sum(b.degree for b in self.blocks)

    def parts(self, u: np.ndarray):
        return [u[self.offsets[k]:self.offsets[k + 1]] for k in range(len(self.blocks))]

    def identity(self) -> np.ndarray:
        return np.concatenate([b.identity() for b in self.blocks])

    def jordan(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.concatenate([
            b.jordan(ub, vb) for b, ub, vb in zip(self.blocks, self.parts(u), self.parts(v))
        ])

    def is_interior(self, u: np.ndarray) -> bool:
        return all(b.is_interior(ub) for b, ub in zip(self.blocks, self.parts(u)))

    def scaling(self, s: np.ndarray, z: np.ndarray) -> 'ProductScaling':
        return ProductScaling(self, [
            b.scaling(sb, zb) for b, sb, zb in zip(self.blocks, self.parts(s), self.parts(z))
        ])


class ProductScaling:
    """Block-diagonal Nesterov–Todd scaling over a ProductCone."""

    def __init__(self, cone: ProductCone, scalings: List):
        self.cone = cone
        self.scalings = scalings
        self.lam = np.concatenate([sc.lam for sc in scalings])

    def apply(self, u: np.ndarray, mode: str) -> np.ndarray:
        if mode not in APPLY_MODES:
            raise ValueError(f"Unknown scaling mode: {mode}")
        return np.concatenate([
            sc.apply(ub, mode) for sc, ub in zip(self.scalings, self.cone.parts(u))
        ], axis=0)

    def inv_product(self, y: np.ndarray) -> np.ndarray:
        return np.concatenate([
            sc.inv_product(yb) for sc, yb in zip(self.scalings, self.cone.parts(y))
        ])

    def max_step(self, d: np.ndarray) -> float:
        return min(sc.max_step(db) for sc, db in zip(self.scalings, self.cone.parts(d)))
