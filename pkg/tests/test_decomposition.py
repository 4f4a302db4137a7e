"""Tests for numeric rank and the rank-one decomposition."""

import unittest

import numpy as np

from decomposition import DecompositionFailure, numeric_rank, rank_one_decompose
from linalg import HermitianMatrix, MatrixDomainError, frob_norm
from tests.fixtures.matrices import random_complex, random_hermitian, random_psd, rng_for


def assert_decomposition(test, result, X, A, B, tol=1e-7):
    """Check reconstruction and both equalized forms with independent arithmetic."""
    X, A, B = (np.asarray(m.data) for m in (X, A, B))
    stacked = np.column_stack(result.vectors)
    rank = result.rank
    test.assertEqual(len(result), rank)
    test.assertLessEqual(np.linalg.norm(stacked @ stacked.conj().T - X), tol * max(1.0, np.linalg.norm(X)))
    trace = float(np.trace(X).real)
    for M in (A, B):
        target = float(np.trace(M @ X).real) / rank
        scale = max(1.0, abs(target), np.linalg.norm(M) * trace / rank)
        for x in result.vectors:
            test.assertAlmostEqual(float((x.conj() @ M @ x).real), target, delta=tol * scale)


class TestNumericRank(unittest.TestCase):
    """Eigenvalue counting relative to λ₁."""

    def test_identity(self):
        self.assertEqual(numeric_rank(HermitianMatrix.identity(4), 1e-6), 4)

    def test_outer_product(self):
        w = random_complex(rng_for(1), 5)
        self.assertEqual(numeric_rank(HermitianMatrix.outer(w), 1e-6), 1)

    def test_tiny_eigenvalue_below_threshold(self):
        self.assertEqual(numeric_rank(HermitianMatrix.diag([1.0, 1e-12]), 1e-6), 1)

    def test_zero_matrix(self):
        self.assertEqual(numeric_rank(HermitianMatrix.zeros(3)), 0)

    def test_indefinite_rejected(self):
        with self.assertRaises(MatrixDomainError):
            numeric_rank(HermitianMatrix.diag([1.0, -1.0]))


class TestRankOneDecompose(unittest.TestCase):
    """D(X, A, B) post-conditions."""

    def test_rank_one_returns_scaled_generator(self):
        """X = vvᴴ yields v itself up to phase."""
        rng = rng_for(2)
        v = random_complex(rng, 4)
        result = rank_one_decompose(HermitianMatrix.outer(v), random_hermitian(rng, 4), random_hermitian(rng, 4))
        self.assertEqual(result.rank, 1)
        x = result.vectors[0]
        self.assertAlmostEqual(abs(np.vdot(x, v)), np.linalg.norm(v) ** 2, delta=1e-9 * np.linalg.norm(v) ** 2)

    def test_identity_with_indefinite_form(self):
        """X = I₂, A = diag(1, −1), B = I₂ gives two vectors with xᴴAx = 0 and xᴴBx = 1."""
        X = HermitianMatrix.identity(2)
        A = HermitianMatrix.diag([1.0, -1.0])
        B = HermitianMatrix.identity(2)
        result = rank_one_decompose(X, A, B)
        self.assertEqual(result.rank, 2)
        for x in result.vectors:
            self.assertAlmostEqual(float((x.conj() @ A.data @ x).real), 0.0, delta=1e-9)
            self.assertAlmostEqual(float(np.vdot(x, x).real), 1.0, delta=1e-9)
            self.assertAlmostEqual(abs(x[0]), abs(x[1]), delta=1e-9)
        assert_decomposition(self, result, X, A, B)

    def test_identity_forms(self):
        """A = B = I accepts any orthonormal basis."""
        eye = HermitianMatrix.identity(5)
        result = rank_one_decompose(eye, eye, eye)
        self.assertEqual(result.rank, 5)
        self.assertEqual(result.updates, 0)
        assert_decomposition(self, result, eye, eye, eye)

    def test_random_instances(self):
        """200 random instances with N ≤ 10 and every rank."""
        rng = rng_for(3)
        for k in range(200):
            n = 1 + k % 10
            rank = 1 + (k // 10) % n
            X = random_psd(rng, n, rank)
            A = random_hermitian(rng, n)
            B = random_hermitian(rng, n)
            result = rank_one_decompose(X, A, B)
            self.assertEqual(result.rank, numeric_rank(X, 1e-9))
            self.assertLessEqual(result.updates, 4 * result.rank)
            assert_decomposition(self, result, X, A, B)

    def test_positive_definite_forms_like_the_beamformer(self):
        """A = R̂ + γI and a PSD B as used by the beamformer."""
        rng = rng_for(4)
        for n in (3, 6, 10):
            X = random_psd(rng, n, 3)
            A = random_psd(rng, n) + HermitianMatrix.identity(n)
            B = random_psd(rng, n, 2)
            assert_decomposition(self, rank_one_decompose(X, A, B), X, A, B)

    def test_phase_convention(self):
        """First non-negligible entry of each vector is real and nonnegative."""
        rng = rng_for(5)
        result = rank_one_decompose(random_psd(rng, 6, 4), random_hermitian(rng, 6), random_hermitian(rng, 6))
        for x in result.vectors:
            first = int(np.argmax(np.abs(x) > 1e-12 * np.max(np.abs(x))))
            self.assertEqual(x[first].imag, 0.0)
            self.assertGreaterEqual(x[first].real, 0.0)

    def test_deterministic(self):
        rng = rng_for(6)
        X, A, B = random_psd(rng, 5, 3), random_hermitian(rng, 5), random_hermitian(rng, 5)
        first, second = rank_one_decompose(X, A, B), rank_one_decompose(X, A, B)
        for x, y in zip(first, second):
            self.assertTrue(np.array_equal(x, y))

    def test_matrix_reassembly(self):
        rng = rng_for(7)
        X = random_psd(rng, 4, 2)
        result = rank_one_decompose(X, random_hermitian(rng, 4), random_hermitian(rng, 4))
        self.assertLessEqual(np.linalg.norm(result.matrix() - X.data), 1e-8 * max(1.0, frob_norm(X)))

    def test_zero_matrix_rejected(self):
        eye = HermitianMatrix.identity(2)
        with self.assertRaises(MatrixDomainError):
            rank_one_decompose(HermitianMatrix.zeros(2), eye, eye)

    def test_dimension_mismatch_rejected(self):
        with self.assertRaises(MatrixDomainError):
            rank_one_decompose(HermitianMatrix.identity(2), HermitianMatrix.identity(3), HermitianMatrix.identity(2))

    def test_failure_reports_residuals(self):
        err = DecompositionFailure('stalled', {'a_form': 1e-3})
        self.assertIn('a_form=1.00e-03', str(err))


if __name__ == '__main__':
    unittest.main()
