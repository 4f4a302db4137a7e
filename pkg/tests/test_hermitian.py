"""Tests for the Hermitian linear algebra layer."""

import math
import unittest

import numpy as np

from linalg import (
    HermitianMatrix, MatrixDomainError, MatrixInputError, canonical_phase, eig_hermitian,
    frob_norm, inv_sqrt_pd, is_psd, sqrt_psd
)
from scenario import AngularDensity, ArrayGeometry, scattered_covariance
from tests.fixtures.matrices import random_hermitian, random_psd, rng_for, random_complex


class TestHermitianMatrix(unittest.TestCase):
    """Construction, validation and arithmetic."""

    def test_symmetrizes_small_asymmetry(self):
        """Entries within the asymmetry tolerance are averaged with their conjugates."""
        m = HermitianMatrix([[1.0, 2.0 + 1e-10], [2.0, 1.0]])
        self.assertEqual(m.data[0, 1], m.data[1, 0].conjugate())

    def test_rejects_asymmetric_input(self):
        """A clearly non-Hermitian matrix is an input error."""
        with self.assertRaises(MatrixInputError):
            HermitianMatrix([[1.0, 1.0], [0.0, 1.0]])

    def test_rejects_non_finite_and_non_square(self):
        """NaN entries and rectangular shapes are rejected."""
        with self.assertRaises(MatrixInputError):
            HermitianMatrix([[float('nan')]])
        with self.assertRaises(MatrixInputError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_data_is_read_only(self):
        """Stored arrays cannot be modified in place."""
        m = HermitianMatrix.identity(3)
        with self.assertRaises(ValueError):
            m.data[0, 0] = 5.0

    def test_complex_scaling_rejected(self):
        """Only real scalars keep a matrix Hermitian."""
        with self.assertRaises(MatrixInputError):
            HermitianMatrix.identity(2) * 1j

    def test_trace_quad_and_inner(self):
        """Trace, quadratic form and trace inner product agree with numpy."""
        rng = rng_for(3)
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        v = random_complex(rng, 4)
        self.assertAlmostEqual(a.trace(), float(np.trace(a.data).real), places=12)
        self.assertAlmostEqual(a.quad(v), float((v.conj() @ a.data @ v).real), places=10)
        self.assertAlmostEqual(a.inner(b), float(np.trace(a.data @ b.data).real), places=10)


class TestEigHermitian(unittest.TestCase):
    """Jacobi eigendecomposition."""

    def test_diagonal_values_descending(self):
        """diag(1, 3) has eigenvalues (3, 1)."""
        pair = eig_hermitian(HermitianMatrix.diag([1.0, 3.0]))
        np.testing.assert_allclose(pair.values, [3.0, 1.0], atol=1e-14)

    def test_pauli_y(self):
        """[[0, -j], [j, 0]] has eigenvalues (1, -1)."""
        pair = eig_hermitian([[0, -1j], [1j, 0]])
        np.testing.assert_allclose(pair.values, [1.0, -1.0], atol=1e-12)

    def test_identity(self):
        """All eigenvalues of I5 equal 1."""
        pair = eig_hermitian(HermitianMatrix.identity(5))
        np.testing.assert_allclose(pair.values, np.ones(5), atol=1e-14)

    def test_reconstruction_and_orthonormality(self):
        """Random matrices are reconstructed from orthonormal eigenvectors."""
        rng = rng_for(11)
        for n in (2, 3, 6, 9):
            m = random_hermitian(rng, n)
            pair = eig_hermitian(m)
            scale = max(1.0, frob_norm(m))
            self.assertLessEqual(np.linalg.norm(pair.reconstruct() - m.data), 1e-10 * scale)
            gram = pair.vectors.conj().T @ pair.vectors
            self.assertLessEqual(np.max(np.abs(gram - np.eye(n))), 1e-10)
            self.assertTrue(np.all(np.diff(pair.values) <= 0.0))

    def test_trace_and_norm_invariants(self):
        """Trace equals the eigenvalue sum and the Frobenius norm their 2-norm."""
        rng = rng_for(12)
        m = random_hermitian(rng, 7)
        values = eig_hermitian(m).values
        self.assertAlmostEqual(m.trace(), float(np.sum(values)), delta=1e-10 * max(1.0, abs(m.trace())))
        self.assertAlmostEqual(frob_norm(m) ** 2, float(np.sum(values ** 2)),
                               delta=1e-10 * frob_norm(m) ** 2)

    def test_matches_numpy_eigvalsh(self):
        """Eigenvalues agree with LAPACK."""
        m = random_hermitian(rng_for(13), 8)
        np.testing.assert_allclose(eig_hermitian(m).values, np.linalg.eigvalsh(m.data)[::-1], atol=1e-10)

    def test_deterministic(self):
        """Two calls on the same input give identical output."""
        m = random_hermitian(rng_for(14), 6)
        first, second = eig_hermitian(m), eig_hermitian(m)
        self.assertTrue(np.array_equal(first.values, second.values))
        self.assertTrue(np.array_equal(first.vectors, second.vectors))

    def test_vectors_in_canonical_phase(self):
        """First non-negligible entry of each eigenvector is real and nonnegative."""
        pair = eig_hermitian(random_hermitian(rng_for(15), 5))
        for k in range(5):
            v = pair.vector(k)
            first = int(np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v))))
            self.assertEqual(v[first].imag, 0.0)
            self.assertGreaterEqual(v[first].real, 0.0)

    def test_eigenvector_residuals(self):
        """‖M v − λ v‖ stays at rounding level for every eigenpair."""
        rng = rng_for(16)
        for n in range(2, 11):
            m = random_hermitian(rng, n)
            pair = eig_hermitian(m)
            scale = max(1.0, frob_norm(m))
            for k in range(n):
                v = pair.vector(k)
                residual = np.linalg.norm(m.data @ v - pair.values[k] * v)
                self.assertLessEqual(residual, 1e-10 * scale)

    def test_strong_interference_covariance_converges(self):
        """Ten-sensor scattered covariances at 30 dB converge without hitting the sweep cap."""
        geom = ArrayGeometry(10, 0.5)
        for central, spread in ((10.0, 10.0), (-20.0, 2.0), (45.0, 25.0)):
            R = scattered_covariance(AngularDensity.uniform(central, spread), 30.0, geom)
            m = R + HermitianMatrix.identity(10)
            with self.assertNoLogs('linalg.hermitian', level='WARNING'):
                pair = eig_hermitian(m)
            scale = frob_norm(m)
            self.assertLessEqual(np.linalg.norm(pair.reconstruct() - m.data), 1e-10 * scale)
            np.testing.assert_allclose(pair.values, np.linalg.eigvalsh(m.data)[::-1], atol=1e-10 * scale)


class TestPsdHelpers(unittest.TestCase):
    """PSD test, square roots and norms."""

    def test_is_psd_boundary_and_violation(self):
        """diag(1, 0) is PSD and diag(1, -1e-3) is not."""
        self.assertTrue(is_psd(HermitianMatrix.diag([1.0, 0.0]), 1e-9))
        self.assertFalse(is_psd(HermitianMatrix.diag([1.0, -1e-3]), 1e-9))

    def test_gram_matrix_is_psd(self):
        """w wᴴ is PSD for any w."""
        rng = rng_for(21)
        for _ in range(10):
            self.assertTrue(is_psd(HermitianMatrix.outer(random_complex(rng, 6))))

    def test_negative_tolerance_rejected(self):
        with self.assertRaises(MatrixInputError):
            is_psd(HermitianMatrix.identity(2), -1.0)

    def test_sqrt_examples(self):
        """sqrt(4 I) = 2 I and sqrt(diag(9, 1)) = diag(3, 1)."""
        np.testing.assert_allclose(sqrt_psd(4.0 * HermitianMatrix.identity(3)).data, 2.0 * np.eye(3), atol=1e-12)
        np.testing.assert_allclose(sqrt_psd(HermitianMatrix.diag([9.0, 1.0])).data, np.diag([3.0, 1.0]), atol=1e-12)

    def test_sqrt_random_psd(self):
        """R·R reproduces M and sqrt(M·M) reproduces M."""
        rng = rng_for(22)
        m = random_psd(rng, 6)
        root = sqrt_psd(m)
        self.assertLessEqual(np.linalg.norm(root.data @ root.data - m.data) / frob_norm(m), 1e-9)
        self.assertTrue(is_psd(root))
        square = HermitianMatrix(m.data @ m.data)
        self.assertLessEqual(np.linalg.norm(sqrt_psd(square).data - m.data) / frob_norm(m), 1e-8)

    def test_sqrt_of_indefinite_matrix_fails(self):
        with self.assertRaises(MatrixDomainError):
            sqrt_psd(HermitianMatrix.diag([1.0, -1.0]))

    def test_inv_sqrt(self):
        """R⁻¹ᐟ² M R⁻¹ᐟ² = I for positive definite M; singular M is rejected."""
        m = random_psd(rng_for(23), 5) + HermitianMatrix.identity(5)
        root = inv_sqrt_pd(m).data
        np.testing.assert_allclose(root @ m.data @ root, np.eye(5), atol=1e-9)
        with self.assertRaises(MatrixDomainError):
            inv_sqrt_pd(HermitianMatrix.diag([1.0, 0.0]))

    def test_frob_norm_examples(self):
        """‖I_N‖ = √N, ‖0‖ = 0, ‖diag(3, 4)‖ = 5."""
        self.assertAlmostEqual(frob_norm(HermitianMatrix.identity(7)), math.sqrt(7.0), places=14)
        self.assertEqual(frob_norm(HermitianMatrix.zeros(3)), 0.0)
        self.assertAlmostEqual(frob_norm(HermitianMatrix.diag([3.0, 4.0])), 5.0, places=14)

    def test_canonical_phase(self):
        """Leading negligible entries are skipped when fixing the phase."""
        v = canonical_phase(np.array([0.0, 1j, 1.0]))
        np.testing.assert_allclose(v, [0.0, 1.0, -1j], atol=1e-15)


if __name__ == '__main__':
    unittest.main()
