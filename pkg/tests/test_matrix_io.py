"""Tests for the matrix text format."""

import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np

from linalg import HermitianMatrix, MatrixInputError, format_matrix, load_matrix, parse_matrix, save_matrix
from tests.fixtures.matrices import random_psd, rng_for


class TestParseMatrix(unittest.TestCase):
    """Parsing and validation of matrix text."""

    def test_parse_with_comments(self):
        """Comments and blank lines are skipped."""
        text = "# sample covariance\n2\n\n2+0j 1-1j\n1+1j 3+0j\n"
        m = parse_matrix(text)
        np.testing.assert_array_equal(m.data, np.array([[2, 1 - 1j], [1 + 1j, 3]]))

    def test_bad_header(self):
        with self.assertRaises(MatrixInputError) as ctx:
            parse_matrix("two\n1 0\n0 1\n", 'r.txt')
        self.assertIn('r.txt:1', str(ctx.exception))

    def test_wrong_row_length_reports_line(self):
        """A short row names its line number."""
        with self.assertRaises(MatrixInputError) as ctx:
            parse_matrix("2\n1+0j 0j\n0j\n", 'r.txt')
        self.assertIn('r.txt:3', str(ctx.exception))

    def test_wrong_row_count(self):
        with self.assertRaises(MatrixInputError):
            parse_matrix("3\n1 0 0\n0 1 0\n")

    def test_malformed_entry(self):
        with self.assertRaises(MatrixInputError):
            parse_matrix("1\nabc\n")

    def test_non_hermitian_rejected(self):
        with self.assertRaises(MatrixInputError):
            parse_matrix("2\n1 5\n0 1\n")

    def test_empty_file(self):
        with self.assertRaises(MatrixInputError):
            parse_matrix("# nothing here\n")


class TestMatrixFiles(unittest.TestCase):
    """Locked atomic writes and loads."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_save_then_load_is_exact(self):
        """repr-formatted entries read back bit-exactly."""
        m = random_psd(rng_for(5), 4)
        path = Path(self.temp_dir) / 'm.txt'
        save_matrix(m, path)
        loaded = load_matrix(path)
        self.assertTrue(np.array_equal(loaded.data, m.data))
        self.assertFalse(path.with_suffix('.txt.tmp').exists())

    def test_negative_zero_imaginary_part(self):
        """Entries with a negative imaginary part keep their sign."""
        text = format_matrix(HermitianMatrix([[1.0, -2j], [2j, 1.0]]))
        self.assertIn('0.0-2.0j', text)

    def test_missing_file(self):
        with self.assertRaises(MatrixInputError):
            load_matrix(Path(self.temp_dir) / 'missing.txt')


if __name__ == '__main__':
    unittest.main()
