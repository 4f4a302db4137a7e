"""Dense complex-Hermitian linear algebra used by every numeric module."""

from .errors import MatrixInputError, MatrixDomainError
from .hermitian import (
    HermitianMatrix,
    EigenPair,
    DEFAULT_PSD_TOL,
    as_array,
    as_hermitian,
    canonical_phase,
    eig_hermitian,
    is_psd,
    sqrt_psd,
    inv_sqrt_pd,
    frob_norm
)
from .matrix_io import parse_matrix, format_matrix, load_matrix, save_matrix

__all__ = [
    'MatrixInputError',
    'MatrixDomainError',
    'HermitianMatrix',
    'EigenPair',
    'DEFAULT_PSD_TOL',
    'as_array',
    'as_hermitian',
    'canonical_phase',
    'eig_hermitian',
    'is_psd',
    'sqrt_psd',
    'inv_sqrt_pd',
    'frob_norm',
    'parse_matrix',
    'format_matrix',
    'load_matrix',
    'save_matrix'
]
