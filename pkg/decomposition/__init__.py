"""Rank-one decomposition of PSD matrices with two equalized quadratic forms."""

from .errors import DecompositionFailure
from .models import DecompositionResult
from .rank_one import numeric_rank, rank_one_decompose

__all__ = [
    'DecompositionFailure',
    'DecompositionResult',
    'numeric_rank',
    'rank_one_decompose'
]
