"""Error types raised by the Hermitian linear algebra layer."""

from dataclasses import dataclass
from typing import Any


@dataclass
class MatrixInputError(Exception):
    """Malformed matrix input (shape, finiteness, symmetry, text format)."""
    field: str
    value: Any
    message: str

    def __str__(self):
        return f"Invalid matrix input for {self.field}='{self.value}': {self.message}"


@dataclass
class MatrixDomainError(Exception):
    """Valid matrix outside the domain of an operation (not PSD, singular)."""
    operation: str
    message: str

    def __str__(self):
        return f"{self.operation}: {self.message}"
