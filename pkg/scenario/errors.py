"""Errors raised while building array scenarios."""

from dataclasses import dataclass
from typing import Any


@dataclass
class ScenarioError(Exception):
    """Invalid geometry, density or source parameter."""
    field: str
    value: Any
    message: str

    def __str__(self):
        return f"Invalid scenario parameter {self.field}={self.value!r}: {self.message}"
