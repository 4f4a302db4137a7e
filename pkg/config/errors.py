"""Errors raised while reading configuration files."""

from dataclasses import dataclass
from typing import Optional


@dataclass
class ConfigError(Exception):
    """Malformed or invalid configuration entry, located by file and 1-based line."""
    path: str
    line: Optional[int]
    message: str

    def __str__(self):
        where = f"{self.path}:{self.line}" if self.line else self.path
        return f"{where}: {self.message}"
