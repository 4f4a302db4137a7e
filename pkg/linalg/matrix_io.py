"""Plain-text matrix format shared by the library and the CLI.

Layout:
    N
    a11 a12 ... a1N
    ...
    aN1 aN2 ... aNN

Each entry is written as ``re+imj`` (Python complex literal without spaces). Blank
lines and lines starting with ``#`` are ignored.
"""

import math
import os
from pathlib import Path
from typing import Union

import numpy as np
from filelock import FileLock

from .errors import MatrixInputError
from .hermitian import HermitianMatrix, as_array


def _parse_entry(token: str, location: str) -> complex:
    try:
        value = complex(token)
    except ValueError:
        raise MatrixInputError(location, token, "entry is not a complex number of the form re+imj")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise MatrixInputError(location, token, "entry is not finite")
    return value


def parse_matrix(text: str, source: str = '<string>') -> HermitianMatrix:
    """
    Parse the matrix text format.

    Args:
        text: File contents
        source: Name used in error locations

    Returns:
        Validated HermitianMatrix

    Raises:
        MatrixInputError: On malformed header, row length, entries or asymmetry
    """
    rows = [
        (number, line.strip())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith('#')
    ]
    if not rows:
        raise MatrixInputError(source, '', "empty matrix file")

    header_line, header = rows[0]
    try:
        n = int(header)
    except ValueError:
        raise MatrixInputError(f"{source}:{header_line}", header, "first line must be the dimension N")
    if n < 1:
        raise MatrixInputError(f"{source}:{header_line}", header, "dimension must be at least 1")

    body = rows[1:]
    if len(body) != n:
        raise MatrixInputError(source, len(body), f"expected {n} matrix rows")

    entries = np.zeros((n, n), dtype=np.complex128)
    for i, (number, line) in enumerate(body):
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixInputError(f"{source}:{number}", len(tokens), f"expected {n} entries in row")
        for j, token in enumerate(tokens):
            entries[i, j] = _parse_entry(token, f"{source}:{number}")

    return HermitianMatrix(entries)


def _format_entry(value: complex) -> str:
    sign = '-' if math.copysign(1.0, value.imag) < 0 else '+'
    return f"{value.real!r}{sign}{abs(value.imag)!r}j"


def format_matrix(matrix) -> str:
    data = as_array(matrix)
    lines = [str(data.shape[0])]
    for row in data:
        lines.append(' '.join(_format_entry(complex(v)) for v in row))
    return '\n'.join(lines) + '\n'


def load_matrix(path: Union[str, Path]) -> HermitianMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise MatrixInputError(str(path), '', f"cannot read matrix file: {e}") from e
    return parse_matrix(text, source=str(path))


def save_matrix(matrix, path: Union[str, Path]) -> None:
    """Write a matrix file atomically under a file lock."""
    path = Path(path)
    temp_file = path.with_suffix(path.suffix + '.tmp')
    with FileLock(str(path) + '.lock'):
        try:
            temp_file.write_text(format_matrix(matrix), encoding='utf-8')
            os.replace(temp_file, path)
        except Exception:
            if temp_file.exists():
                temp_file.unlink()
            raise
