"""
Result files: CSV tables, the plain-text complex matrix format and atomic
writes.

Matrix format::

    # catgate-matrix v1, rows=<int>, cols=<int>
    re,im re,im ...        (one row per line, entries separated by spaces)
"""

from __future__ import annotations

import csv
import os
import re
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, List, Mapping, Sequence, TextIO, Union

import numpy as np

from catgate.errors import DatasetFormatError

PathLike = Union[str, Path]

MATRIX_HEADER = "# catgate-matrix v1, rows={rows}, cols={cols}"
_MATRIX_HEADER_RE = re.compile(r"^#\s*catgate-matrix v1,\s*rows=(\d+),\s*cols=(\d+)\s*$")


def fmt(value) -> str:
    """Numbers at 12 significant digits; everything else as str"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return "" if value is None else str(value)


@contextmanager
def atomic_write(path: PathLike) -> Iterator[TextIO]:
    """Write to a temporary file next to ``path`` and rename it into place"""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: PathLike, rows: Iterable[Mapping], fieldnames: Sequence[str]):
    with atomic_write(path) as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: fmt(row.get(k)) for k in fieldnames})


def read_csv(path: PathLike) -> List[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def format_matrix(matrix: np.ndarray) -> str:
    mat = np.asarray(matrix, dtype=np.complex128)
    if mat.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {mat.shape}")
    lines = [MATRIX_HEADER.format(rows=mat.shape[0], cols=mat.shape[1])]
    for row in mat:
        lines.append(" ".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def write_matrix(path: PathLike, matrix: np.ndarray):
    text = format_matrix(matrix)
    with atomic_write(path) as f:
        f.write(text)


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines:
        raise DatasetFormatError("empty matrix file", 1)
    match = _MATRIX_HEADER_RE.match(lines[0])
    if match is None:
        raise DatasetFormatError(f"bad matrix header {lines[0]!r}", 1)
    rows, cols = int(match.group(1)), int(match.group(2))
    body = lines[1:]
    if len(body) != rows:
        raise DatasetFormatError(f"expected {rows} rows, found {len(body)}", len(lines))
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, line in enumerate(body):
        entries = line.split()
        if len(entries) != cols:
            raise DatasetFormatError(f"expected {cols} entries, found {len(entries)}", i + 2)
        for j, entry in enumerate(entries):
            try:
                re_part, im_part = entry.split(",")
                out[i, j] = complex(float(re_part), float(im_part))
            except ValueError as e:
                raise DatasetFormatError(f"bad entry {entry!r}", i + 2) from e
    return out
