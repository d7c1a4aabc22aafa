"""CSV ingestion and the bundled fixture datasets."""

from __future__ import annotations

import csv
import math
from importlib import resources
from pathlib import Path

from .inference import Dataset

BUNDLED = {
    "bmi": "Body mass index of 202 Australian athletes (Cook and Weisberg, 1994)",
    "lakes": "N latitude degrees of 69 world lakes (Diversity data, column 5)",
}


class DataError(ValueError):
    """Input file could not be turned into a dataset."""


def _is_number(cell: str) -> bool:
    try:
        return math.isfinite(float(cell))
    except ValueError:
        return False


def ingest_csv(path, column: str | int | None = None, name: str | None = None) -> Dataset:
    """Read one numeric column from a comma-separated file.

    A first row containing any non-numeric cell is taken as the header.
    With several columns, ``column`` selects one by header name or by
    zero-based index.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh))]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None
    rows = [(ln, [c.strip() for c in row]) for ln, row in rows if any(c.strip() for c in row)]
    if not rows:
        raise DataError(f"{path}: file is empty")

    header = None
    if not all(_is_number(c) for c in rows[0][1]):
        header = rows[0][1]
        rows = rows[1:]
    width = len(header) if header else len(rows[0][1]) if rows else 0

    if column is None:
        if width != 1:
            raise DataError(f"{path}: {width} columns found; choose one with --column")
        idx = 0
    elif isinstance(column, int) or str(column).isdigit():
        idx = int(column)
        if not 0 <= idx < width:
            raise DataError(f"{path}: column index {idx} out of range (0..{width - 1})")
    else:
        if header is None or column not in header:
            raise DataError(f"{path}: no column named {column!r}")
        idx = header.index(column)

    values = []
    for ln, row in rows:
        if idx >= len(row) or row[idx] == "":
            raise DataError(f"{path}:{ln}: missing value")
        if not _is_number(row[idx]):
            raise DataError(f"{path}:{ln}: non-numeric cell {row[idx]!r}")
        values.append(float(row[idx]))
    if not values:
        raise DataError(f"{path}: column is empty")
    try:
        return Dataset(name or path.stem, values)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled dataset {name!r}; choose from {sorted(BUNDLED)}")
    return Path(str(resources.files("basn") / "data" / f"{name}.csv"))


def has_bundled(name: str) -> bool:
    return bundled_path(name).is_file()


def load_bundled(name: str) -> Dataset:
    path = bundled_path(name)
    if not path.is_file():
        raise FileNotFoundError(
            f"bundled dataset {name!r} is not installed at {path}; "
            f"see scripts/fetch_datasets.py for how to obtain it")
    return ingest_csv(path, name=name)
