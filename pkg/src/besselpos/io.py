"""CSV and JSON helpers for the command line.

Point files have one point per row and one coordinate per column, with an
optional header row. Written floats carry 17 significant digits so that
every double round-trips.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from pathlib import Path

import numpy as np

from .exceptions import DomainError

__all__ = ["read_matrix_csv", "read_points_csv", "write_matrix_csv", "format_float", "to_jsonable", "dumps"]


def format_float(v) -> str:
    return "%.17g" % v


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_matrix_csv(source) -> np.ndarray:
    """Rows of floats from a path or text stream; a non-numeric first row
    is treated as a header and skipped."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(source))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise DomainError("CSV file has no data rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DomainError(f"CSV row {i + 1} has {len(r)} columns, expected {width}")
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise DomainError(f"non-numeric CSV cell: {exc}") from exc


def read_points_csv(source, n: int | None = None) -> np.ndarray:
    """An ``(m, n)`` point array; checks the column count against ``n``."""
    pts = read_matrix_csv(source)
    if n is not None and pts.shape[1] != n:
        raise DomainError(f"points have {pts.shape[1]} columns, expected n={n}")
    return pts


def write_matrix_csv(rows, target=None, header=None) -> str:
    """Write a 2-D array (or 1-D as a column) with ``%.17g`` floats.

    Returns the text; also writes it to ``target`` when that is a path.
    """
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    for r in arr:
        w.writerow([format_float(v) for v in r])
    text = buf.getvalue()
    if target is not None:
        Path(target).write_text(text)
    return text


def to_jsonable(obj):
    """Recursively convert numpy scalars, arrays, enums and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)
