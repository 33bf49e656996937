"""CSV ingestion and atomic output writers.

Input CSV: comma separated, '.' decimal point, an optional single header
line (detected by a non-numeric first field). One column holds values; with
two or more columns the first is an integer index and the last the values.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataError
from .timeseries import Spacing, TimeSeries


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_values(path):
    """Return ``(values, first_index)``; ``first_index`` is None for one-column files."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if rows and not all(_is_number(f) for f in rows[0] if f.strip()):
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path} contains no data rows")
    try:
        values = np.array([float(r[-1]) for r in rows])
        first = int(float(rows[0][0])) if len(rows[0]) > 1 else None
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path} contains non-finite values")
    return values, first


def read_series(path, spacing=Spacing.DAY, pad_before=None, pad_after=None) -> TimeSeries:
    values, first = read_values(path)
    before = read_values(pad_before)[0] if pad_before else None
    after = read_values(pad_after)[0] if pad_after else None
    return TimeSeries(values, spacing, first or 0, before, after)


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_csv(path, header, columns):
    """Write equal-length columns under ``header`` atomically."""
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    _atomic_write(path, buf.getvalue())


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    _atomic_write(path, dumps_json(obj))
