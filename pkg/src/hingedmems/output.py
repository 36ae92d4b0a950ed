"""Deterministic CSV/JSON writers (17 significant digits, LF line endings)."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows) -> None:
    Path(path).write_text(csv_text(header, rows), newline="\n")


def json_text(data: dict) -> str:
    """Flat JSON object, keys in insertion order, floats at 17 significant digits.

    Non-finite floats become null since JSON has no literal for them.
    """
    parts = []
    for k, v in data.items():
        if v is None:
            s = "null"
        elif isinstance(v, str):
            s = json.dumps(v)
        elif isinstance(v, (bool, np.bool_, int, np.integer)):
            s = fmt(v)
        else:
            s = fmt(v) if math.isfinite(float(v)) else "null"
        parts.append(f"  {json.dumps(str(k))}: {s}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_json(path, data: dict) -> None:
    Path(path).write_text(json_text(data), newline="\n")


def read_profile(path) -> tuple[np.ndarray, np.ndarray]:
    """Read an (r, u) CSV with header row."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0][:2]] != ["r", "u"]:
        raise ValueError(f"{path}: expected header 'r,u'")
    data = np.array([[float(c) for c in row[:2]] for row in rows[1:] if row], dtype=float)
    if data.ndim != 2 or len(data) < 4:
        raise ValueError(f"{path}: too few rows")
    return data[:, 0], data[:, 1]
