"""CSV output with full float precision and a reader for round-trip checks."""
from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np


def _columns(columns: dict) -> dict:
    flat = {}
    for name, values in columns.items():
        arr = np.asarray(values)
        if np.iscomplexobj(arr):
            flat[f"{name}_re"] = arr.real
            flat[f"{name}_im"] = arr.imag
        else:
            flat[name] = arr.astype(float)
    lengths = {v.shape for v in flat.values()}
    if len(lengths) != 1 or len(next(iter(lengths))) != 1:
        raise ValueError(f"columns must be one-dimensional and of equal length, got shapes {sorted(lengths)}")
    return flat


def csv_bytes(columns: dict) -> bytes:
    flat = _columns(columns)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(flat))
    for row in zip(*flat.values()):
        w.writerow([format(float(v), ".17g") for v in row])
    return buf.getvalue().encode("utf-8")


def write_csv(path, columns: dict) -> Path:
    path = Path(path)
    path.write_bytes(csv_bytes(columns))
    return path


def read_csv(path) -> dict:
    """Column name -> float array."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
