"""Plain CSV and JSON persistence.

All CSV files carry one header row followed by numeric rows. Numbers are
written with ``repr`` so a float round-trips exactly and output is
byte-stable.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError

SCHEMA_VERSION = 1


def read_matrix(path) -> tuple[list[str], np.ndarray]:
    """Read a headed numeric CSV into (header, (n, k) float array)."""
    path = Path(path)
    try:
        fh = path.open(newline="")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: empty file")
        header = [h.strip() for h in header]
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ValidationError(
                    f"{path}:{line}: expected {len(header)} columns, got {len(row)}")
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise ValidationError(f"{path}:{line}: non-numeric cell") from None
            if not all(math.isfinite(v) for v in vals):
                raise ValidationError(f"{path}:{line}: NaN or infinite cell")
            rows.append(vals)
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return header, np.array(rows, dtype=float)


def write_matrix(path, values, header) -> None:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def dump_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
