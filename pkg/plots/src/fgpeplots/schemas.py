"""Input-file contracts: CSV column sets and the raw field format.

Only declared artifacts are consumed; anything off-schema fails loudly
with a column diff, never silently.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = [
    "SchemaError",
    "EmptyInputError",
    "CSV_SCHEMAS",
    "read_csv_columns",
    "read_field",
]


class SchemaError(Exception):
    """Input columns do not match the declared schema."""


class EmptyInputError(Exception):
    """Input file parses but holds no data rows."""


CSV_SCHEMAS = {
    "n_star_curve": ["s", "Ns_star", "kinetic", "quartic", "residual", "iterations"],
    "gap_curve": ["t", "f"],
    "dilation_path": ["t", "energy_discrete", "energy_closed", "kinetic_closed", "status"],
    "sweep": ["s", "Ns_star", "t_s", "eN", "kin_min", "kin_saddle", "c_lo", "c_hi",
              "eps", "rescale_err", "min_err", "mu_min", "mu_saddle", "status"],
}


def _column_diff(expected: list[str], got: list[str]) -> str:
    missing = [c for c in expected if c not in got]
    unexpected = [c for c in got if c not in expected]
    parts = []
    if missing:
        parts.append("missing: " + ", ".join(missing))
    if unexpected:
        parts.append("unexpected: " + ", ".join(unexpected))
    if not parts:
        parts.append(f"order mismatch: expected {expected}, got {got}")
    return "; ".join(parts)


def read_csv_columns(path: str | Path, schema: str) -> dict[str, list]:
    """Read a schema'd CSV into columns; blank cells become NaN (gaps)."""
    expected = CSV_SCHEMAS[schema]
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path} has no header row")
        if header != expected:
            raise SchemaError(f"{path} does not match the {schema} schema "
                              f"({_column_diff(expected, header)})")
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyInputError(f"{path} has no data rows")
    cols: dict[str, list] = {c: [] for c in expected}
    for row in rows:
        if len(row) != len(expected):
            raise SchemaError(f"{path}: row width {len(row)} != {len(expected)}")
        for name, cell in zip(expected, row):
            if name == "status":
                cols[name].append(cell)
            else:
                cols[name].append(float(cell) if cell != "" else float("nan"))
    return cols


def read_field(basepath: str | Path) -> tuple[np.ndarray, dict]:
    """Raw field file: <base>.f64 (row-major little-endian doubles) plus
    the JSON sidecar {n, L, s, N, kind}."""
    base = Path(basepath)
    raw = base.parent / (base.name + ".f64")
    meta = base.parent / (base.name + ".json")
    if not raw.exists() or not meta.exists():
        raise EmptyInputError(f"field files {raw} / {meta} not found")
    sidecar = json.loads(meta.read_text())
    for key in ("n", "L"):
        if key not in sidecar:
            raise SchemaError(f"{meta} sidecar lacks '{key}'")
    n = int(sidecar["n"])
    values = np.fromfile(raw, dtype="<f8")
    if values.size != n * n:
        raise SchemaError(f"{raw} holds {values.size} doubles, expected {n * n}")
    return values.reshape(n, n), sidecar
