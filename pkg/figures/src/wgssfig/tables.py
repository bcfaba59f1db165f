"""Reader for wgss result tables.

A table file is CSV with two special leading rows:

* line 1: ``# `` followed by a JSON object with table metadata (always
  contains ``"table"``, the table name),
* line 2: comma-separated column names,
* line 3: comma-separated column units (``-`` for dimensionless),
* remaining lines: one float per column, written at full precision.

The JSON variant holds the same content under the keys ``metadata``,
``columns``, ``units`` and ``rows``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Table", "TableSchemaError", "read_table", "require_columns"]


class TableSchemaError(ValueError):
    """A table file does not match the expected layout."""


@dataclass(frozen=True)
class Table:
    """An in-memory result table."""

    name: str
    columns: tuple[str, ...]
    units: tuple[str, ...]
    rows: np.ndarray  # shape (n_rows, n_columns), float64
    metadata: dict

    def column(self, name: str) -> np.ndarray:
        """Return one column as a 1-D array."""
        try:
            idx = self.columns.index(name)
        except ValueError:
            raise TableSchemaError(
                f"table {self.name!r} has no column {name!r}; "
                f"available: {', '.join(self.columns)}"
            ) from None
        return self.rows[:, idx]

    def prefixed_columns(self, prefix: str) -> list[str]:
        """Return all column names starting with ``prefix``, in file order."""
        return [c for c in self.columns if c.startswith(prefix)]


def _read_csv(path: Path) -> Table:
    lines = path.read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("# "):
        raise TableSchemaError(f"{path}: missing '# ' metadata line")
    try:
        metadata = json.loads(lines[0][2:])
    except json.JSONDecodeError as exc:
        raise TableSchemaError(f"{path}: metadata line is not valid JSON: {exc}")
    if not isinstance(metadata, dict) or "table" not in metadata:
        raise TableSchemaError(f"{path}: metadata must be an object with a 'table' key")
    columns = tuple(c.strip() for c in lines[1].split(","))
    units = tuple(u.strip() for u in lines[2].split(","))
    if len(units) != len(columns):
        raise TableSchemaError(
            f"{path}: {len(columns)} column names but {len(units)} units"
        )
    body = [ln for ln in lines[3:] if ln.strip()]
    rows = np.empty((len(body), len(columns)))
    for i, ln in enumerate(body):
        parts = ln.split(",")
        if len(parts) != len(columns):
            raise TableSchemaError(
                f"{path}: row {i + 1} has {len(parts)} fields, expected {len(columns)}"
            )
        try:
            rows[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise TableSchemaError(f"{path}: row {i + 1}: {exc}")
    return Table(str(metadata["table"]), columns, units, rows, metadata)


def _read_json(path: Path) -> Table:
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise TableSchemaError(f"{path}: invalid JSON: {exc}")
    for key in ("metadata", "columns", "units", "rows"):
        if key not in doc:
            raise TableSchemaError(f"{path}: missing key {key!r}")
    metadata = doc["metadata"]
    if not isinstance(metadata, dict) or "table" not in metadata:
        raise TableSchemaError(f"{path}: metadata must be an object with a 'table' key")
    columns = tuple(doc["columns"])
    units = tuple(doc["units"])
    if len(units) != len(columns):
        raise TableSchemaError(
            f"{path}: {len(columns)} column names but {len(units)} units"
        )
    rows = np.asarray(doc["rows"], dtype=float)
    if rows.size == 0:
        rows = rows.reshape(0, len(columns))
    if rows.ndim != 2 or rows.shape[1] != len(columns):
        raise TableSchemaError(f"{path}: rows must be a list of {len(columns)}-field lists")
    return Table(str(metadata["table"]), columns, units, rows, metadata)


def read_table(path: str | Path) -> Table:
    """Load a table file (``.csv`` or ``.json``)."""
    path = Path(path)
    if not path.exists():
        raise TableSchemaError(f"table file not found: {path}")
    if path.suffix == ".json":
        return _read_json(path)
    return _read_csv(path)


def require_columns(table: Table, names: list[str] | tuple[str, ...]) -> None:
    """Raise :class:`TableSchemaError` unless every name is a column of *table*."""
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise TableSchemaError(
            f"table {table.name!r} is missing column(s) {', '.join(missing)}; "
            f"available: {', '.join(table.columns)}"
        )
