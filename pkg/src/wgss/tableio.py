"""Machine-readable result tables.

A table is a list of named, unit-tagged numeric columns plus a metadata block
(config echo, seed, code version) that is sufficient to re-run the producing
command.  CSV layout: commented '# ' metadata header (one JSON document),
then the column-name row, the units row, and full-precision numeric rows.
A JSON variant carries the same fields in one document.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__


class TableFormatError(ValueError):
    pass


@dataclass
class ResultTable:
    name: str
    columns: list
    units: list
    rows: np.ndarray  # (n_rows, n_cols)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.shape[1] != len(self.columns):
            raise TableFormatError(
                f"{len(self.columns)} column names for "
                f"{self.rows.shape[1]}-column data")
        if len(self.units) != len(self.columns):
            raise TableFormatError("units row length mismatch")

    def full_metadata(self) -> dict:
        meta = {"table": self.name, "version": __version__}
        meta.update(self.metadata)
        return meta


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_csv(table: ResultTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# " + json.dumps(table.full_metadata(), sort_keys=True) + "\n")
        fh.write(",".join(table.columns) + "\n")
        fh.write(",".join(table.units) + "\n")
        for row in table.rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_json(table: ResultTable, path) -> None:
    doc = {
        "metadata": table.full_metadata(),
        "columns": table.columns,
        "units": table.units,
        "rows": [[float(_fmt(x)) for x in row] for row in table.rows],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_table(table: ResultTable, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        write_csv(table, path)
    elif fmt == "json":
        write_json(table, path)
    else:
        raise TableFormatError(f"unknown format {fmt!r}")


def read_csv(path) -> ResultTable:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    meta_lines = [ln[2:] for ln in lines if ln.startswith("# ")]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    if not meta_lines or len(body) < 2:
        raise TableFormatError(f"{path}: not a result table")
    try:
        meta = json.loads("\n".join(meta_lines))
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"{path}: bad metadata block: {exc}") from exc
    columns = body[0].split(",")
    units = body[1].split(",")
    try:
        rows = np.array([[float(x) for x in ln.split(",")] for ln in body[2:]])
    except ValueError as exc:
        raise TableFormatError(f"{path}: bad numeric row: {exc}") from exc
    if rows.size == 0:
        rows = rows.reshape(0, len(columns))
    name = meta.get("table", "")
    return ResultTable(name=name, columns=columns, units=units, rows=rows,
                       metadata={k: v for k, v in meta.items()
                                 if k not in ("table", "version")})
