"""Sweep result tables and their CSV / JSON serialisation.

Both formats are deterministic: identical tables give identical bytes.  Floats
are written with 17 significant digits so they round-trip exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass
class SweepTable:
    grid_name: str
    grid: np.ndarray
    columns: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.columns = {name: np.asarray(col, dtype=float) for name, col in self.columns.items()}
        bad = [name for name, col in self.columns.items() if col.shape != self.grid.shape]
        if bad:
            raise ValueError(f"columns {bad} do not match the grid length {len(self.grid)}")

    def column(self, name):
        return self.columns[name]


def _fmt(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _json_value(value: float):
    return None if not math.isfinite(value) else float(value)


def _plain(obj):
    """Convert numpy scalars and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return _json_value(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    for key, value in sorted(_plain(table.meta).items()):
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    names = list(table.columns)
    writer.writerow([table.grid_name, *names])
    for i, x in enumerate(table.grid):
        writer.writerow([_fmt(x), *(_fmt(table.columns[n][i]) for n in names)])
    return buf.getvalue()


def to_json(table: SweepTable) -> str:
    doc = {
        "meta": _plain(table.meta),
        "grid": {"name": table.grid_name, "values": [_json_value(v) for v in table.grid]},
        "columns": {n: [_json_value(v) for v in c] for n, c in table.columns.items()},
    }
    return json.dumps(doc, sort_keys=False, indent=1) + "\n"


def emit(table: SweepTable, fmt: str = "csv", path=None) -> str:
    """Serialise ``table``; write it to ``path`` unless that is None or ``"-"``."""
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path not in (None, "-"):
        p = Path(path)
        try:
            p.write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {p}: {exc}") from exc
    return text


def load_table(path) -> SweepTable:
    """Read a table written by :func:`emit` (format inferred from content)."""
    text = Path(path).read_text()
    return parse_table(text)


def parse_table(text: str) -> SweepTable:
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        nanify = lambda seq: [math.nan if v is None else v for v in seq]  # noqa: E731
        return SweepTable(doc["grid"]["name"], nanify(doc["grid"]["values"]),
                          {n: nanify(c) for n, c in doc["columns"].items()}, doc["meta"])
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, value = line[2:].split(": ", 1)
            meta[key] = json.loads(value)
        else:
            body.append(line)
    rows = list(csv.reader(body))
    header, data = rows[0], np.array([[float(v) for v in row] for row in rows[1:]])
    data = data.reshape(len(rows) - 1, len(header))
    return SweepTable(header[0], data[:, 0],
                      {name: data[:, i + 1] for i, name in enumerate(header[1:])}, meta)
