"""Sampled observables plus run metadata, and their byte-stable serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FORMATS = ("csv", "json")


@dataclass
class TimeSeries:
    """Named real-valued columns sharing a strictly increasing ``t`` column."""

    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        cols = {}
        for name, values in self.columns.items():
            arr = np.asarray(values)
            if np.iscomplexobj(arr):
                raise TypeError(f"column {name!r} is complex; split it into real and imaginary parts")
            cols[str(name)] = arr.astype(float).ravel()
        if "t" not in cols:
            raise ValueError("a time series needs a 't' column")
        lengths = {len(v) for v in cols.values()}
        if len(lengths) != 1:
            raise ValueError(f"column lengths differ: { {k: len(v) for k, v in cols.items()} }")
        if np.any(np.diff(cols["t"]) <= 0):
            raise ValueError("t must be strictly increasing")
        # keep t first
        self.columns = {"t": cols.pop("t"), **cols}

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __len__(self) -> int:
        return len(self.columns["t"])

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def to_csv_text(ts: TimeSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ts.names)
    cols = list(ts.columns.values())
    for i in range(len(ts)):
        writer.writerow([_fmt(c[i]) for c in cols])
    return buf.getvalue()


def to_json_text(ts: TimeSeries) -> str:
    doc = {
        "columns": {k: [float(x) for x in v] for k, v in ts.columns.items()},
        "metadata": _jsonable(ts.metadata),
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def metadata_json_text(metadata: dict) -> str:
    return json.dumps(_jsonable(metadata), indent=1, allow_nan=False) + "\n"


def emit_timeseries(ts: TimeSeries, fmt: str, path) -> list[Path]:
    """Write ``ts`` to ``path`` and return the files written.

    CSV output gets a ``<stem>.meta.json`` sidecar carrying the metadata;
    JSON output embeds it.
    """
    path = Path(path)
    if fmt == "csv":
        path.write_text(to_csv_text(ts), encoding="utf-8")
        meta = path.with_name(path.stem + ".meta.json")
        meta.write_text(metadata_json_text(ts.metadata), encoding="utf-8")
        return [path, meta]
    if fmt == "json":
        path.write_text(to_json_text(ts), encoding="utf-8")
        return [path]
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def load_timeseries(path) -> TimeSeries:
    """Inverse of :func:`emit_timeseries` for either format."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        doc = json.loads(text)
        return TimeSeries({k: np.array(v, dtype=float) for k, v in doc["columns"].items()},
                          doc.get("metadata", {}))
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body], dtype=float).reshape(len(body), len(header))
    meta_path = path.with_name(path.stem + ".meta.json")
    meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
    return TimeSeries({h: data[:, i] for i, h in enumerate(header)}, meta)
