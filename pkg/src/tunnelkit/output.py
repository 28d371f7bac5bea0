"""Deterministic CSV / JSON emission of record tables."""

import csv
import json
import math

import numpy as np


def _plain(value):
    """numpy scalars become their Python equivalents."""
    return value.item() if isinstance(value, np.generic) else value


def format_value(value):
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)  # shortest round-trip decimal
    return str(value)


def _jsonable(value):
    value = _plain(value)
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    return value


def write_table(columns, rows, stream, fmt="csv"):
    rows = [tuple(r) for r in rows]
    if fmt == "csv":
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([format_value(v) for v in r])
    elif fmt == "json":
        records = [{c: _jsonable(v) for c, v in zip(columns, r)} for r in rows]
        json.dump(records, stream, indent=1)
        stream.write("\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _deep(obj):
    if isinstance(obj, dict):
        return {k: _deep(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_deep(v) for v in obj]
    return _jsonable(obj)


def write_json(obj, stream):
    json.dump(_deep(obj), stream, indent=1)
    stream.write("\n")
