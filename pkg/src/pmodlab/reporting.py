"""Deterministic CSV/JSON serialisation of tables and check reports."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def to_json(obj) -> str:
    return json.dumps(clean(obj), indent=2) + "\n"


def fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return f"{x:.10g}"
    if isinstance(v, (list, tuple)):
        return ";".join(fmt_cell(x) for x in v)
    return str(v)


def to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if columns is None:
        columns = []
        for row in rows:
            for k in row:
                if k not in columns:
                    columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def report_summary_row(report) -> dict:
    """Flatten the scalar quantities of a CheckReport into one CSV row."""
    row = {"name": report.name, "verdict": report.verdict, "flags": " | ".join(report.flags)}
    for label, value in report.quantities:
        if isinstance(value, (int, float, np.floating, np.integer, str)) and not isinstance(value, bool):
            row[label] = value
    return row
