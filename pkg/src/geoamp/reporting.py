"""Deterministic JSON and CSV serialization of reports."""

from __future__ import annotations

import io
import json
import math
from importlib import resources

import numpy as np

FLOAT_FORMAT = "%.17g"
REPORT_KEYS = ("command", "config", "results", "diagnostics", "errors")


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = FLOAT_FORMAT % x
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def to_plain(obj):
    """Convert numpy scalars/arrays and complex numbers to JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float at 17 significant digits and insertion key order."""
    out = io.StringIO()

    def emit(x, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(x, dict):
            if not x:
                out.write("{}")
                return
            out.write("{\n")
            for i, (k, v) in enumerate(x.items()):
                out.write(pad + json.dumps(k) + ": ")
                emit(v, level + 1)
                out.write(",\n" if i < len(x) - 1 else "\n")
            out.write(end + "}")
        elif isinstance(x, list):
            if not x:
                out.write("[]")
                return
            out.write("[\n")
            for i, v in enumerate(x):
                out.write(pad)
                emit(v, level + 1)
                out.write(",\n" if i < len(x) - 1 else "\n")
            out.write(end + "]")
        elif isinstance(x, bool) or x is None:
            out.write(json.dumps(x))
        elif isinstance(x, int):
            out.write(str(x))
        elif isinstance(x, float):
            out.write(_float(x))
        else:
            out.write(json.dumps(x))

    emit(to_plain(obj), 0)
    out.write("\n")
    return out.getvalue()


def csv_table(columns, rows) -> str:
    """Rows of mappings to CSV text; floats at 17 significant digits, blanks for ``None``."""
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for c in columns:
            v = row.get(c)
            if v is None:
                cells.append("")
            elif isinstance(v, float):
                cells.append(FLOAT_FORMAT % v)
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def csv_matrix(matrix) -> str:
    """Complex matrix as CSV cells ``re+imj`` (parseable by ``complex``)."""
    lines = []
    for row in np.asarray(matrix):
        cells = []
        for z in row:
            z = complex(z)
            im = FLOAT_FORMAT % z.imag
            sign = "" if im.startswith("-") else "+"
            cells.append(f"{FLOAT_FORMAT % z.real}{sign}{im}j")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def report_schema() -> dict:
    text = resources.files("geoamp").joinpath("report_schema.json").read_text("utf-8")
    return json.loads(text)
