"""Deterministic JSON/CSV rendering of command results.

Floats are written with 9 significant digits, in scientific notation when
``|x| < 1e-3`` or ``|x| >= 1e6`` and positional otherwise, so equal inputs
always give byte-identical files.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

SIG_DIGITS = 9


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == 0.0:
        return "0"
    ax = abs(x)
    if ax < 1e-3 or ax >= 1e6:
        mantissa, exp = f"{x:.{SIG_DIGITS - 1}e}".split("e")
        if "." in mantissa:
            mantissa = mantissa.rstrip("0").rstrip(".")
        return f"{mantissa}e{int(exp):+03d}"
    return f"{x:.{SIG_DIGITS}g}"


def _render(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, float, np.integer, np.floating)):
        out.append(format_number(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, enum.Enum):
        out.append(json.dumps(obj.value))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _render(v, indent, level + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(end_pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad)
            _render(v, indent, level + 1, out)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(end_pad + "]")
    else:
        out.append(json.dumps(str(obj)))


def to_json(obj: Any, indent: int = 2) -> str:
    """Render ``obj`` as JSON with stable key order and fixed number format."""
    out: list[str] = []
    _render(obj, indent, 0, out)
    return "".join(out) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, float, np.integer, np.floating)):
        s = format_number(v)
        return "" if s == "null" else s
    if isinstance(v, enum.Enum):
        return str(v.value)
    if isinstance(v, (list, tuple)):
        return "; ".join(_cell(x) for x in v)
    return str(v)


def to_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def digest(parts: Iterable[bytes | str]) -> str:
    """SHA-256 over the given parts, each length-prefixed so boundaries count."""
    h = hashlib.sha256()
    for part in parts:
        data = part.encode("utf-8") if isinstance(part, str) else bytes(part)
        h.update(len(data).to_bytes(8, "big"))
        h.update(data)
    return "sha256:" + h.hexdigest()


@dataclass
class Report:
    command: str
    inputs_digest: str
    results: Any
    warnings: list[str] = field(default_factory=list)
    table: list[dict] | None = None  # rows for CSV output
    columns: Sequence[str] | None = None

    def to_json(self) -> str:
        return to_json({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "warnings": list(self.warnings),
        })

    def to_csv(self) -> str:
        rows = self.table
        if rows is None:
            rows = [self.results] if isinstance(self.results, dict) else list(self.results)
        return to_csv(rows, self.columns)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")
