"""Plain-text table emission: CSV with ``#`` provenance lines, or JSON.

Numbers are written with ``%.12e`` (printf-style formatting is not locale
dependent), so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    return "%.12e" % float(x)


def write_csv(path, columns: dict, comments=()) -> None:
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    n = len(data[0]) if data else 0
    if any(len(d) != n for d in data):
        raise ValueError("all columns must have the same length")
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(names))
    for i in range(n):
        lines.append(",".join(_fmt(d[i]) for d in data))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_csv(path):
    """Return ``(comments, columns)`` from a file written by :func:`write_csv`."""
    comments, rows, names = [], [], None
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif names is None:
            names = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    arr = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return comments, {k: arr[:, i] for i, k in enumerate(names)}


def write_json(path, columns: dict, meta: dict) -> None:
    doc = {"meta": meta,
           "columns": {k: [float(_fmt(v)) for v in np.asarray(c, dtype=float)]
                       for k, c in columns.items()}}
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=False) + "\n", encoding="ascii")
