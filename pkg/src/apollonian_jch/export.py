"""Text serialisation shared by the CLI and scenario bundles.

CSV: ``.`` decimal separator, 17 significant digits, LF line endings.
JSON: sorted keys, two-space indent, trailing newline.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .dynamics import AverageMatrix, OccupationSeries
from .network import ApollonianNetwork, OrbitPartition, degree_census, orbits


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    """Write ``text`` to a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def matrix_csv(m: np.ndarray) -> str:
    buf = io.StringIO()
    for row in np.atleast_2d(m):
        buf.write(",".join(fmt(x) for x in row))
        buf.write("\n")
    return buf.getvalue()


def read_matrix_csv(text: str) -> np.ndarray:
    return np.array([[float(x) for x in line.split(",")] for line in text.splitlines() if line])


def edge_list(net: ApollonianNetwork) -> str:
    return "".join(f"{u} {v}\n" for u, v in net.edges())


def network_document(net: ApollonianNetwork, parts: OrbitPartition | None = None) -> dict:
    parts = parts or orbits(net)
    return {
        "generation": net.generation,
        "nodes": list(range(1, net.node_count + 1)),
        "edges": [list(e) for e in net.edges()],
        "degrees": [int(d) for d in net.degrees],
        "orbits": [list(c) for c in parts.classes],
    }


def adjacency_from_document(doc: dict) -> np.ndarray:
    n = len(doc["nodes"])
    a = np.zeros((n, n), dtype=np.int8)
    for u, v in doc["edges"]:
        a[u - 1, v - 1] = a[v - 1, u - 1] = 1
    return a


def census_document(net: ApollonianNetwork) -> dict[str, int]:
    return {str(k): v for k, v in degree_census(net).items()}


def series_csv(series: OccupationSeries, nodes=None) -> str:
    """Long format ``t,node,p_ph,p_at``; ``nodes`` (1-based) restricts the rows."""
    n = series.p_ph.shape[1]
    cols = [k - 1 for k in nodes] if nodes is not None else list(range(n))
    buf = io.StringIO()
    buf.write("t,node,p_ph,p_at\n")
    for i, t in enumerate(series.times):
        ts = fmt(t)
        for c in cols:
            buf.write(f"{ts},{c + 1},{fmt(series.p_ph[i, c])},{fmt(series.p_at[i, c])}\n")
    return buf.getvalue()


def overall_csv(series: OccupationSeries) -> str:
    ph, at = series.p_ph.sum(axis=1), series.p_at.sum(axis=1)
    buf = io.StringIO()
    buf.write("t,overall_ph,overall_at\n")
    for t, a, b in zip(series.times, ph, at):
        buf.write(f"{fmt(t)},{fmt(a)},{fmt(b)}\n")
    return buf.getvalue()


def series_document(series: OccupationSeries, nodes=None) -> dict:
    cols = [k - 1 for k in nodes] if nodes is not None else list(range(series.p_ph.shape[1]))
    return {
        "initial": series.initial,
        "times": series.times.tolist(),
        "nodes": [c + 1 for c in cols],
        "p_ph": series.p_ph[:, cols].tolist(),
        "p_at": series.p_at[:, cols].tolist(),
    }


def average_document(avg: AverageMatrix, parts: OrbitPartition | None = None) -> dict:
    doc = {
        "alpha": avg.alpha,
        "chi_ph": avg.chi_ph.tolist(),
        "chi_at": avg.chi_at.tolist(),
        "layout": "row k = initial node, column l = observed node (1-based ids)",
    }
    if parts is not None:
        doc["orbits"] = [list(c) for c in parts.classes]
        doc["orbit_of_node"] = list(parts.class_of)
    return doc
