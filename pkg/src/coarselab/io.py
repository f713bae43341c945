"""CSV and point-cloud input for finite metric spaces.

Two on-disk formats are supported:

* distance-matrix CSV — first row and first column carry point labels (the
  corner cell is ignored); cell (i, j) is d(i, j); strict UTF-8;
* point-cloud CSV — each row is a coordinate vector, optionally preceded by a
  label in the first column; pairwise distances are computed under a chosen
  norm (euclidean | chebyshev | manhattan).
"""
from __future__ import annotations

import csv
import io as _io
from pathlib import Path

import numpy as np
from scipy.spatial.distance import cdist

from .spaces import FiniteMetricSpace

POINT_CLOUD_METRICS = {
    "euclidean": "euclidean",
    "chebyshev": "chebyshev",
    "manhattan": "cityblock",
}


def load_distance_csv(path: str | Path) -> FiniteMetricSpace:
    """Read a labelled distance-matrix CSV (validating the metric axioms)."""
    raw = Path(path).read_bytes()
    text = raw.decode("utf-8")  # strict: undecodable bytes are a parse error
    rows = [row for row in csv.reader(_io.StringIO(text)) if row]
    if len(rows) < 2:
        raise ValueError("distance CSV needs a header row and at least one data row")
    header = [c.strip() for c in rows[0][1:]]
    labels = []
    data = []
    for row in rows[1:]:
        if len(row) != len(header) + 1:
            raise ValueError(
                f"row {len(labels) + 1} has {len(row) - 1} entries, expected {len(header)}"
            )
        labels.append(row[0].strip())
        try:
            data.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise ValueError(f"non-numeric distance entry in row {row[0]!r}: {exc}") from exc
    if labels != header:
        raise ValueError("row labels do not match column labels")
    return FiniteMetricSpace(np.asarray(data), labels)


def save_distance_csv(M: FiniteMetricSpace, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([""] + M.labels)
        for i, lab in enumerate(M.labels):
            w.writerow([lab] + [repr(float(v)) for v in M.dist[i]])


def load_point_cloud(path: str | Path, metric: str = "euclidean") -> FiniteMetricSpace:
    """Read coordinate rows and build the pairwise-distance space."""
    if metric not in POINT_CLOUD_METRICS:
        raise ValueError(f"unknown point-cloud metric {metric!r}; known: {sorted(POINT_CLOUD_METRICS)}")
    text = Path(path).read_bytes().decode("utf-8")
    rows = [row for row in csv.reader(_io.StringIO(text)) if row]
    if not rows:
        raise ValueError("empty point-cloud file")
    labels = []
    coords = []
    for k, row in enumerate(rows):
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells:
            continue
        try:
            float(cells[0])
            label = f"p{k}"
            vec = [float(c) for c in cells]
        except ValueError:
            label = cells[0]
            vec = [float(c) for c in cells[1:]]
        labels.append(label)
        coords.append(vec)
    widths = {len(v) for v in coords}
    if len(widths) != 1:
        raise ValueError(f"inconsistent coordinate dimensions: {sorted(widths)}")
    X = np.asarray(coords, dtype=float)
    dist = cdist(X, X, metric=POINT_CLOUD_METRICS[metric])
    return FiniteMetricSpace(dist, labels, validate=False)
