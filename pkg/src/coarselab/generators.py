"""Built-in sample-space generators used by tests, demos, and the CLI."""
from __future__ import annotations

import numpy as np

from .spaces import FiniteMetricSpace


def circle_sample(n: int) -> FiniteMetricSpace:
    """n evenly spaced points on the unit-radius circle, arc-length metric.

    Diameter is pi for even n; the nearest-neighbour mesh is 2*pi/n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(n)
    k = np.abs(idx[:, None] - idx[None, :])
    k = np.minimum(k, n - k)
    dist = 2 * np.pi / n * k
    return FiniteMetricSpace(dist, [f"c{i}" for i in range(n)], validate=False)


def cantor_sample(depth: int) -> FiniteMetricSpace:
    """Midpoints of the 2**depth stage-``depth`` middle-thirds intervals.

    Points live in [0, 1] with the absolute-value metric.  The minimal gap is
    2/3**depth, and the gap hierarchy makes the coarse-component structure
    change visibly with the resolution parameter.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    lefts = np.array([0.0])
    scale = 1.0
    for _ in range(depth):
        scale /= 3.0
        lefts = np.concatenate([lefts, lefts + 2 * scale])
    lefts.sort()
    pts = lefts + scale / 2.0
    dist = np.abs(pts[:, None] - pts[None, :])
    return FiniteMetricSpace(dist, [f"k{i}" for i in range(len(pts))], validate=False)


def two_intervals(n: int, gap: float) -> FiniteMetricSpace:
    """n evenly spaced points on each of two unit intervals separated by ``gap``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if gap <= 0:
        raise ValueError("gap must be positive")
    left = np.linspace(0.0, 1.0, n)
    right = left + 1.0 + gap
    pts = np.concatenate([left, right])
    dist = np.abs(pts[:, None] - pts[None, :])
    labels = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)]
    return FiniteMetricSpace(dist, labels, validate=False)


def uniform_simplex(n: int) -> FiniteMetricSpace:
    """n points with all pairwise distances equal to 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dist = np.ones((n, n)) - np.eye(n)
    return FiniteMetricSpace(dist, [f"s{i}" for i in range(n)], validate=False)


GENERATORS = {
    "circle": circle_sample,
    "cantor": cantor_sample,
    "two_intervals": two_intervals,
    "simplex": uniform_simplex,
}


def is_generator_spec(source: str) -> bool:
    """True when the string names a known generator like ``circle:64``."""
    return source.split(":", 1)[0] in GENERATORS and ":" in source


def from_generator_spec(spec: str) -> FiniteMetricSpace:
    """Build a space from a compact string such as ``circle:64`` or ``two_intervals:16:1.0``."""
    parts = spec.split(":")
    name = parts[0]
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    if name == "two_intervals":
        if len(parts) != 3:
            raise ValueError("two_intervals takes two arguments: n and gap")
        return two_intervals(int(parts[1]), float(parts[2]))
    if len(parts) != 2:
        raise ValueError(f"{name} takes exactly one argument")
    return GENERATORS[name](int(parts[1]))
