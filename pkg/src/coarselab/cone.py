"""Hyperbolic cone over a finite base space.

The cone over a bounded space ``(Z, d)`` with diameter ``D`` is ``Z x [0, inf)``
with metric::

    rho((x,t), (y,s)) = 2 log( (d(x,y) + max(e^-t, e^-s) * D) / (e^-(s+t)/2 * D) )

The implementation evaluates the exactly equivalent, numerically stable form::

    rho((x,t), (y,s)) = |t - s| + 2 log1p( d(x,y) * e^min(t,s) / D )

(divide numerator and denominator by ``e^-(s+t)/2 * D`` and factor out
``e^|t-s|/2``).  The stable form makes vertical rays additive to full float
precision, keeps ``rho >= |height gap|`` exact, and never overflows for the
height ranges a finite sample can resolve.

On top of the metric the module provides the disk-model variant and its
isometry onto the cone, strata/projection helpers, height-confinement checks
for metric balls, level metrics (chain distances constrained to stay above a
height), the certified growth constant ``kappa(eps)``, and the level-expansion
check built from it.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    CertificationFailure,
    ConfinementViolation,
    DegenerateSpace,
    EmptyLevel,
    ResolutionWarning,
    ScaleOutOfRange,
)
from .report import CheckReport
from .spaces import FiniteMetricSpace
from .util import thread_map

HEIGHT_TOL = 1e-9


def step_bound(mu: float) -> float:
    """Chain step bound L = 1 + 2*mu associated with roughness constant mu."""
    if mu < 0:
        raise ValueError("mu must be >= 0")
    return 1.0 + 2.0 * mu


@dataclass(frozen=True)
class ConePoint:
    base: int
    height: float

    def __post_init__(self):
        if self.height < 0:
            raise ValueError(f"height must be >= 0, got {self.height}")


class ConeSample:
    """Finite sample of the cone: all strata ``Z x {i*r0}`` for ``i <= depth``.

    Extra off-stratum points may be appended.  Heights of strata points are
    always computed as ``level * r0`` from the integer level index, so level
    membership tests never drift.
    """

    def __init__(self, Z: FiniteMetricSpace, r0: float, depth: int,
                 extra_points: Sequence[ConePoint] = ()):
        if Z.diameter <= 0:
            raise DegenerateSpace("cone requires diameter > 0 (at least two distinct points)")
        if r0 <= 0:
            raise ValueError("r0 must be positive")
        if depth < 0:
            raise ValueError("depth must be >= 0")
        self.Z = Z
        self.r0 = float(r0)
        self.depth = int(depth)
        n = Z.n
        bases = np.tile(np.arange(n), depth + 1)
        levels = np.repeat(np.arange(depth + 1), n)
        heights = levels * self.r0
        if extra_points:
            eb = np.array([p.base for p in extra_points], dtype=int)
            eh = np.array([p.height for p in extra_points], dtype=float)
            lev = np.round(eh / self.r0).astype(int)
            on_grid = np.abs(lev * self.r0 - eh) <= HEIGHT_TOL
            el = np.where(on_grid & (lev <= depth), lev, -1)
            bases = np.concatenate([bases, eb])
            heights = np.concatenate([heights, eh])
            levels = np.concatenate([levels, el])
        self.bases = bases
        self.heights = heights
        self.levels = levels
        self._rho = None
        self._lm_cache: dict[tuple[float, float], "LevelMetric"] = {}

    @property
    def n_points(self) -> int:
        return len(self.bases)

    def point(self, i: int) -> ConePoint:
        return ConePoint(int(self.bases[i]), float(self.heights[i]))

    @property
    def points(self) -> list[ConePoint]:
        return [self.point(i) for i in range(self.n_points)]

    def stratum(self, level: int) -> np.ndarray:
        """Indices of the sampled stratum at height level*r0."""
        idx = np.where(self.levels == level)[0]
        if len(idx) == 0:
            raise EmptyLevel(f"sample has no stratum at level {level}")
        return idx

    def index_of(self, base: int, height: float) -> int:
        hit = np.where((self.bases == base) & (np.abs(self.heights - height) <= HEIGHT_TOL))[0]
        if len(hit) == 0:
            raise KeyError(f"no sampled point (base={base}, height={height})")
        return int(hit[0])

    def rho_matrix(self) -> np.ndarray:
        """Full pairwise cone-metric matrix of the sample (cached)."""
        if self._rho is None:
            self._rho = cone_metric_pairs(
                self.Z, self.bases, self.heights, self.bases, self.heights
            )
        return self._rho

    def as_metric_space(self) -> FiniteMetricSpace:
        labels = [f"{self.Z.labels[b]}@{h:.6g}" for b, h in zip(self.bases, self.heights)]
        return FiniteMetricSpace(self.rho_matrix(), labels, validate=False)

    def stratum_mesh(self, level: int) -> float:
        """Max over a stratum's points of the cone distance to its nearest stratum sibling."""
        idx = self.stratum(level)
        if len(idx) < 2:
            return 0.0
        sub = self.rho_matrix()[np.ix_(idx, idx)] + np.diag(np.full(len(idx), np.inf))
        return float(sub.min(axis=1).max())

    # --- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "Z": {"labels": self.Z.labels, "matrix": self.Z.dist.tolist()},
            "r0": self.r0,
            "depth": self.depth,
            "points": [[int(b), float(h)] for b, h in zip(self.bases, self.heights)],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ConeSample":
        Z = FiniteMetricSpace(np.asarray(obj["Z"]["matrix"], dtype=float), obj["Z"]["labels"])
        r0 = float(obj["r0"])
        depth = int(obj["depth"])
        sample = cls(Z, r0, depth)
        extras = []
        seen = {(int(b), round(float(h) / r0)) for b, h in
                zip(sample.bases, sample.heights)}
        for b, h in obj["points"]:
            lev = round(float(h) / r0)
            on_grid = abs(lev * r0 - float(h)) <= HEIGHT_TOL and 0 <= lev <= depth
            if not (on_grid and (int(b), lev) in seen):
                extras.append(ConePoint(int(b), float(h)))
        if extras:
            sample = cls(Z, r0, depth, extra_points=extras)
        return sample

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True, indent=2),
                              encoding="utf-8")

    @classmethod
    def load_json(cls, path: str | Path) -> "ConeSample":
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def __repr__(self) -> str:
        return (f"ConeSample(Z={self.Z!r}, r0={self.r0:.6g}, depth={self.depth}, "
                f"points={self.n_points})")


# ---------------------------------------------------------------------------
# the metric
# ---------------------------------------------------------------------------

def cone_metric(p: ConePoint, q: ConePoint, Z: FiniteMetricSpace) -> float:
    """Cone distance rho(p, q) over the base space Z."""
    D = Z.diameter
    if D <= 0:
        raise DegenerateSpace("cone metric undefined: base space has zero diameter")
    d = Z.dist[p.base, q.base]
    lo = min(p.height, q.height)
    return abs(p.height - q.height) + 2.0 * np.log1p(d * np.exp(lo) / D)


def cone_metric_pairs(Z: FiniteMetricSpace, bases_a, heights_a, bases_b, heights_b) -> np.ndarray:
    """Vectorized cone distances between two indexed families of cone points."""
    D = Z.diameter
    if D <= 0:
        raise DegenerateSpace("cone metric undefined: base space has zero diameter")
    ha = np.asarray(heights_a, dtype=float)[:, None]
    hb = np.asarray(heights_b, dtype=float)[None, :]
    d = Z.dist[np.ix_(np.asarray(bases_a, dtype=int), np.asarray(bases_b, dtype=int))]
    lo = np.minimum(ha, hb)
    return np.abs(ha - hb) + 2.0 * np.log1p(d * np.exp(lo) / D)


def bs_metric(p: tuple[int, float], q: tuple[int, float], Z: FiniteMetricSpace) -> float:
    """Disk-model distance 2 log((d(x,y) + max(t,s)) / sqrt(t*s)), scales in (0, D]."""
    D = Z.diameter
    if D <= 0:
        raise DegenerateSpace("disk model undefined: base space has zero diameter")
    (x, t), (y, s) = p, q
    for scale in (t, s):
        if not (0 < scale <= D + HEIGHT_TOL):
            raise ScaleOutOfRange(f"scale {scale!r} outside (0, {D}]")
    d = Z.dist[x, y]
    return 2.0 * float(np.log((d + max(t, s)) / np.sqrt(t * s)))


def bs_isometry(p: tuple[int, float], Z: FiniteMetricSpace) -> ConePoint:
    """Map a disk-model point (x, t) to the cone point (x, log D - log t)."""
    D = Z.diameter
    if D <= 0:
        raise DegenerateSpace("disk model undefined: base space has zero diameter")
    x, t = p
    if not (0 < t <= D + HEIGHT_TOL):
        raise ScaleOutOfRange(f"scale {t!r} outside (0, {D}]")
    return ConePoint(int(x), max(0.0, float(np.log(D) - np.log(t))))


def sigma_ray(x: int, heights: Sequence[float]) -> list[ConePoint]:
    """The vertical ray over base point x, sampled at the given heights."""
    return [ConePoint(int(x), float(h)) for h in heights]


def project(p: ConePoint, t: float) -> ConePoint:
    """pi_t: replace the height by t (1-Lipschitz on points at heights >= t)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return ConePoint(p.base, float(t))


def height(p: ConePoint) -> float:
    return p.height


# ---------------------------------------------------------------------------
# ball height confinement
# ---------------------------------------------------------------------------

def ball_height_confinement(
    p: ConePoint, delta: float, sample: ConeSample, strict: bool = True
) -> CheckReport:
    """Check that the sampled ball B(p, delta) stays within delta in height.

    Every sampled q with rho(p, q) < delta must satisfy
    |height(q) - height(p)| < delta, and any two members must differ in height
    by < 2*delta.  A failure indicates a bug in the metric implementation, so
    ``strict`` raises by default.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    rho = cone_metric_pairs(sample.Z, [p.base], [p.height], sample.bases, sample.heights)[0]
    members = np.where(rho < delta)[0]
    gaps = np.abs(sample.heights[members] - p.height)
    max_center_gap = float(gaps.max()) if len(members) else 0.0
    pair_gap = 0.0
    if len(members) >= 2:
        hh = sample.heights[members]
        pair_gap = float(hh.max() - hh.min())
    passed = bool(max_center_gap < delta and pair_gap < 2 * delta)
    witness = None
    if not passed:
        witness = int(members[int(gaps.argmax())])
    report = CheckReport(
        assertion="ball members stay within delta of the center height "
                  "and within 2*delta of each other",
        bound=float(delta),
        measured=max(max_center_gap, pair_gap / 2.0),
        passed=passed,
        witness=witness,
        detail={"members": int(len(members)), "max_center_gap": max_center_gap,
                "max_pair_gap": pair_gap},
    )
    if strict and not passed:
        raise ConfinementViolation(
            f"sampled point {witness} escapes the height window of B(p, {delta})",
            witness=witness,
        )
    return report


# ---------------------------------------------------------------------------
# level metrics
# ---------------------------------------------------------------------------

@dataclass
class LevelMetric:
    """Chain distance constrained to heights >= r with steps rho <= L.

    ``dist[i, j]`` is the total rho-length of the cheapest chain between nodes
    i and j through sampled points of height >= r, +inf when no chain exists.
    It dominates rho pointwise and coincides with rho for single-step pairs.
    """
    r: float
    L: float
    node_ids: np.ndarray          # indices into the owning sample's point arrays
    dist: np.ndarray
    sample: ConeSample = field(repr=False)

    def node_index(self, base: int, height: float) -> int:
        ids = self.node_ids
        s = self.sample
        hit = np.where((s.bases[ids] == base) &
                       (np.abs(s.heights[ids] - height) <= HEIGHT_TOL))[0]
        if len(hit) == 0:
            raise KeyError(f"(base={base}, height={height}) is not a node at level r={self.r}")
        return int(hit[0])

    def distance(self, p: ConePoint, q: ConePoint) -> float:
        return float(self.dist[self.node_index(p.base, p.height),
                               self.node_index(q.base, q.height)])

    @property
    def connected(self) -> bool:
        return bool(np.isfinite(self.dist).all())


def level_metric(sample: ConeSample, r: float, L: float, warn: bool = True) -> LevelMetric:
    """All-pairs chain distances on sampled points of height >= r.

    Edges join pairs at rho <= L with weight rho.  Disconnection is legitimate
    (it mirrors infinite chain distance off a coarse component) but usually
    means the sample is too coarse for the step bound at this height, so a
    ResolutionWarning is emitted unless ``warn`` is false.
    """
    if L <= 0:
        raise ValueError("L must be positive")
    if r < 0:
        raise ValueError("r must be >= 0")
    key = (round(float(r), 12), round(float(L), 12))
    cached = sample._lm_cache.get(key)
    if cached is not None:
        return cached
    ids = np.where(sample.heights >= r - HEIGHT_TOL)[0]
    rho = sample.rho_matrix()[np.ix_(ids, ids)]
    adj = np.where(rho <= L, rho, 0.0)
    np.fill_diagonal(adj, 0.0)
    dist = shortest_path(csr_matrix(adj), method="D", directed=False)
    lm = LevelMetric(r=float(r), L=float(L), node_ids=ids, dist=dist, sample=sample)
    if warn and len(ids) and not lm.connected:
        warnings.warn(
            f"level graph at r={r:.6g} disconnects at step bound L={L:.6g}; "
            "the sample is coarser than this height resolves",
            ResolutionWarning,
            stacklevel=2,
        )
    sample._lm_cache[key] = lm
    return lm


# ---------------------------------------------------------------------------
# kappa(eps): certified growth constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KappaEstimate:
    eps: float
    kappa: float
    grid: dict

    def __float__(self) -> float:
        return self.kappa


_KAPPA_CACHE: dict[tuple, KappaEstimate] = {}


def _kappa_envelope(t: np.ndarray) -> np.ndarray:
    """Pointwise infimum of the objective over the step parameter.

    The grid objective g(s, t) = (log(1+t)/log(1+e^-s t))^(1/s) is strictly
    increasing in s (its log is F(s)/s with F convex, F(0) = 0), so its
    infimum over s > 0 is the limit at s -> 0+, namely
    exp( t / ((1+t) log(1+t)) ).  Including this envelope in the search is
    what lets the certificate survive arbitrarily refined grids: any finite
    positive s-grid alone overestimates the infimum.
    """
    t = np.asarray(t, dtype=float)
    return np.exp(t / ((1.0 + t) * np.log1p(t)))


def kappa(
    eps: float,
    s_max: float = 50.0,
    grid_size: int = 512,
    refine_factor: int = 10,
    safety: float = 1e-6,
) -> KappaEstimate:
    """Largest certifiable kappa > 1 with 1 + e^-s t <= (1+t)^(kappa^-s).

    Searches the objective on a ``grid_size`` x ``grid_size`` grid over
    s in (0, s_max], t in (0, e^eps] together with the analytic s -> 0+
    envelope, backs off by the safety factor, then re-certifies the defining
    inequality at every node of the ``refine_factor`` times denser grid
    (including the s = 0 and t = 0 boundary rows, where it holds with
    equality, and the envelope row for the s -> 0+ limit).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    key = (round(float(eps), 12), float(s_max), int(grid_size), int(refine_factor), float(safety))
    if key in _KAPPA_CACHE:
        return _KAPPA_CACHE[key]

    tmax = float(np.exp(eps))
    s = np.linspace(s_max / grid_size, s_max, grid_size)
    t = np.linspace(tmax / grid_size, tmax, grid_size)
    obj = (np.log1p(t)[None, :] / np.log1p(np.exp(-s)[:, None] * t[None, :])) ** (1.0 / s)[:, None]
    kappa_raw = float(min(obj.min(), _kappa_envelope(t).min()))
    k = kappa_raw * (1.0 - safety)
    if not k > 1.0:
        raise CertificationFailure(f"search produced kappa = {k!r} <= 1 for eps = {eps}")

    n = grid_size * refine_factor
    s_fine = np.linspace(0.0, s_max, n + 1)          # includes the s = 0 boundary row
    t_fine = np.linspace(0.0, tmax, n + 1)           # includes the t = 0 boundary column
    logk = float(np.log(k))
    log1p_t = np.log1p(t_fine)

    def certify_rows(chunk: np.ndarray) -> tuple[int, float]:
        lhs = np.exp(-chunk[:, None] * logk) * log1p_t[None, :]
        rhs = np.log1p(np.exp(-chunk)[:, None] * t_fine[None, :])
        diff = lhs - rhs
        return int((diff < 0).sum()), float(diff.min())

    chunks = [s_fine[i:i + 256] for i in range(0, len(s_fine), 256)]
    results = thread_map(certify_rows, chunks)
    violations = sum(v for v, _ in results)
    min_margin = min(m for _, m in results)
    env_margin = float((np.log(_kappa_envelope(t_fine[1:])) - logk).min())
    if violations or env_margin < 0:
        raise CertificationFailure(
            f"refined grid found {violations} violations "
            f"(min margin {min_margin:.3e}, envelope margin {env_margin:.3e}); "
            "retry with a denser search grid"
        )
    est = KappaEstimate(
        eps=float(eps),
        kappa=k,
        grid={
            "s_max": s_max,
            "search": grid_size,
            "refined": n + 1,
            "kappa_raw": kappa_raw,
            "min_margin": min_margin,
            "envelope_margin": env_margin,
        },
    )
    _KAPPA_CACHE[key] = est
    return est


# ---------------------------------------------------------------------------
# level expansion and segment confinement
# ---------------------------------------------------------------------------

def level_expansion_check(
    sample: ConeSample,
    x: int,
    y: int,
    r: float,
    t: float,
    L: float,
    slack: float | None = None,
    strict: bool = False,
) -> CheckReport:
    """Compare chain distances across levels: lift by t, expect growth kappa^t.

    Computes ``lhs = dist_{r+t}((x, r+t), (y, r+t))`` and
    ``rhs = kappa(L)^t * dist_r((x, r), (y, r))`` on the sample.  Finite
    shortest paths only overestimate the underlying chain infimum, and the
    two sides are sampled at different resolutions, so the comparison allows
    an explicit slack (default: twice the mesh of the upper stratum); raw
    values and slack are reported separately.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    lm_lo = level_metric(sample, r, L, warn=False)
    lm_hi = level_metric(sample, r + t, L, warn=False)
    lhs = lm_hi.dist[lm_hi.node_index(x, r + t), lm_hi.node_index(y, r + t)]
    rhs_raw = lm_lo.dist[lm_lo.node_index(x, r), lm_lo.node_index(y, r)]
    kappa_t = float(kappa(L).kappa ** t)
    rhs = kappa_t * rhs_raw
    if slack is None:
        lev = round((r + t) / sample.r0)
        if abs(lev * sample.r0 - (r + t)) <= HEIGHT_TOL and 0 <= lev <= sample.depth:
            slack = 2.0 * sample.stratum_mesh(lev)
        else:
            slack = 0.0
    if np.isinf(rhs_raw):
        passed = bool(np.isinf(lhs))
    else:
        passed = bool(lhs + slack >= rhs)
    report = CheckReport(
        assertion="chain distance at the upper level dominates kappa^t times "
                  "the chain distance at the lower level (within sampling slack)",
        bound=float(rhs),
        measured=float(lhs),
        passed=passed,
        witness=None if passed else (x, y, r, t),
        detail={"lhs": float(lhs), "rhs_raw": float(rhs_raw), "kappa_t": kappa_t,
                "slack": float(slack)},
    )
    if strict and not passed:
        raise ConfinementViolation(
            f"expansion failed for bases ({x},{y}) between heights {r} and {r + t}",
            witness=(x, y, r, t),
        )
    return report


def segment_confinement_check(
    sample: ConeSample, y: ConePoint, t: float, L: float, strict: bool = True
) -> CheckReport:
    """Check that B((p, r+t), t/(2L)) projects into the small chain ball at level r.

    With y = (p, r), every sampled member z of the ball must have height in
    [r, r + 2t] and satisfy dist_r(y, pi_r(z)) < t/2.  Requires t >= 2L.
    """
    if t < 2 * L:
        raise ValueError(f"requires t >= 2L, got t={t}, L={L}")
    p, r = y.base, y.height
    center_h = r + t
    rho = cone_metric_pairs(sample.Z, [p], [center_h], sample.bases, sample.heights)[0]
    members = np.where(rho < t / (2 * L))[0]
    lm = level_metric(sample, r, L, warn=False)
    y_node = lm.node_index(p, r)
    bad = None
    worst = 0.0
    for m in members:
        h = float(sample.heights[m])
        if not (r - HEIGHT_TOL <= h <= r + 2 * t + HEIGHT_TOL):
            bad = int(m)
            worst = max(worst, abs(h - center_h))
            break
        proj_node = lm.node_index(int(sample.bases[m]), r)
        dr = lm.dist[y_node, proj_node]
        worst = max(worst, 0.0 if np.isinf(dr) else float(dr))
        if not dr < t / 2:
            bad = int(m)
            break
    passed = bad is None
    report = CheckReport(
        assertion="members of the shrunken ball at height r+t stay within the "
                  "height band [r, r+2t] and project into the t/2 chain ball",
        bound=float(t / 2),
        measured=worst,
        passed=passed,
        witness=bad,
        detail={"members": int(len(members)), "radius": float(t / (2 * L))},
    )
    if strict and not passed:
        raise ConfinementViolation(
            f"sampled point {bad} escapes the confinement region around base {p}",
            witness=bad,
        )
    return report
