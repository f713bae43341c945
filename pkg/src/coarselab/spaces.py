"""Finite metric spaces and coarse-geometry primitives.

A :class:`FiniteMetricSpace` is a labelled symmetric distance matrix.  On top
of it the module provides the building blocks used everywhere else in the
toolkit: coarse (resolution-scale) components, greedy separated nets, greedy
covering numbers, Gromov products with the exhaustive four-point
hyperbolicity scan, quasi-lattice verification, and the rough-geodesic
reparametrization utility.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetryError,
    NegativeDistance,
    NotCobounded,
    NotRoughGeodesic,
    SampleTooLarge,
    TriangleViolation,
    ZeroDiagonalViolation,
)

#: floating tolerance for all metric-axiom checks
METRIC_TOL = 1e-9

#: exhaustive-scan cap for the O(n^4) hyperbolicity computation
HYPERBOLICITY_CAP = 400


class FiniteMetricSpace:
    """A finite metric space given by labels and a dense distance matrix.

    The matrix is validated on construction (pass ``validate=False`` only for
    matrices already known to be metrics, e.g. restrictions of validated
    ones).  The diameter is cached.
    """

    def __init__(self, dist, labels: Sequence[str] | None = None, validate: bool = True):
        dist = np.asarray(dist, dtype=float)
        if labels is None:
            labels = [f"p{i}" for i in range(dist.shape[0])]
        self.labels = list(labels)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {dist.shape}")
        if len(self.labels) != dist.shape[0]:
            raise ValueError("label count does not match matrix size")
        if validate:
            validate_metric(dist)
        self.dist = dist
        self.diameter = float(dist.max()) if dist.size else 0.0

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.n

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        """Restriction to a subset of points (kept order, no re-validation)."""
        idx = np.asarray(list(indices), dtype=int)
        return FiniteMetricSpace(
            self.dist[np.ix_(idx, idx)],
            [self.labels[i] for i in idx],
            validate=False,
        )

    def mesh(self) -> float:
        """Max over points of the distance to its nearest other point.

        This is the sample's own resolution: below it, single points become
        isolated; at it, the whole sample is one coarse component whenever the
        underlying set is "connected at its resolution".
        """
        if self.n < 2:
            return 0.0
        off = self.dist + np.diag(np.full(self.n, np.inf))
        return float(off.min(axis=1).max())

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, diameter={self.diameter:.6g})"


@dataclass(frozen=True)
class CoarsePartition:
    epsilon: float
    blocks: tuple[tuple[int, ...], ...]

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self, i: int) -> int:
        for b, members in enumerate(self.blocks):
            if i in members:
                return b
        raise KeyError(i)


@dataclass(frozen=True)
class Net:
    mu: float
    members: tuple[int, ...]


@dataclass(frozen=True)
class CoveringProfile:
    R: float
    r: float
    counts: tuple[int, ...]
    N: int


@dataclass(frozen=True)
class HyperbolicityReport:
    delta: float
    witness: tuple[int, int, int, int]
    exhaustive: bool


@dataclass(frozen=True)
class QuasilatticeReport:
    mu: float
    r: float
    max_gap: float
    local_bound: int


def _space(M) -> FiniteMetricSpace:
    """Accept a FiniteMetricSpace or a raw distance matrix interchangeably."""
    if isinstance(M, FiniteMetricSpace):
        return M
    return FiniteMetricSpace(M, validate=False)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_metric(matrix, tol: float = METRIC_TOL) -> None:
    """Check the metric axioms on a square matrix; raise on the first failure.

    The triangle inequality is scanned exhaustively (all n^3 triples, done
    one intermediate point at a time with vectorized comparisons) and the
    worst offending triple is reported.
    """
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {d.shape}")
    if not np.isfinite(d).all():
        raise ValueError("distance matrix contains non-finite entries")
    n = d.shape[0]
    diag = np.abs(np.diag(d))
    if (diag > tol).any():
        i = int(diag.argmax())
        raise ZeroDiagonalViolation(f"dist({i},{i}) = {d[i, i]!r}, expected 0")
    if (d < -tol).any():
        i, j = np.unravel_index(int((d).argmin()), d.shape)
        raise NegativeDistance(f"dist({i},{j}) = {d[i, j]!r} < 0")
    asym = np.abs(d - d.T)
    if (asym > tol).any():
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        raise AsymmetryError(f"dist({i},{j}) = {d[i, j]!r} but dist({j},{i}) = {d[j, i]!r}")
    # worst triangle defect: max over (i,j) of d(i,j) - min_k (d(i,k)+d(k,j))
    worst_defect = -np.inf
    worst = None
    for k in range(n):
        via_k = d[:, k][:, None] + d[k, :][None, :]
        defect = d - via_k
        m = float(defect.max())
        if m > worst_defect:
            worst_defect = m
            i, j = np.unravel_index(int(defect.argmax()), defect.shape)
            worst = (int(i), int(k), int(j))
    if worst_defect > tol:
        i, k, j = worst
        raise TriangleViolation(
            f"dist({i},{j}) = {d[i, j]:.12g} exceeds dist({i},{k}) + dist({k},{j}) "
            f"= {d[i, k] + d[k, j]:.12g} by {worst_defect:.3g}",
            witness=(i, k, j, worst_defect),
        )


# ---------------------------------------------------------------------------
# Gromov products and hyperbolicity
# ---------------------------------------------------------------------------

def gromov_product(x: int, y: int, w: int, M) -> float:
    """(x|y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2."""
    d = _space(M).dist
    return float(0.5 * (d[x, w] + d[y, w] - d[x, y]))


def hyperbolicity_delta(
    M,
    cap: int = HYPERBOLICITY_CAP,
    approx: bool = False,
    n_samples: int = 200_000,
    seed: int = 0,
) -> HyperbolicityReport:
    """Least delta such that (x|z)_w >= min((x|y)_w, (y|z)_w) - delta everywhere.

    Exhaustive over all n^4 (ordered) quadruples; repeated points never
    dominate, so the scan includes them harmlessly.  Above ``cap`` points the
    exhaustive scan refuses unless ``approx`` is set, in which case seeded
    random quadruples give a lower bound.
    """
    M = _space(M)
    n = M.n
    d = M.dist
    if n == 0:
        raise ValueError("empty space")
    if n > cap and not approx:
        raise SampleTooLarge(
            f"{n} points exceeds the exhaustive-scan cap {cap}; "
            "pass approx=True for a sampled lower bound"
        )
    if approx and n > cap:
        rng = np.random.default_rng(seed)
        q = rng.integers(0, n, size=(4, n_samples))
        x, y, z, w = q
        gxy = 0.5 * (d[x, w] + d[y, w] - d[x, y])
        gyz = 0.5 * (d[y, w] + d[z, w] - d[y, z])
        gxz = 0.5 * (d[x, w] + d[z, w] - d[x, z])
        vals = np.minimum(gxy, gyz) - gxz
        k = int(vals.argmax())
        delta = max(0.0, float(vals[k]))
        return HyperbolicityReport(delta, (int(x[k]), int(y[k]), int(z[k]), int(w[k])), False)

    best = 0.0
    witness = (0, 0, 0, 0)
    y_block = max(1, min(n, (1 << 22) // max(1, n * n)))  # keep temporaries ~32MB
    for w in range(n):
        dw = d[:, w]
        G = 0.5 * (dw[:, None] + dw[None, :] - d)  # G[x,y] = (x|y)_w
        comp = np.full((n, n), -np.inf)
        for y0 in range(0, n, y_block):
            # comp[x,z] = max_y min(G[x,y], G[y,z]), accumulated over y blocks
            blk = G[:, y0:y0 + y_block]            # (x, y)
            m = np.minimum(blk[:, :, None], G[y0:y0 + y_block, :][None, :, :]).max(axis=1)
            np.maximum(comp, m, out=comp)
        defect = comp - G
        mval = float(defect.max())
        if mval > best:
            best = mval
            x, z = np.unravel_index(int(defect.argmax()), defect.shape)
            # recover a maximizing y for the witness
            y = int(np.minimum(G[x, :], G[:, z]).argmax())
            witness = (int(x), y, int(z), int(w))
    return HyperbolicityReport(max(0.0, best), witness, True)


# ---------------------------------------------------------------------------
# coarse components, nets, coverings
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def coarse_components(M, eps: float) -> CoarsePartition:
    """Components of the threshold graph with edges d <= eps (step-sequences)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    M = _space(M)
    uf = _UnionFind(M.n)
    ii, jj = np.where(M.dist <= eps)
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i < j:
            uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(M.n):
        groups.setdefault(uf.find(i), []).append(i)
    blocks = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: g[0]))
    return CoarsePartition(epsilon=float(eps), blocks=blocks)


def greedy_net_indices(dist, mu: float, seed_order: Sequence[int] | None = None) -> list[int]:
    """Greedy pass admitting a point iff it is >= mu from every admitted point.

    Works on any square array of (possibly infinite) pairwise distances; used
    both for plain metric spaces and for level metrics with unreachable pairs.
    """
    dist = np.asarray(dist)
    n = dist.shape[0]
    order = list(range(n)) if seed_order is None else list(seed_order)
    if sorted(order) != list(range(n)):
        raise ValueError("seed_order must be a permutation of all point indices")
    members: list[int] = []
    for i in order:
        row = dist[i]
        if all(row[j] >= mu for j in members):
            members.append(i)
    return members


def maximal_net(M, mu: float, seed_order: Sequence[int] | None = None) -> Net:
    """Maximal mu-separated subset (greedy); maximality makes it mu-cobounded."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    members = greedy_net_indices(_space(M).dist, mu, seed_order)
    return Net(mu=float(mu), members=tuple(members))


def covering_number(M, R: float, r: float) -> CoveringProfile:
    """Greedy covering count of each open ball B(x, R) by open r-balls.

    Greedy picks the lowest-index uncovered point as the next ball center, so
    the result is deterministic and an upper bound on the optimal covering
    number — conservative for every downstream use (growth thresholds,
    valency caps).
    """
    if not (R > r > 0):
        raise ValueError("need R > r > 0")
    M = _space(M)
    d = M.dist
    counts = []
    for c in range(M.n):
        ball = np.where(d[c] < R)[0]
        covered = np.zeros(len(ball), dtype=bool)
        cnt = 0
        while not covered.all():
            u = int(ball[int(np.argmin(covered))])  # first uncovered, ascending index
            covered |= d[u][ball] < r
            cnt += 1
        counts.append(cnt)
    return CoveringProfile(R=float(R), r=float(r), counts=tuple(counts), N=int(max(counts)))


def estimate_properness_scale(
    M,
    r_grid: Sequence[float] | None = None,
    R_grid: Sequence[float] | None = None,
) -> float:
    """Heuristic scale r_b below which covering counts stop being meaningful.

    Scans a grid of (R, r) pairs and returns the smallest r whose covering
    profile is stable in R at the top of the R grid (the counts saturate
    instead of growing).  Finite samples always yield some finite answer; the
    value is a default, overridable everywhere it is consumed.
    """
    M = _space(M)
    if M.n < 2:
        return 0.0
    mesh = max(M.mesh(), 1e-12)
    diam = max(M.diameter, mesh * 2)
    if r_grid is None:
        r_grid = np.geomspace(mesh / 2, diam / 2, 8)
    if R_grid is None:
        R_grid = np.linspace(diam / 2, diam * 1.01, 4)
    for r in sorted(float(v) for v in r_grid):
        Ns = [covering_number(M, max(R, r * 1.0001 + 1e-12), r).N for R in R_grid]
        if len(set(Ns[-2:])) == 1:  # stable across the largest two R values
            return float(r)
    return float(max(r_grid))


def quasilattice_check(
    M, members: Sequence[int], mu: float, r: float
) -> QuasilatticeReport:
    """Verify coboundedness (d(x, Gamma) < mu for all x) and report local finiteness."""
    if len(members) == 0:
        raise ValueError("Gamma must be nonempty")
    M = _space(M)
    idx = np.asarray(sorted(set(int(i) for i in members)), dtype=int)
    gaps = M.dist[:, idx].min(axis=1)
    worst = int(gaps.argmax())
    if gaps[worst] >= mu:
        raise NotCobounded(
            f"point {worst} is at distance {gaps[worst]:.6g} >= mu = {mu:.6g} from Gamma",
            witness=worst,
        )
    local = int((M.dist[:, idx] < r).sum(axis=1).max())
    return QuasilatticeReport(mu=float(mu), r=float(r), max_gap=float(gaps[worst]), local_bound=local)


# ---------------------------------------------------------------------------
# quasi-isometry bookkeeping
# ---------------------------------------------------------------------------

def qi_scale_transfer(lam: float, mu: float, r_b: float) -> float:
    """Scale threshold valid in the image of a (lambda, mu)-quasi-isometry."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if mu < 0:
        raise ValueError("mu must be >= 0")
    return lam * mu + mu + r_b * lam


def reparametrize_rough_geodesic(
    path: Sequence[tuple[float, int]], mu: float, M
) -> list[tuple[float, int]]:
    """Normalize a rough-geodesic sample onto the time interval [0, d(x, y)].

    The input is a discretely sampled map t -> point claimed to satisfy
    |s - t| - mu <= d(path(s), path(t)) <= |s - t| + mu.  After verifying that
    claim, the sample is shifted to start at time 0 and then either extended
    constantly at the far endpoint (when it ends early) or truncated with a
    final jump to the far endpoint (when it overshoots).  The result satisfies
    the same inequalities with 2*mu in place of mu.
    """
    if len(path) < 2:
        raise ValueError("path needs at least two samples")
    times = [float(t) for t, _ in path]
    pts = [int(p) for _, p in path]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValueError("sample times must be strictly increasing")
    d = _space(M).dist
    for a in range(len(path)):
        for b in range(a + 1, len(path)):
            gap = abs(times[b] - times[a])
            dd = d[pts[a], pts[b]]
            if not (gap - mu - METRIC_TOL <= dd <= gap + mu + METRIC_TOL):
                raise NotRoughGeodesic(
                    f"samples at times {times[a]:.6g}, {times[b]:.6g} are at distance "
                    f"{dd:.6g}, outside [{gap - mu:.6g}, {gap + mu:.6g}]",
                    witness=(a, b),
                )
    t0 = times[0]
    times = [t - t0 for t in times]
    R = float(d[pts[0], pts[-1]])
    b_end = times[-1]
    if abs(b_end - R) <= METRIC_TOL:
        out = list(zip(times, pts))
    elif b_end < R:
        # ends early: sit at the endpoint until time R
        out = list(zip(times, pts)) + [(R, pts[-1])]
    else:
        # overshoots: keep samples strictly before R, then jump to the endpoint
        out = [(t, p) for t, p in zip(times, pts) if t < R] + [(R, pts[-1])]
    # verify the doubled constant on the output
    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            gap = abs(out[b][0] - out[a][0])
            dd = d[out[a][1], out[b][1]]
            if not (gap - 2 * mu - METRIC_TOL <= dd <= gap + 2 * mu + METRIC_TOL):
                raise NotRoughGeodesic(
                    f"reparametrized output violates the doubled bound at times "
                    f"{out[a][0]:.6g}, {out[b][0]:.6g}",
                    witness=(a, b),
                )
    return out
