"""Net-of-nets graph structure on the hyperbolic cone.

Each level ``i`` carries a maximal delta-net of the stratum at height
``i * r0`` under the level metric; net points are lifted by ``delta`` to
become vertices, each owning a region of base points (the open ``3*delta``
level-metric ball around its net point).  Two vertices are adjacent exactly
when their prism regions overlap, which on this representation means their
levels differ by at most one and their regions share a base point.

The module selects feasible parameters (delta, r0) from measured covering
numbers, builds the graph, and provides the verification suite: separation,
coboundedness, the two-sided comparison between cone distance and hop
distance, degree and region-multiplicity bounds, and the height Laplacian
whose uniform positivity the certificate layer consumes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .cone import ConePoint, ConeSample, cone_metric_pairs, kappa, level_metric, step_bound
from .errors import (
    CoboundednessViolation,
    EmptyLevel,
    InfeasibleParams,
    IsolatedVertex,
    SeparationViolation,
)
from .report import CheckReport
from .spaces import FiniteMetricSpace, covering_number, greedy_net_indices

DEFAULT_MARGIN = 0.05


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaoParams:
    """Construction parameters with their feasibility constraints.

    Constraints (validated on construction):
      - scale ordering:  r0 / 3 > delta > c * (r_b + 1)   with c = 2 * L >= 2
      - expansion beats local size:  kappa ** r0 > 8 * delta * N_small
    ``N_small`` and ``N_big`` are covering numbers measured on the sample at
    radii (10*delta, delta/c) and (10*r0, delta/c).
    """
    mu: float
    L: float
    c: float
    delta: float
    r0: float
    r_b: float
    kappa: float
    N_small: int
    N_big: int

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        errs = []
        if not self.L == step_bound(self.mu):
            errs.append(f"L = {self.L} != 1 + 2*mu = {step_bound(self.mu)}")
        if not (self.c == 2 * self.L and self.c >= 2):
            errs.append(f"c = {self.c} must equal 2*L = {2 * self.L} and be >= 2")
        if not self.r0 / 3 > self.delta:
            errs.append(f"needs r0/3 > delta: {self.r0 / 3} <= {self.delta}")
        if not self.delta > self.c * (self.r_b + 1):
            errs.append(f"needs delta > c*(r_b+1): {self.delta} <= {self.c * (self.r_b + 1)}")
        if not self.kappa > 1:
            errs.append(f"needs kappa > 1, got {self.kappa}")
        if not self.kappa ** self.r0 > 8 * self.delta * self.N_small:
            errs.append(
                "needs kappa**r0 > 8*delta*N_small: "
                f"{self.kappa ** self.r0} <= {8 * self.delta * self.N_small}"
            )
        if errs:
            raise InfeasibleParams("; ".join(errs))

    @property
    def separation(self) -> float:
        return self.delta / self.c

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu, "L": self.L, "c": self.c, "delta": self.delta,
            "r0": self.r0, "r_b": self.r_b, "kappa": self.kappa,
            "N_small": self.N_small, "N_big": self.N_big,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CaoParams":
        return cls(mu=float(obj["mu"]), L=float(obj["L"]), c=float(obj["c"]),
                   delta=float(obj["delta"]), r0=float(obj["r0"]),
                   r_b=float(obj["r_b"]), kappa=float(obj["kappa"]),
                   N_small=int(obj["N_small"]), N_big=int(obj["N_big"]))


def choose_params(
    Z: FiniteMetricSpace,
    sample: ConeSample,
    mu: float,
    r_b: float,
    margin: float = DEFAULT_MARGIN,
    r0_floor: float | None = None,
) -> CaoParams:
    """Select (delta, r0) from measured covering numbers, single pass.

    delta is pinned just above its lower constraint, r0 just above the larger
    of its two lower constraints; the margin keeps the strict inequalities
    strict in floating arithmetic.  Covering numbers are greedy measurements
    on the given sample; if even the finest stratum is coarser than the
    covering radius delta/c the measurement is meaningless and the sample
    must be refined first.  ``r0_floor`` additionally pins r0 from below —
    used when re-deriving parameters for a sample whose stratum spacing is
    already fixed (a larger r0 never violates either constraint).
    """
    if margin <= 0:
        raise ValueError("margin must be positive")
    L = step_bound(mu)
    c = 2.0 * L
    kap = kappa(L).kappa
    delta = c * (r_b + 1.0) * (1.0 + margin)
    small_radius = delta / c
    mesh0 = sample.stratum_mesh(0)
    if mesh0 > small_radius:
        raise InfeasibleParams(
            f"sample too coarse to measure covering numbers: finest stratum mesh "
            f"{mesh0:.6g} exceeds covering radius delta/c = {small_radius:.6g}; "
            f"refine the base sample below mesh {small_radius:.6g}"
        )
    M = sample.rho_matrix()
    N_small = covering_number(M, 10.0 * delta, small_radius).N
    r0 = max(
        3.0 * delta * (1.0 + margin),
        float(np.log(8.0 * delta * N_small) / np.log(kap)) * (1.0 + margin),
    )
    if r0_floor is not None:
        r0 = max(r0, r0_floor)
    N_big = covering_number(M, 10.0 * r0, small_radius).N
    return CaoParams(mu=float(mu), L=L, c=c, delta=float(delta), r0=float(r0),
                     r_b=float(r_b), kappa=kap, N_small=int(N_small), N_big=int(N_big))


def calibrate(
    Z: FiniteMetricSpace,
    mu: float,
    r_b: float,
    depth: int,
    margin: float = DEFAULT_MARGIN,
    max_rounds: int = 12,
    rtol: float = 1e-9,
) -> tuple[ConeSample, CaoParams]:
    """Iterate sample construction and parameter selection to a fixed point.

    Covering numbers are measured on the sample, but the sample's stratum
    spacing is r0, which the measurement itself determines; starting from
    r0 = 3*delta the loop rebuilds and re-measures until r0 stabilizes
    (observed: 2-3 rounds).  The measured covering number can flip between
    two values as r0 flips, producing a 2-cycle instead of a fixed point; on
    revisiting a scale the loop settles on the largest scale of the cycle,
    which is then re-validated against its own sample (a larger r0 slackens
    both constraints, so this terminates).
    """
    L = step_bound(mu)
    c = 2.0 * L
    delta = c * (r_b + 1.0) * (1.0 + margin)
    r0 = 3.0 * delta * (1.0 + margin)
    visited = [r0]
    for _ in range(max_rounds):
        sample = ConeSample(Z, r0, depth)
        params = choose_params(Z, sample, mu, r_b, margin)
        if abs(params.r0 - r0) <= rtol * max(1.0, r0):
            return sample, params
        new = params.r0
        revisit = [i for i, v in enumerate(visited)
                   if abs(new - v) <= rtol * max(1.0, new)]
        if revisit:
            r0 = max(visited[revisit[0]:] + [new])
            sample = ConeSample(Z, r0, depth)
            params = choose_params(Z, sample, mu, r_b, margin, r0_floor=r0)
            if abs(params.r0 - r0) <= rtol * max(1.0, r0):
                return sample, params
            r0 = params.r0
        else:
            r0 = new
        visited.append(r0)
    raise InfeasibleParams(
        f"parameter selection did not stabilize in {max_rounds} rounds (last r0 = {r0})"
    )


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaoVertex:
    level: int
    net_index: int
    net_point: ConePoint
    vertex_point: ConePoint
    region_bases: frozenset[int]


class CaoGraph:
    def __init__(self, params: CaoParams, vertices: Sequence[CaoVertex],
                 edges: Sequence[tuple[int, int]], depth: int):
        self.params = params
        self.vertices = list(vertices)
        self.depth = int(depth)
        n = len(self.vertices)
        canon = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            canon.add((min(a, b), max(a, b)))
        self.edges = sorted(canon)
        self._adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            self._adj[a].append(b)
            self._adj[b].append(a)
        for nbrs in self._adj:
            nbrs.sort()
        self._hops = None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def levels(self) -> np.ndarray:
        return np.array([v.level for v in self.vertices], dtype=int)

    def interior(self, require_height_above_delta: bool = False) -> np.ndarray:
        """Vertices whose full neighborhood the truncation materializes.

        The top level is excluded: the un-built level above it would add
        neighbors.  Level 0 is genuinely the bottom of the cone, so it counts
        as interior unless the caller also requires height > delta (which
        excludes exactly level 0, since heights are level*r0 + delta).
        """
        lev = self.levels()
        mask = lev < self.depth
        if require_height_above_delta:
            mask &= lev >= 1
        return np.where(mask)[0]

    def heights(self) -> np.ndarray:
        return np.array([v.vertex_point.height for v in self.vertices], dtype=float)

    def hop_matrix(self) -> np.ndarray:
        """All-pairs shortest edge-path counts; +inf across components."""
        if self._hops is None:
            n = self.n_vertices
            if self.edges:
                rows = [a for a, b in self.edges] + [b for a, b in self.edges]
                cols = [b for a, b in self.edges] + [a for a, b in self.edges]
                adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
            else:
                adj = csr_matrix((n, n))
            self._hops = shortest_path(adj, method="D", directed=False, unweighted=True)
        return self._hops

    # --- serialization -----------------------------------------------------

    def to_json_dict(self, check_results: dict | None = None) -> dict:
        out = {
            "params": self.params.to_json_dict(),
            "depth": self.depth,
            "vertices": [
                {
                    "level": v.level,
                    "net_index": v.net_index,
                    "base": v.net_point.base,
                    "net_height": v.net_point.height,
                    "vertex_height": v.vertex_point.height,
                    "region_bases": sorted(v.region_bases),
                }
                for v in self.vertices
            ],
            "edges": [[a, b] for a, b in self.edges],
        }
        if check_results is not None:
            out["checks"] = check_results
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CaoGraph":
        params = CaoParams.from_json_dict(obj["params"])
        vertices = [
            CaoVertex(
                level=int(v["level"]),
                net_index=int(v["net_index"]),
                net_point=ConePoint(int(v["base"]), float(v["net_height"])),
                vertex_point=ConePoint(int(v["base"]), float(v["vertex_height"])),
                region_bases=frozenset(int(b) for b in v["region_bases"]),
            )
            for v in obj["vertices"]
        ]
        edges = [(int(a), int(b)) for a, b in obj["edges"]]
        return cls(params, vertices, edges, int(obj["depth"]))

    def save_json(self, path: str | Path, check_results: dict | None = None) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(check_results), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load_json(cls, path: str | Path) -> "CaoGraph":
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dot(self) -> str:
        lines = ["graph cone_net {"]
        for i, v in enumerate(self.vertices):
            lines.append(
                f'  n{i} [label="{v.level}:{v.net_index}" height_value="{v.vertex_point.height!r}"];'
            )
        for a, b in self.edges:
            lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (f"CaoGraph(depth={self.depth}, vertices={self.n_vertices}, "
                f"edges={len(self.edges)})")


def build_cao_graph(sample: ConeSample, params: CaoParams, depth: int,
                    seed: int = 0) -> CaoGraph:
    """Per-level maximal nets, lifted vertices, region overlap edges.

    Net selection uses the level metric of the stratum's own height (chains
    may detour through higher strata).  Tie-breaking is ascending base index
    by default; a nonzero seed permutes the candidate order per level, so any
    fixed seed gives a bit-reproducible graph.
    """
    if depth > sample.depth:
        raise EmptyLevel(f"sample holds levels 0..{sample.depth}, requested depth {depth}")
    vertices: list[CaoVertex] = []
    for level in range(depth + 1):
        stratum = sample.stratum(level)  # raises EmptyLevel when missing
        h = level * sample.r0
        lm = level_metric(sample, h, params.L, warn=False)
        rows = np.array([lm.node_index(int(sample.bases[i]), h) for i in stratum])
        dist = lm.dist[np.ix_(rows, rows)]
        seed_order = None
        if seed:
            seed_order = np.random.default_rng((seed, level)).permutation(len(stratum)).tolist()
        net_local = greedy_net_indices(dist, params.delta, seed_order=seed_order)
        for alpha, li in enumerate(net_local):
            base = int(sample.bases[stratum[li]])
            ball = np.where(dist[li] < 3.0 * params.delta)[0]
            region = frozenset(int(sample.bases[stratum[j]]) for j in ball)
            vertices.append(
                CaoVertex(
                    level=level,
                    net_index=alpha,
                    net_point=ConePoint(base, h),
                    vertex_point=ConePoint(base, h + params.delta),
                    region_bases=region,
                )
            )
    edges = []
    by_level: dict[int, list[int]] = {}
    for i, v in enumerate(vertices):
        by_level.setdefault(v.level, []).append(i)
    for i, v in enumerate(vertices):
        for lev in (v.level, v.level + 1):
            for j in by_level.get(lev, ()):
                if j <= i:
                    continue
                if v.region_bases & vertices[j].region_bases:
                    edges.append((i, j))
    return CaoGraph(params, vertices, edges, depth)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def _vertex_rho(G: CaoGraph, sample: ConeSample) -> np.ndarray:
    bases = [v.vertex_point.base for v in G.vertices]
    heights = [v.vertex_point.height for v in G.vertices]
    return cone_metric_pairs(sample.Z, bases, heights, bases, heights)


def separation_check(G: CaoGraph, sample: ConeSample, strict: bool = False) -> CheckReport:
    """All distinct vertex pairs sit at cone distance >= delta/c."""
    rho = _vertex_rho(G, sample)
    bound = G.params.separation
    n = G.n_vertices
    off = rho + np.diag(np.full(n, np.inf))
    measured = float(off.min()) if n > 1 else float("inf")
    passed = bool(measured >= bound)
    witness = None
    if not passed:
        i, j = np.unravel_index(int(off.argmin()), off.shape)
        witness = (int(i), int(j))
    report = CheckReport(
        assertion="vertex set is delta/c-separated in the cone metric",
        bound=bound, measured=measured, passed=passed, witness=witness,
        detail={"pairs_checked": n * (n - 1) // 2},
    )
    if strict and not passed:
        raise SeparationViolation(
            f"vertices {witness} at cone distance {measured} < {bound}", witness=witness
        )
    return report


def coboundedness_check(G: CaoGraph, sample: ConeSample, strict: bool = False) -> CheckReport:
    """Every sampled cone point below the truncation height has a vertex within 2*r0."""
    bases = [v.vertex_point.base for v in G.vertices]
    heights = [v.vertex_point.height for v in G.vertices]
    cut = G.depth * sample.r0 + 1e-9
    pts = np.where(sample.heights <= cut)[0]
    rho = cone_metric_pairs(sample.Z, sample.bases[pts], sample.heights[pts], bases, heights)
    nearest = rho.min(axis=1)
    measured = float(nearest.max()) if len(pts) else 0.0
    bound = 2.0 * G.params.r0
    passed = bool(measured <= bound)
    witness = None if passed else int(pts[int(nearest.argmax())])
    report = CheckReport(
        assertion="sampled cone points below the truncation height lie within "
                  "2*r0 of a vertex",
        bound=bound, measured=measured, passed=passed, witness=witness,
        detail={"points_checked": int(len(pts))},
    )
    if strict and not passed:
        raise CoboundednessViolation(
            f"sampled point {witness} at distance {measured} > {bound} from every vertex",
            witness=witness,
        )
    return report


def qi_check(
    G: CaoGraph,
    sample: ConeSample,
    n_pairs: int = 200,
    seed: int = 0,
    pairs: Sequence[tuple[int, int]] | None = None,
) -> CheckReport:
    """Hop distance vs cone distance: rho/(8*r0) <= hops < 3*r0*rho per pair.

    Pairs are drawn from the same graph component (hop distance finite).
    Reports the empirical extreme ratios next to the asserted constants.
    """
    hops = G.hop_matrix()
    rho = _vertex_rho(G, sample)
    r0 = G.params.r0
    if pairs is None:
        rng = np.random.default_rng(seed)
        finite = np.argwhere(np.isfinite(hops))
        finite = finite[finite[:, 0] < finite[:, 1]]
        if len(finite) == 0:
            pairs = []
        else:
            sel = rng.integers(0, len(finite), size=min(n_pairs, len(finite)))
            pairs = [tuple(map(int, finite[k])) for k in sel]
    fails = []
    lo_ratio, hi_ratio = np.inf, 0.0
    for u, v in pairs:
        dg, dr = hops[u, v], rho[u, v]
        if u == v:
            continue
        lo_ok = dr / (8.0 * r0) <= dg
        hi_ok = dg < 3.0 * r0 * dr
        if dr > 0:
            lo_ratio = min(lo_ratio, dg / dr)
            hi_ratio = max(hi_ratio, dg / dr)
        if not (lo_ok and hi_ok):
            fails.append((u, v, float(dg), float(dr)))
    passed = not fails
    report = CheckReport(
        assertion="hop distance is pinched between rho/(8*r0) and 3*r0*rho",
        bound=float(3.0 * r0),
        measured=float(hi_ratio),
        passed=passed,
        witness=fails[0][:2] if fails else None,
        detail={
            "pairs_checked": len(pairs),
            "violations": len(fails),
            "lower_constant": float(1.0 / (8.0 * r0)),
            "empirical_min_ratio": float(lo_ratio) if np.isfinite(lo_ratio) else None,
            "empirical_max_ratio": float(hi_ratio),
        },
    )
    return report


@dataclass(frozen=True)
class DegreeStats:
    n_all: int
    n_plus: int
    n_minus: int


def degree_stats(G: CaoGraph, vi: int) -> DegreeStats:
    """Neighbor counts of vertex vi: total, one level up, one level down."""
    lev = G.vertices[vi].level
    up = down = 0
    for j in G.neighbors(vi):
        lj = G.vertices[j].level
        if lj == lev + 1:
            up += 1
        elif lj == lev - 1:
            down += 1
    return DegreeStats(n_all=G.degree(vi), n_plus=up, n_minus=down)


def asymmetry_check(G: CaoGraph) -> CheckReport:
    """Down-degrees bounded by N_small everywhere; up-degrees at least
    2*N_small on interior vertices above height delta.

    Top-level vertices have no built level above them and are excluded from
    the up-degree clause (listed in the report); level-0 vertices are excluded
    by the height > delta requirement.
    """
    ns = G.params.N_small
    down_bad, up_bad = [], []
    eligible = set(G.interior(require_height_above_delta=True).tolist())
    excluded = [i for i, v in enumerate(G.vertices) if v.level == G.depth]
    worst_down, worst_up = 0, None
    for i in range(G.n_vertices):
        st = degree_stats(G, i)
        worst_down = max(worst_down, st.n_minus)
        if st.n_minus > ns:
            down_bad.append(i)
        if i in eligible:
            worst_up = st.n_plus if worst_up is None else min(worst_up, st.n_plus)
            if st.n_plus < 2 * ns:
                up_bad.append(i)
    passed = not down_bad and not up_bad
    report = CheckReport(
        assertion="every down-degree is <= N_small and every eligible up-degree "
                  "is >= 2*N_small",
        bound=float(2 * ns),
        measured=float(worst_up) if worst_up is not None else float("nan"),
        passed=passed,
        witness=down_bad[0] if down_bad else (up_bad[0] if up_bad else None),
        detail={
            "N_small": ns,
            "max_down_degree": worst_down,
            "min_eligible_up_degree": worst_up,
            "down_violations": len(down_bad),
            "up_violations": len(up_bad),
            "eligible_vertices": len(eligible),
            "excluded_top_level": excluded,
        },
    )
    return report


def region_multiplicity_check(
    G: CaoGraph, level: int, q: ConePoint, sample: ConeSample
) -> CheckReport:
    """Count level-``level`` net points within level-metric distance 4*delta of q.

    q must be a sampled point on the stratum at that level; the count is
    asserted to stay below N_small.
    """
    h = level * sample.r0
    if abs(q.height - h) > 1e-9:
        raise ValueError(f"q must lie on the stratum at height {h}, got {q.height}")
    lm = level_metric(sample, h, G.params.L, warn=False)
    qn = lm.node_index(q.base, h)
    count = 0
    for v in G.vertices:
        if v.level != level:
            continue
        d = lm.dist[qn, lm.node_index(v.net_point.base, h)]
        if d < 4.0 * G.params.delta:
            count += 1
    return CheckReport(
        assertion="at most N_small net points of the level sit within 4*delta of q",
        bound=float(G.params.N_small),
        measured=float(count),
        passed=bool(count <= G.params.N_small),
        witness=None if count <= G.params.N_small else (level, q.base),
        detail={"count": count},
    )


def laplacian_height(G: CaoGraph) -> np.ndarray:
    """Graph Laplacian of the height function: mean neighbor height minus own.

    Equals r0 * (#up - #down) / #all because neighbor heights differ by
    exactly one level step.  Raises IsolatedVertex on degree-0 vertices.
    """
    h = G.heights()
    out = np.empty(G.n_vertices)
    for i in range(G.n_vertices):
        nbrs = G.neighbors(i)
        if not nbrs:
            raise IsolatedVertex(f"vertex {i} has no neighbors")
        out[i] = float(np.mean([h[j] for j in nbrs]) - h[i])
    return out


def lipschitz_check(G: CaoGraph) -> CheckReport:
    """Adjacent vertices differ in height by at most r0."""
    h = G.heights()
    worst = 0.0
    witness = None
    for a, b in G.edges:
        gap = abs(float(h[a] - h[b]))
        if gap > worst:
            worst, witness = gap, (a, b)
    passed = bool(worst <= G.params.r0 + 1e-9)
    return CheckReport(
        assertion="height changes by at most r0 along every edge",
        bound=float(G.params.r0), measured=worst, passed=passed,
        witness=None if passed else witness,
        detail={"edges_checked": len(G.edges)},
    )


def valency_check(G: CaoGraph) -> CheckReport:
    """Max degree bounded by the measured N_big."""
    degs = [G.degree(i) for i in range(G.n_vertices)]
    measured = max(degs) if degs else 0
    passed = bool(measured <= G.params.N_big)
    return CheckReport(
        assertion="every degree is at most N_big",
        bound=float(G.params.N_big), measured=float(measured), passed=passed,
        witness=None if passed else int(np.argmax(degs)),
        detail={"n_vertices": G.n_vertices},
    )


def net_quality_check(G: CaoGraph, sample: ConeSample) -> CheckReport:
    """Per-level nets are delta-separated and delta-cover their stratum
    under the level metric."""
    worst_sep = np.inf
    worst_cover = 0.0
    witness = None
    for level in range(G.depth + 1):
        h = level * sample.r0
        lm = level_metric(sample, h, G.params.L, warn=False)
        stratum = sample.stratum(level)
        rows = np.array([lm.node_index(int(sample.bases[i]), h) for i in stratum])
        dist = lm.dist[np.ix_(rows, rows)]
        base_row = {int(sample.bases[i]): k for k, i in enumerate(stratum)}
        net_rows = sorted(base_row[v.net_point.base]
                          for v in G.vertices if v.level == level)
        sub = dist[np.ix_(net_rows, net_rows)]
        if len(net_rows) > 1:
            off = sub + np.diag(np.full(len(net_rows), np.inf))
            sep = float(off.min())
            if sep < worst_sep:
                worst_sep = sep
                if sep < G.params.delta:
                    witness = ("separation", level)
        cover = float(dist[:, net_rows].min(axis=1).max())
        if cover > worst_cover:
            worst_cover = cover
            if cover >= G.params.delta:
                witness = ("covering", level)
    passed = bool(
        (not np.isfinite(worst_sep) or worst_sep >= G.params.delta)
        and worst_cover < G.params.delta
    )
    return CheckReport(
        assertion="each level net is delta-separated and delta-covers its stratum",
        bound=float(G.params.delta),
        measured=worst_cover,
        passed=passed,
        witness=witness if not passed else None,
        detail={"min_net_separation": None if not np.isfinite(worst_sep) else worst_sep,
                "max_covering_radius": worst_cover},
    )


def edge_length_check(G: CaoGraph, sample: ConeSample) -> CheckReport:
    """Every edge joins vertices at cone distance < 8*r0."""
    rho = _vertex_rho(G, sample)
    bound = 8.0 * G.params.r0
    worst = 0.0
    witness = None
    for a, b in G.edges:
        if rho[a, b] > worst:
            worst = float(rho[a, b])
            witness = (a, b)
    passed = bool(worst < bound)
    return CheckReport(
        assertion="adjacent vertices lie within cone distance 8*r0",
        bound=bound, measured=worst, passed=passed,
        witness=None if passed else witness,
        detail={"edges_checked": len(G.edges)},
    )
