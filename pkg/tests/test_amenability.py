"""Tests for boundaries, isoperimetric checks, Cheeger constants, certificates."""
from __future__ import annotations

import itertools

import numpy as np
import pytest

from coarselab import (
    CaoGraph,
    CaoVertex,
    ConePoint,
    ConeSample,
    NoInteriorVertices,
    NotConnected,
    QuasiLattice,
    TooLarge,
    boundary,
    cheeger_exact,
    cheeger_sweep,
    circle_sample,
    combine_components,
    isoperimetric_check,
    isoperimetric_constant_exact,
    nonamenability_certificate,
)
from test_caograph import hand_params, star_graph


def line_lattice(n: int) -> QuasiLattice:
    pts = np.arange(n, dtype=float)
    return QuasiLattice(np.abs(pts[:, None] - pts[None, :]), np.arange(n))


def path_adj(n: int) -> np.ndarray:
    adj = np.zeros((n, n))
    for i in range(n - 1):
        adj[i, i + 1] = adj[i + 1, i] = 1
    return adj


def cycle_adj(n: int) -> np.ndarray:
    adj = path_adj(n)
    adj[0, n - 1] = adj[n - 1, 0] = 1
    return adj


def complete_adj(n: int) -> np.ndarray:
    return np.ones((n, n)) - np.eye(n)


def random_connected_adj(rng, n: int) -> np.ndarray:
    adj = np.zeros((n, n))
    for child in range(1, n):
        parent = int(rng.integers(0, child))
        adj[child, parent] = adj[parent, child] = 1
    extra = rng.random((n, n)) < 0.2
    extra = np.triu(extra, k=1)
    adj = np.clip(adj + extra + extra.T, 0, 1)
    np.fill_diagonal(adj, 0)
    return adj


def brute_force_vertex_boundary(F: set[int], n: int, adj: np.ndarray) -> set[int]:
    out = set()
    for x in range(n):
        touches_F = any(adj[x, j] and j in F for j in range(n))
        touches_comp = any(adj[x, j] and j not in F for j in range(n))
        if (x in F and touches_comp) or (x not in F and touches_F):
            out.add(x)
    return out


# ---------------------------------------------------------------------------
# coarse boundaries on quasi-lattices
# ---------------------------------------------------------------------------

class TestBoundary:
    def test_line_example(self):
        lat = line_lattice(11)
        got = boundary(lat, [3, 4, 5], r=1.5)
        assert got.tolist() == [2, 3, 5, 6]

    def test_empty_and_full_sets_have_empty_boundary(self):
        lat = line_lattice(11)
        assert boundary(lat, [], r=1.5).size == 0
        assert boundary(lat, range(11), r=1.5).size == 0

    def test_symmetric_under_complement(self):
        lat = line_lattice(12)
        rng = np.random.default_rng(0)
        for _ in range(20):
            F = [int(i) for i in np.where(rng.random(12) < 0.4)[0]]
            comp = sorted(set(range(12)) - set(F))
            r = float(rng.uniform(0.5, 3.0))
            assert boundary(lat, F, r).tolist() == boundary(lat, comp, r).tolist()

    def test_non_member_subset_rejected(self):
        lat = QuasiLattice(line_lattice(6).ambient_dist, members=[0, 1, 2])
        with pytest.raises(ValueError):
            boundary(lat, [5], r=1.0)

    def test_bad_radius_rejected(self):
        with pytest.raises(ValueError):
            boundary(line_lattice(4), [0], r=0.0)

    def test_from_cone_and_from_graph(self):
        sample = ConeSample(circle_sample(6), r0=1.0, depth=1)
        lat = QuasiLattice.from_cone(sample)
        assert len(lat.members) == sample.n_points
        G = star_graph(hand_params())
        glat = QuasiLattice.from_graph(G)
        assert len(glat.members) == G.n_vertices
        # hop-metric boundary of the bottom pair at radius 1.5
        got = boundary(glat, [0, 1], r=1.5)
        assert got.tolist() == [0, 1, 2]


class TestIsoperimetricCheck:
    def test_passing_constant(self):
        report = isoperimetric_check(line_lattice(11), [3, 4, 5], r=1.5, C=1.0)
        assert report.passed
        assert report.F_size == 3 and report.boundary_size == 4
        assert report.C_witness == pytest.approx(0.75)

    def test_failing_constant(self):
        report = isoperimetric_check(line_lattice(11), [3, 4, 5], r=1.5, C=0.5)
        assert not report.passed

    def test_empty_boundary_is_infinite_witness(self):
        lat = QuasiLattice(line_lattice(2).ambient_dist, members=[0, 1])
        report = isoperimetric_check(lat, [0, 1], r=0.5, C=100.0)
        assert not report.passed
        assert np.isinf(report.C_witness)
        assert report.to_json_dict()["C_witness"] is None


# ---------------------------------------------------------------------------
# exact Cheeger constants
# ---------------------------------------------------------------------------

class TestCheegerExact:
    def test_complete_graph(self):
        est = cheeger_exact(complete_adj(4))
        assert est.value == pytest.approx(2.0)

    def test_eight_cycle_matches_brute_force(self):
        adj = cycle_adj(8)
        est = cheeger_exact(adj)
        best = np.inf
        for k in range(1, 5):
            for F in itertools.combinations(range(8), k):
                b = brute_force_vertex_boundary(set(F), 8, adj)
                best = min(best, len(b) / k)
        assert est.value == pytest.approx(best) == pytest.approx(1.0)
        # the witness attains the reported value
        wb = brute_force_vertex_boundary(set(est.witness_set), 8, adj)
        assert len(wb) / len(est.witness_set) == pytest.approx(est.value)

    def test_single_vertex_is_infinite(self):
        assert np.isinf(cheeger_exact(np.zeros((1, 1))).value)

    def test_size_cap(self):
        with pytest.raises(TooLarge):
            cheeger_exact(path_adj(21))
        cheeger_exact(path_adj(21), max_n=21)  # explicit opt-in works

    def test_asymmetric_matrix_rejected(self):
        bad = path_adj(4)
        bad[0, 1] = 0
        with pytest.raises(ValueError):
            cheeger_exact(bad)


class TestIsoperimetricConstantExact:
    def test_path_graph(self):
        # best subset of P10 is all-but-one-end: 9 vertices, boundary {8, 9}
        value, witness = isoperimetric_constant_exact(path_adj(10))
        assert value == pytest.approx(4.5)
        assert len(witness) == 9

    def test_complete_graph(self):
        value, _ = isoperimetric_constant_exact(complete_adj(4))
        assert value == pytest.approx(0.75)

    def test_disconnected_graph_is_infinite(self):
        adj = np.zeros((4, 4))
        adj[0, 1] = adj[1, 0] = adj[2, 3] = adj[3, 2] = 1
        value, witness = isoperimetric_constant_exact(adj)
        assert np.isinf(value)
        assert witness in ((0, 1), (2, 3))

    def test_bounds_every_proper_subset(self):
        rng = np.random.default_rng(1)
        adj = random_connected_adj(rng, 9)
        value, _ = isoperimetric_constant_exact(adj)
        for k in range(1, 9):
            for F in itertools.combinations(range(9), k):
                b = brute_force_vertex_boundary(set(F), 9, adj)
                assert len(F) <= value * len(b) + 1e-9


# ---------------------------------------------------------------------------
# sweep estimates
# ---------------------------------------------------------------------------

class TestCheegerSweep:
    def test_path_graph_half_cut(self):
        est = cheeger_sweep(path_adj(10))
        assert est.value == pytest.approx(0.4)
        assert len(est.witness_set) == 5

    def test_disconnected_rejected(self):
        adj = np.zeros((4, 4))
        adj[0, 1] = adj[1, 0] = 1
        with pytest.raises(NotConnected):
            cheeger_sweep(adj)

    def test_witness_attains_value(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            n = int(rng.integers(4, 13))
            adj = random_connected_adj(rng, n)
            est = cheeger_sweep(adj)
            b = brute_force_vertex_boundary(set(est.witness_set), n, adj)
            assert len(b) / len(est.witness_set) == pytest.approx(est.value)

    def test_never_below_exact(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(3, 13))
            adj = random_connected_adj(rng, n)
            assert cheeger_sweep(adj).value >= cheeger_exact(adj).value - 1e-12


# ---------------------------------------------------------------------------
# certificates and union combination
# ---------------------------------------------------------------------------

class TestNonamenabilityCertificate:
    def test_issued_on_star(self):
        p = hand_params()
        cert = nonamenability_certificate(star_graph(p))
        assert cert.issued
        assert cert.min_laplacian_ratio == pytest.approx(1 / 3)
        assert cert.target_ratio == pytest.approx(1 / p.N_big)
        assert cert.interior_vertex_count == 3
        assert cert.excluded_top_level_count == 4
        assert cert.witness is None
        assert cert.lipschitz_ok
        assert cert.cheeger_exact_value is not None
        assert cert.cheeger_sweep_value >= cert.cheeger_exact_value - 1e-12
        exact_iso, _ = isoperimetric_constant_exact(star_graph(p))
        assert cert.iso_constant == pytest.approx(exact_iso)
        assert cert.iso_radius == 1.5

    def test_refused_on_flat_column(self):
        p = hand_params()
        d, r0 = p.delta, p.r0

        def vert(i, level):
            h = level * r0
            return CaoVertex(level=level, net_index=i, net_point=ConePoint(0, h),
                             vertex_point=ConePoint(0, h + d), region_bases=frozenset([0]))

        G = CaoGraph(p, [vert(0, 0), vert(0, 1), vert(0, 2)], [(0, 1), (1, 2)], depth=2)
        cert = nonamenability_certificate(G)
        assert not cert.issued
        assert cert.min_laplacian_ratio == pytest.approx(0.0)
        assert cert.witness == 1
        assert cert.iso_constant is None

    def test_no_interior_vertices_raises(self):
        p = hand_params()
        v = CaoVertex(level=0, net_index=0, net_point=ConePoint(0, 0),
                      vertex_point=ConePoint(0, p.delta), region_bases=frozenset([0]))
        G = CaoGraph(p, [v], [], depth=0)
        with pytest.raises(NoInteriorVertices):
            nonamenability_certificate(G)

    def test_json_shape(self):
        cert = nonamenability_certificate(star_graph(hand_params()))
        obj = cert.to_json_dict()
        assert obj["issued"] is True
        assert set(obj["cheeger"]) == {"sweep", "exact"}
        assert obj["min_laplacian_ratio"] == pytest.approx(1 / 3)
        assert isinstance(obj["scope"], str) and obj["scope"]


class TestCombineComponents:
    def test_componentwise_maxima(self):
        assert combine_components([(2.0, 1.0), (5.0, 0.5)]) == (5.0, 1.0)
        assert combine_components([(2.0, 1.0)]) == (2.0, 1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            combine_components([])

    def test_combined_constant_bounds_union_subsets(self):
        # two disjoint path components inside one ambient lattice
        n = 6
        pts = np.concatenate([np.arange(n, dtype=float), np.arange(n, dtype=float) + 100.0])
        lat = QuasiLattice(np.abs(pts[:, None] - pts[None, :]), np.arange(2 * n))
        C1, w1 = isoperimetric_constant_exact(path_adj(n))
        C2, w2 = isoperimetric_constant_exact(path_adj(n))
        C, r = combine_components([(C1, 1.5), (C2, 1.5)])
        rng = np.random.default_rng(4)
        for _ in range(30):
            F = [int(i) for i in np.where(rng.random(2 * n) < 0.5)[0]]
            # keep parts proper inside their components
            F = [i for i in F if i % n != 0]
            if not F:
                continue
            got = isoperimetric_check(lat, F, r=r, C=C)
            assert got.passed
