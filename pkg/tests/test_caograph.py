"""Tests for graph parameters, calibration, construction, and its check suite."""
from __future__ import annotations

import numpy as np
import pytest

from coarselab import (
    CaoGraph,
    CaoParams,
    CaoVertex,
    ConePoint,
    ConeSample,
    DegreeStats,
    EmptyLevel,
    InfeasibleParams,
    IsolatedVertex,
    SeparationViolation,
    asymmetry_check,
    build_cao_graph,
    calibrate,
    choose_params,
    circle_sample,
    coboundedness_check,
    degree_stats,
    edge_length_check,
    estimate_properness_scale,
    laplacian_height,
    lipschitz_check,
    net_quality_check,
    qi_check,
    region_multiplicity_check,
    separation_check,
    two_intervals,
    uniform_simplex,
    valency_check,
)

KAPPA_1 = 1.744857614113986


def hand_params(**overrides) -> CaoParams:
    """A small hand-checkable parameter set: kappa^6.7 = 41.6 > 8*2.2*2 = 35.2."""
    fields = dict(mu=0.0, L=1.0, c=2.0, delta=2.2, r0=6.7, r_b=0.0,
                  kappa=KAPPA_1, N_small=2, N_big=10)
    fields.update(overrides)
    return CaoParams(**fields)


def star_graph(params: CaoParams) -> CaoGraph:
    """Center at level 1 with 2 neighbors below and 4 above (depth 2)."""
    d, r0 = params.delta, params.r0

    def vert(i, level, base):
        h = level * r0
        return CaoVertex(level=level, net_index=i, net_point=ConePoint(base, h),
                         vertex_point=ConePoint(base, h + d), region_bases=frozenset([base]))

    vertices = [vert(0, 0, 0), vert(1, 0, 1), vert(0, 1, 0),
                vert(0, 2, 0), vert(1, 2, 1), vert(2, 2, 2), vert(3, 2, 3)]
    edges = [(0, 2), (1, 2), (2, 3), (2, 4), (2, 5), (2, 6)]
    return CaoGraph(params, vertices, edges, depth=2)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

class TestCaoParams:
    def test_valid_hand_params(self):
        p = hand_params()
        assert p.separation == pytest.approx(1.1)

    @pytest.mark.parametrize(
        "overrides",
        [
            {"L": 2.0},                 # L must equal 1 + 2*mu
            {"c": 3.0},                 # c must equal 2*L
            {"delta": 2.3},             # needs r0/3 > delta
            {"delta": 1.9},             # needs delta > c*(r_b + 1)
            {"kappa": 1.0},             # needs kappa > 1
            {"N_small": 100},           # needs kappa^r0 > 8*delta*N_small
        ],
    )
    def test_each_constraint_enforced(self, overrides):
        with pytest.raises(InfeasibleParams):
            hand_params(**overrides)

    def test_json_round_trip(self):
        p = hand_params()
        assert CaoParams.from_json_dict(p.to_json_dict()) == p


# ---------------------------------------------------------------------------
# parameter selection and calibration
# ---------------------------------------------------------------------------

class TestChooseParams:
    def test_two_point_base_is_too_coarse(self):
        Z = uniform_simplex(2)
        sample = ConeSample(Z, r0=1.0, depth=1)
        with pytest.raises(InfeasibleParams):
            choose_params(Z, sample, mu=0.0, r_b=0.0)

    def test_r0_floor_respected(self):
        Z = circle_sample(16)
        r_b = estimate_properness_scale(Z.dist)
        sample, params = calibrate(Z, mu=0.0, r_b=r_b, depth=1)
        forced = choose_params(Z, sample, 0.0, r_b, r0_floor=params.r0 * 2)
        assert forced.r0 >= params.r0 * 2


class TestCalibrate:
    def test_circle_fixpoint(self):
        Z = circle_sample(16)
        r_b = estimate_properness_scale(Z.dist)
        sample, params = calibrate(Z, mu=0.0, r_b=r_b, depth=2)
        assert sample.r0 == params.r0
        assert sample.depth == 2
        # the returned scale reproduces itself on its own sample
        again = choose_params(Z, sample, 0.0, r_b, r0_floor=params.r0)
        assert again.r0 == pytest.approx(params.r0, rel=1e-9)

    def test_interval_two_cycle_settles(self):
        # this base space makes the measured covering count flip between two
        # values as r0 flips; calibration must still land on a stable scale
        Z = two_intervals(8, 1.0).subspace(range(8))
        r_b = estimate_properness_scale(Z.dist)
        sample, params = calibrate(Z, mu=0.0, r_b=r_b, depth=1)
        again = choose_params(Z, sample, 0.0, r_b, r0_floor=params.r0)
        assert again.r0 == pytest.approx(params.r0, rel=1e-9)

    def test_deterministic(self):
        Z = circle_sample(16)
        r_b = estimate_properness_scale(Z.dist)
        _, p1 = calibrate(Z, mu=0.0, r_b=r_b, depth=1)
        _, p2 = calibrate(Z, mu=0.0, r_b=r_b, depth=1)
        assert p1 == p2


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def circle16_graph():
    Z = circle_sample(16)
    r_b = estimate_properness_scale(Z.dist)
    sample, params = calibrate(Z, mu=0.0, r_b=r_b, depth=2)
    graph = build_cao_graph(sample, params, depth=2)
    return Z, sample, params, graph


class TestBuildCaoGraph:
    def test_vertices_are_lifted_net_points(self, circle16_graph):
        _, sample, params, G = circle16_graph
        for v in G.vertices:
            assert v.net_point.height == v.level * sample.r0
            assert v.vertex_point.height == pytest.approx(v.level * sample.r0 + params.delta)
            assert v.net_point.base in v.region_bases

    def test_high_strata_are_level_metric_isolated(self, circle16_graph):
        # above level 0 every vertical or horizontal step costs more than L,
        # so each point is its own net member: 16 vertices per level
        _, _, _, G = circle16_graph
        counts = np.bincount(G.levels(), minlength=3)
        assert counts[1] == 16 and counts[2] == 16
        assert counts[0] >= 1

    def test_connected(self, circle16_graph):
        _, _, _, G = circle16_graph
        assert np.isfinite(G.hop_matrix()).all()

    def test_geometric_checks_pass(self, circle16_graph):
        _, sample, _, G = circle16_graph
        assert separation_check(G, sample).passed
        assert coboundedness_check(G, sample).passed
        assert net_quality_check(G, sample).passed
        assert lipschitz_check(G).passed
        assert valency_check(G).passed
        assert edge_length_check(G, sample).passed
        assert qi_check(G, sample, n_pairs=100).passed

    def test_region_multiplicity(self, circle16_graph):
        _, sample, _, G = circle16_graph
        report = region_multiplicity_check(G, 1, ConePoint(0, sample.r0), sample)
        assert report.passed

    def test_same_seed_reproduces_graph(self, circle16_graph):
        _, sample, params, G = circle16_graph
        again = build_cao_graph(sample, params, depth=2)
        assert again.edges == G.edges
        assert again.vertices == G.vertices
        seeded = build_cao_graph(sample, params, depth=2, seed=7)
        twice = build_cao_graph(sample, params, depth=2, seed=7)
        assert seeded.edges == twice.edges and seeded.vertices == twice.vertices

    def test_depth_beyond_sample_rejected(self, circle16_graph):
        _, sample, params, _ = circle16_graph
        with pytest.raises(EmptyLevel):
            build_cao_graph(sample, params, depth=sample.depth + 1)

    def test_json_round_trip(self, circle16_graph, tmp_path):
        _, _, _, G = circle16_graph
        path = tmp_path / "graph.json"
        G.save_json(path, check_results={"demo": {"pass": True}})
        back = CaoGraph.load_json(path)
        assert back.params == G.params
        assert back.vertices == G.vertices
        assert back.edges == G.edges
        assert back.depth == G.depth

    def test_dot_output(self, circle16_graph):
        _, _, _, G = circle16_graph
        dot = G.to_dot()
        assert dot.startswith("graph cone_net {")
        assert 'n0 [label="0:0"' in dot
        assert " -- " in dot


class TestCaoGraphContainer:
    def test_edges_canonicalized(self):
        p = hand_params()
        G = star_graph(p)
        rebuilt = CaoGraph(p, G.vertices, [(2, 0), (0, 2)], depth=2)
        assert rebuilt.edges == [(0, 2)]

    def test_self_loop_rejected(self):
        p = hand_params()
        with pytest.raises(ValueError):
            CaoGraph(p, star_graph(p).vertices, [(1, 1)], depth=2)

    def test_interior_masks(self):
        G = star_graph(hand_params())
        assert G.interior().tolist() == [0, 1, 2]
        assert G.interior(require_height_above_delta=True).tolist() == [2]

    def test_hop_matrix_values(self):
        G = star_graph(hand_params())
        hops = G.hop_matrix()
        assert hops[2, 3] == 1
        assert hops[0, 3] == 2
        assert hops[3, 4] == 2


# ---------------------------------------------------------------------------
# degree asymmetry and the height Laplacian
# ---------------------------------------------------------------------------

class TestDegreeChecks:
    def test_degree_stats(self):
        G = star_graph(hand_params())
        assert degree_stats(G, 2) == DegreeStats(n_all=6, n_plus=4, n_minus=2)
        assert degree_stats(G, 0) == DegreeStats(n_all=1, n_plus=1, n_minus=0)

    def test_asymmetry_check_passes_on_star(self):
        report = asymmetry_check(star_graph(hand_params()))
        assert report.passed
        assert report.detail["max_down_degree"] == 2
        assert report.detail["min_eligible_up_degree"] == 4
        assert len(report.detail["excluded_top_level"]) == 4

    def test_asymmetry_check_detects_down_degree_violation(self):
        report = asymmetry_check(star_graph(hand_params(N_small=1)))
        assert not report.passed
        assert report.detail["down_violations"] == 1
        assert report.witness == 2

    def test_laplacian_center_value(self):
        p = hand_params()
        G = star_graph(p)
        lap = laplacian_height(G)
        # center: (2 below + 4 above) averaging to height + r0/3
        assert lap[2] == pytest.approx(p.r0 / 3)
        assert lap[0] == pytest.approx(p.r0)       # leaf below the center
        assert lap[3] == pytest.approx(-p.r0)      # leaf above the center

    def test_laplacian_rejects_isolated_vertices(self):
        p = hand_params()
        verts = star_graph(p).vertices
        G = CaoGraph(p, verts, [(0, 2)], depth=2)
        with pytest.raises(IsolatedVertex):
            laplacian_height(G)

    def test_lipschitz_violation_detected(self):
        p = hand_params()
        verts = star_graph(p).vertices
        G = CaoGraph(p, verts, [(0, 3)], depth=2)  # skips a level: gap 2*r0
        report = lipschitz_check(G)
        assert not report.passed
        assert report.measured == pytest.approx(2 * p.r0)

    def test_valency_violation_detected(self):
        G = star_graph(hand_params(N_big=5))
        report = valency_check(G)
        assert not report.passed and report.measured == 6


class TestSeparationViolationPath:
    def test_duplicate_vertices_fail_separation(self):
        p = hand_params()
        Z = circle_sample(4)
        sample = ConeSample(Z, r0=p.r0, depth=2)
        dup = CaoVertex(level=1, net_index=5, net_point=ConePoint(0, p.r0),
                        vertex_point=ConePoint(0, p.r0 + p.delta), region_bases=frozenset([0]))
        verts = star_graph(p).vertices + [dup]  # same point as vertex 2
        G = CaoGraph(p, verts, [(0, 2)], depth=2)
        report = separation_check(G, sample)
        assert not report.passed and report.measured == 0.0
        with pytest.raises(SeparationViolation):
            separation_check(G, sample, strict=True)


class TestQiCheckEdgeCases:
    def test_explicit_pairs_and_skipped_diagonal(self, circle16_graph):
        _, sample, _, G = circle16_graph
        report = qi_check(G, sample, pairs=[(0, 0), (0, 1)])
        assert report.passed
        assert report.detail["pairs_checked"] == 2
        assert report.detail["violations"] == 0
