"""Tests for the built-in generators and the CSV / point-cloud loaders."""
from __future__ import annotations

import numpy as np
import pytest

from coarselab import (
    FiniteMetricSpace,
    cantor_sample,
    circle_sample,
    from_generator_spec,
    is_generator_spec,
    load_distance_csv,
    load_point_cloud,
    save_distance_csv,
    two_intervals,
    uniform_simplex,
    validate_metric,
)


class TestGenerators:
    def test_circle_arc_metric(self):
        M = circle_sample(8)
        assert M.n == 8
        assert M.labels[0] == "c0" and M.labels[-1] == "c7"
        assert M.dist[0, 1] == pytest.approx(2 * np.pi / 8)
        assert M.dist[0, 4] == pytest.approx(np.pi)
        assert M.dist[0, 5] == pytest.approx(M.dist[0, 3])  # wraps the short way
        assert M.diameter == pytest.approx(np.pi)
        validate_metric(M.dist)

    def test_cantor_gap_hierarchy(self):
        M = cantor_sample(2)
        assert M.n == 4
        # midpoints of the four stage-2 intervals: 1/18, 2/9+1/18, 2/3+1/18, 8/9+1/18
        assert M.dist[0, 1] == pytest.approx(2 / 9)     # within the left third
        assert M.dist[1, 2] == pytest.approx(4 / 9)     # across the removed middle
        assert M.dist[2, 3] == pytest.approx(2 / 9)
        assert M.mesh() == pytest.approx(2 / 9)
        validate_metric(M.dist)

    def test_cantor_sizes(self):
        for depth in range(4):
            assert cantor_sample(depth).n == 2 ** depth

    def test_two_intervals_structure(self):
        M = two_intervals(4, gap=0.5)
        assert M.n == 8
        assert M.labels[:4] == ["a0", "a1", "a2", "a3"]
        assert M.labels[4:] == ["b0", "b1", "b2", "b3"]
        assert M.dist[0, 3] == pytest.approx(1.0)       # within the left interval
        assert M.dist[3, 4] == pytest.approx(0.5)       # across the gap
        assert M.diameter == pytest.approx(2.5)
        validate_metric(M.dist)

    def test_uniform_simplex(self):
        M = uniform_simplex(5)
        assert np.allclose(M.dist, 1 - np.eye(5))
        validate_metric(M.dist)

    def test_generator_argument_validation(self):
        with pytest.raises(ValueError):
            circle_sample(0)
        with pytest.raises(ValueError):
            cantor_sample(-1)
        with pytest.raises(ValueError):
            two_intervals(1, 1.0)
        with pytest.raises(ValueError):
            two_intervals(4, 0.0)
        with pytest.raises(ValueError):
            uniform_simplex(0)


class TestGeneratorSpecs:
    def test_recognizer(self):
        assert is_generator_spec("circle:64")
        assert is_generator_spec("two_intervals:16:1.0")
        assert not is_generator_spec("circle")          # missing argument
        assert not is_generator_spec("line:64")         # unknown name
        assert not is_generator_spec("matrix.csv")

    def test_round_trip_values(self):
        assert from_generator_spec("circle:16").n == 16
        assert from_generator_spec("cantor:3").n == 8
        assert from_generator_spec("two_intervals:5:0.25").n == 10
        assert from_generator_spec("simplex:7").n == 7

    def test_spec_errors(self):
        with pytest.raises(ValueError):
            from_generator_spec("unknown:3")
        with pytest.raises(ValueError):
            from_generator_spec("two_intervals:5")      # missing gap
        with pytest.raises(ValueError):
            from_generator_spec("circle:16:2")          # extra argument


class TestDistanceCsv:
    def test_round_trip(self, tmp_path):
        M = two_intervals(3, 0.5)
        path = tmp_path / "space.csv"
        save_distance_csv(M, path)
        M2 = load_distance_csv(path)
        assert M2.labels == M.labels
        assert np.allclose(M2.dist, M.dist)

    def test_label_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(",x,y\nx,0,1\nz,1,0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="labels"):
            load_distance_csv(path)

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(",x,y\nx,0,1\ny,1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="entries"):
            load_distance_csv(path)

    def test_non_numeric_cell_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(",x,y\nx,0,one\ny,1,0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="non-numeric"):
            load_distance_csv(path)

    def test_non_utf8_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_bytes(b",x\nx,\xff0\n")
        with pytest.raises(UnicodeDecodeError):
            load_distance_csv(path)

    def test_metric_axioms_enforced_on_load(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(",x,y\nx,0,1\ny,2,0\n", encoding="utf-8")
        from coarselab import AsymmetryError

        with pytest.raises(AsymmetryError):
            load_distance_csv(path)


class TestPointCloud:
    def _write(self, tmp_path, text):
        path = tmp_path / "cloud.csv"
        path.write_text(text, encoding="utf-8")
        return path

    def test_euclidean(self, tmp_path):
        path = self._write(tmp_path, "0,0\n3,4\n")
        M = load_point_cloud(path, metric="euclidean")
        assert M.dist[0, 1] == pytest.approx(5.0)

    def test_chebyshev_and_manhattan(self, tmp_path):
        path = self._write(tmp_path, "0,0\n3,4\n")
        assert load_point_cloud(path, metric="chebyshev").dist[0, 1] == pytest.approx(4.0)
        assert load_point_cloud(path, metric="manhattan").dist[0, 1] == pytest.approx(7.0)

    def test_labelled_rows(self, tmp_path):
        path = self._write(tmp_path, "p,0,0\nq,1,0\n")
        M = load_point_cloud(path)
        assert M.labels == ["p", "q"]
        assert M.dist[0, 1] == pytest.approx(1.0)

    def test_dimension_mismatch_rejected(self, tmp_path):
        path = self._write(tmp_path, "0,0\n1,0,0\n")
        with pytest.raises(ValueError, match="dimensions"):
            load_point_cloud(path)

    def test_unknown_metric_rejected(self, tmp_path):
        path = self._write(tmp_path, "0\n1\n")
        with pytest.raises(ValueError, match="metric"):
            load_point_cloud(path, metric="cosine")

    def test_result_is_a_valid_space(self, tmp_path):
        path = self._write(tmp_path, "0,0\n1,0\n0,1\n2,2\n")
        M = load_point_cloud(path)
        assert isinstance(M, FiniteMetricSpace)
        validate_metric(M.dist)
