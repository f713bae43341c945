"""Tests for check reports, deterministic writers, and the thread cap."""
from __future__ import annotations

import numpy as np
import pytest

from coarselab import CheckReport, read_json, write_isoperimetric_csv, write_json
from coarselab.report import read_isoperimetric_csv, render_profile_svg
from coarselab.util import thread_cap, thread_map


class TestCheckReport:
    def test_json_shape(self):
        rep = CheckReport(assertion="x", bound=np.float64(1.5), measured=np.float64(0.5),
                          passed=True, detail={"k": np.int64(3)})
        obj = rep.to_json_dict()
        assert obj == {"assertion": "x", "bound": 1.5, "measured": 0.5,
                       "pass": True, "detail": {"k": 3}}
        assert isinstance(obj["bound"], float) and isinstance(obj["detail"]["k"], int)

    def test_witness_only_when_present(self):
        rep = CheckReport(assertion="x", bound=1.0, measured=2.0, passed=False, witness=(3, 4))
        assert rep.to_json_dict()["witness"] == [3, 4]
        assert "witness" not in CheckReport("x", 1.0, 0.0, True).to_json_dict()

    def test_infinities_become_tokens(self):
        rep = CheckReport(assertion="x", bound=float("inf"), measured=float("nan"), passed=True)
        obj = rep.to_json_dict()
        assert obj["bound"] == "inf"
        assert obj["measured"] == "nan"


class TestJsonWriter:
    def test_round_trip_and_determinism(self, tmp_path):
        payload = {"b": [1, 2, np.float64(3.5)], "a": {"nested": np.int32(7)}}
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        write_json(p1, payload)
        write_json(p2, payload)
        assert p1.read_bytes() == p2.read_bytes()
        assert read_json(p1) == {"a": {"nested": 7}, "b": [1, 2, 3.5]}
        assert p1.read_text().startswith("{\n  \"a\"")  # sorted keys


class TestProfileCsv:
    def test_round_trip(self, tmp_path):
        rows = [("c0:ball_1", 5, 2, 2.5), ("c0:ball_2", 9, 3, 3.0)]
        path = tmp_path / "profile.csv"
        write_isoperimetric_csv(path, rows)
        assert read_isoperimetric_csv(path) == rows
        header = path.read_text().splitlines()[0]
        assert header == "subset_id,size,boundary_size,ratio"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_isoperimetric_csv(path)


class TestProfileSvg:
    def test_byte_reproducible(self, tmp_path):
        rows = [("s", 3, 2, 1.5), ("t", 6, 3, 2.0)]
        p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
        render_profile_svg(p1, rows)
        render_profile_svg(p2, rows)
        data = p1.read_bytes()
        assert data == p2.read_bytes()
        assert data.lstrip().startswith(b"<?xml")


class TestThreadCap:
    def test_default_is_serial(self, monkeypatch):
        monkeypatch.delenv("COARSELAB_THREADS", raising=False)
        assert thread_cap() == 1

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("COARSELAB_THREADS", "4")
        assert thread_cap() == 4

    def test_invalid_rejected(self, monkeypatch):
        monkeypatch.setenv("COARSELAB_THREADS", "many")
        with pytest.raises(ValueError):
            thread_cap()
        monkeypatch.setenv("COARSELAB_THREADS", "0")
        with pytest.raises(ValueError):
            thread_cap()

    def test_map_preserves_order(self, monkeypatch):
        for workers in ("1", "3"):
            monkeypatch.setenv("COARSELAB_THREADS", workers)
            assert thread_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
