"""Shared fixtures and the acceptance-criteria reporting hook.

Acceptance tests call ``record(n, passed, detail)`` before their asserts so
that every criterion prints exactly one PASS/FAIL line in the terminal
summary (and in acceptance_report.txt) even when the assert fires.
"""
from __future__ import annotations

from pathlib import Path

import pytest

from coarselab import (
    ConeSample,
    build_cao_graph,
    calibrate,
    circle_sample,
    estimate_properness_scale,
)

_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def record():
    """Collect one (passed, detail) entry per acceptance criterion."""

    def _record(num: int, passed: bool, detail: str = "") -> None:
        _RESULTS[int(num)] = (bool(passed), str(detail))

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    lines = []
    for n in sorted(_RESULTS):
        passed, detail = _RESULTS[n]
        status = "PASS" if passed else "FAIL"
        suffix = f" -- {detail}" if detail else ""
        lines.append(f"CRITERION {n}: {status}{suffix}")
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    out = Path(__file__).resolve().parent.parent / "acceptance_report.txt"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")


@pytest.fixture(scope="session")
def circle64():
    """Calibrated depth-5 cone sample and graph over the 64-point circle.

    Shared by the graph-level acceptance criteria; building it once keeps the
    whole suite inside the runtime budgets.
    """
    Z = circle_sample(64)
    r_b = estimate_properness_scale(Z.dist)
    sample, params = calibrate(Z, mu=0.0, r_b=r_b, depth=5)
    graph = build_cao_graph(sample, params, depth=5)
    return {"Z": Z, "r_b": r_b, "sample": sample, "params": params, "graph": graph}


@pytest.fixture(scope="session")
def circle64_deep(circle64):
    """Depth-7 extension of the calibrated circle sample, for truncation sweeps."""
    params = circle64["params"]
    sample = ConeSample(circle64["Z"], params.r0, 7)
    graphs = {d: build_cao_graph(sample, params, depth=d) for d in range(3, 8)}
    return {"sample": sample, "params": params, "graphs": graphs}
