"""Check reports and deterministic artifact writers (JSON, CSV, SVG)."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


@dataclass
class CheckReport:
    """Outcome of one verification: what was asserted, measured, and decided.

    ``bound`` is the threshold the assertion compares against and ``measured``
    the quantity actually computed; ``witness`` identifies the offending
    object when the check fails.  ``detail`` carries check-specific extras
    that land in the JSON report unchanged.
    """
    assertion: str
    bound: float
    measured: float
    passed: bool
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {
            "assertion": self.assertion,
            "bound": _plain(self.bound),
            "measured": _plain(self.measured),
            "pass": bool(self.passed),
        }
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.detail:
            out["detail"] = _plain(self.detail)
        return out


def _plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and (np.isinf(obj) or np.isnan(obj)):
        return repr(obj)  # JSON has no inf/nan; keep a readable token
    return obj


def write_json(path: str | Path, obj: Any) -> None:
    """Serialize deterministically: sorted keys, fixed layout, no timestamps."""
    text = json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_isoperimetric_csv(path: str | Path,
                            rows: Iterable[tuple[Any, int, int, float]]) -> None:
    """Profile rows (subset_id, size, boundary_size, ratio)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["subset_id", "size", "boundary_size", "ratio"])
        for subset_id, size, boundary_size, ratio in rows:
            w.writerow([subset_id, int(size), int(boundary_size), repr(float(ratio))])


def read_isoperimetric_csv(path: str | Path) -> list[tuple[str, int, int, float]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["subset_id", "size", "boundary_size", "ratio"]:
            raise ValueError(f"unexpected profile header: {header}")
        return [(sid, int(size), int(bsize), float(ratio))
                for sid, size, bsize, ratio in reader]


def render_profile_svg(path: str | Path,
                       rows: Sequence[tuple[Any, int, int, float]],
                       title: str = "isoperimetric profile") -> None:
    """Static SVG scatter of subset size vs boundary ratio, byte-reproducible.

    Uses the Agg backend with a fixed hash salt and no date metadata so the
    same rows always produce the same bytes.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "coarselab"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        sizes = [r[1] for r in rows]
        ratios = [r[3] for r in rows]
        ax.scatter(sizes, ratios, s=18, color="#2a6f97")
        ax.set_xlabel("#F (subset size)")
        ax.set_ylabel("#F / #boundary")
        ax.set_title(title)
        ax.grid(True, linewidth=0.4, alpha=0.5)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
