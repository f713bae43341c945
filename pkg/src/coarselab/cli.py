"""Command-line front end: validate, build, verify, certify.

Exit codes partition outcomes:
  0  success
  2  unreadable or unparseable input / bad arguments
  3  metric axiom violation in the input
  4  infeasible construction parameters
  5  a hard verification assertion failed
  6  certification refused (no certificate, or a hypothesis gate fired)

Artifacts land in the output directory::

    out/
      run_config.json
      z_space.json
      validate_report.json
      build_manifest.json
      component_<k>/
        cone_sample.json
        cao_params.json
        cao_graph.json
        cao_graph.dot
      verify_report.json
      certificate.json
      isoperimetric_profile.csv / .svg

Reports are byte-identical across runs with the same config and seed: keys
are sorted, sets are emitted in sorted order, and nothing timestamps itself.
``COARSELAB_THREADS`` caps worker threads for the heavy numeric kernels.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import io as cio
from .amenability import (
    QuasiLattice,
    combine_components,
    isoperimetric_check,
    nonamenability_certificate,
)
from .caograph import (
    CaoGraph,
    asymmetry_check,
    build_cao_graph,
    calibrate,
    coboundedness_check,
    edge_length_check,
    laplacian_height,
    lipschitz_check,
    net_quality_check,
    qi_check,
    region_multiplicity_check,
    separation_check,
    valency_check,
)
from .cone import (
    ConePoint,
    ConeSample,
    ball_height_confinement,
    cone_metric_pairs,
    kappa,
    level_expansion_check,
    segment_confinement_check,
)
from .errors import (
    CertificationFailure,
    CoarselabError,
    InfeasibleParams,
    MetricViolation,
    NoInteriorVertices,
)
from .generators import from_generator_spec, is_generator_spec
from .report import read_json, render_profile_svg, write_isoperimetric_csv, write_json
from .spaces import FiniteMetricSpace, coarse_components, covering_number, hyperbolicity_delta

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_METRIC = 3
EXIT_INFEASIBLE = 4
EXIT_VERIFY = 5
EXIT_NO_CERTIFICATE = 6

HYPERBOLICITY_EXHAUSTIVE_MAX = 128


@dataclass
class RunConfig:
    source: str
    mu: float = 0.0
    r_b: float | None = None
    depth: int = 3
    seed: int = 0
    tolerance: float = 1e-9
    epsilon: float | None = None
    out_dir: str = "out"
    format: str = "json"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")

    def to_json_dict(self) -> dict:
        return asdict(self)


def parse_config_file(path: str | Path) -> dict:
    """Flat key-value config: one `key = value` pair per line, # comments."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in RunConfig.__dataclass_fields__:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        out[key] = value
    return out


def _coerce_config(raw: dict) -> dict:
    casts = {"mu": float, "r_b": float, "depth": int, "seed": int,
             "tolerance": float, "epsilon": float, "source": str,
             "out_dir": str, "format": str}
    out = {}
    for k, v in raw.items():
        if v is None:
            continue
        out[k] = casts[k](v) if isinstance(v, str) else v
    return out


def load_space(source: str) -> FiniteMetricSpace:
    """Load a base space from a generator spec or a file path."""
    if is_generator_spec(source):
        return from_generator_spec(source)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"input not found: {source}")
    if path.suffix == ".csv":
        return cio.load_distance_csv(path)
    if path.suffix == ".json":
        obj = read_json(path)
        return FiniteMetricSpace(np.asarray(obj["matrix"], dtype=float), obj.get("labels"))
    if path.suffix in (".txt", ".xyz", ".pts"):
        return cio.load_point_cloud(path)
    raise ValueError(f"unsupported input format: {path.suffix!r} "
                     "(expected .csv distance matrix, .json space, or point cloud)")


def _write_checks_csv(path: Path, checks: dict) -> None:
    import csv
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "assertion", "bound", "measured", "pass"])
        for name in sorted(checks):
            c = checks[name]
            w.writerow([name, c["assertion"], c["bound"], c["measured"], c["pass"]])


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        Z = load_space(cfg.source)
    except MetricViolation as exc:
        _fail_report(out / "validate_report.json", cfg, "metric", exc)
        print(f"metric violation: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE

    eps = cfg.epsilon if cfg.epsilon is not None else Z.mesh() * (1 + 1e-9)
    parts = coarse_components(Z.dist, eps)
    mesh = Z.mesh()
    profile = covering_number(Z.dist, Z.diameter if Z.diameter > 0 else 1.0,
                              max(mesh, 1e-12))
    report = {
        "config": cfg.to_json_dict(),
        "n_points": Z.n,
        "diameter": Z.diameter,
        "mesh": mesh,
        "metric_valid": True,
        "components": {
            "epsilon": eps,
            "count": len(parts.blocks),
            "blocks": [sorted(b) for b in parts.blocks],
            "singletons": sum(1 for b in parts.blocks if len(b) == 1),
        },
        "covering": {"R": profile.R, "r": profile.r, "N": profile.N},
    }
    if Z.n <= HYPERBOLICITY_EXHAUSTIVE_MAX:
        hyp = hyperbolicity_delta(Z.dist)
        report["hyperbolicity"] = {"delta": hyp.delta, "exhaustive": hyp.exhaustive}
    write_json(out / "validate_report.json", report)
    if cfg.format == "csv":
        _write_checks_csv(out / "validate_report.csv", {
            "metric_axioms": {"assertion": "distance matrix satisfies the metric axioms",
                              "bound": cfg.tolerance, "measured": 0.0, "pass": True},
        })
    print(f"validate: {Z.n} points, diameter {Z.diameter:.6g}, "
          f"{len(parts.blocks)} component(s) at epsilon {eps:.6g}")
    return EXIT_OK


def _fail_report(path: Path, cfg: RunConfig, kind: str, exc: Exception) -> None:
    write_json(path, {"config": cfg.to_json_dict(), "error_kind": kind,
                      "error": str(exc), "metric_valid": kind != "metric"})


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        Z = load_space(cfg.source)
    except MetricViolation as exc:
        print(f"metric violation: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE

    eps = cfg.epsilon if cfg.epsilon is not None else Z.mesh() * (1 + 1e-9)
    parts = coarse_components(Z.dist, eps)
    write_json(out / "run_config.json", cfg.to_json_dict())
    write_json(out / "z_space.json", {
        "labels": Z.labels,
        "matrix": Z.dist.tolist(),
        "epsilon": eps,
        "components": [sorted(b) for b in parts.blocks],
    })

    built, singletons = [], []
    try:
        for k, block in enumerate(parts.blocks):
            if len(block) < 2:
                singletons.append({"component": k, "points": sorted(block)})
                continue
            Zk = Z.subspace(sorted(block))
            r_b = cfg.r_b if cfg.r_b is not None else _properness_scale(Zk)
            sample, params = calibrate(Zk, cfg.mu, r_b, cfg.depth)
            graph = build_cao_graph(sample, params, cfg.depth, seed=cfg.seed)
            comp_dir = out / f"component_{k}"
            comp_dir.mkdir(exist_ok=True)
            write_json(comp_dir / "cone_sample.json", sample.to_json_dict())
            write_json(comp_dir / "cao_params.json", params.to_json_dict())
            write_json(comp_dir / "cao_graph.json", graph.to_json_dict())
            (comp_dir / "cao_graph.dot").write_text(graph.to_dot(), encoding="utf-8")
            built.append({
                "component": k,
                "points": sorted(block),
                "n_vertices": graph.n_vertices,
                "n_edges": len(graph.edges),
                "delta": params.delta,
                "r0": params.r0,
            })
            print(f"build: component {k}: {graph.n_vertices} vertices, "
                  f"{len(graph.edges)} edges (delta={params.delta:.6g}, r0={params.r0:.6g})")
    except InfeasibleParams as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        write_json(out / "build_manifest.json", {
            "status": "infeasible", "error": str(exc),
            "built": built, "singletons": singletons,
        })
        return EXIT_INFEASIBLE

    write_json(out / "build_manifest.json", {
        "status": "ok",
        "source": cfg.source,
        "depth": cfg.depth,
        "epsilon": eps,
        "built": built,
        "singletons": singletons,
    })
    if singletons:
        print(f"build: skipped {len(singletons)} singleton component(s) "
              "(a cone needs at least two points)")
    return EXIT_OK


def _properness_scale(Z: FiniteMetricSpace) -> float:
    from .spaces import estimate_properness_scale
    return estimate_properness_scale(Z.dist)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _load_artifacts(out: Path) -> tuple[dict, list[tuple[int, ConeSample, CaoGraph]]]:
    manifest = read_json(out / "build_manifest.json")
    comps = []
    for entry in manifest["built"]:
        k = entry["component"]
        comp_dir = out / f"component_{k}"
        sample = ConeSample.from_json_dict(read_json(comp_dir / "cone_sample.json"))
        graph = CaoGraph.load_json(comp_dir / "cao_graph.json")
        comps.append((k, sample, graph))
    return manifest, comps


def _component_checks(sample: ConeSample, G: CaoGraph, seed: int) -> tuple[dict, dict]:
    """Run the verification suite on one component.

    Returns (hard, soft) check dicts.  Hard checks are construction
    postconditions and metric facts — a failure means corrupted artifacts or
    an implementation bug.  Soft checks report measured structure that the
    certificate layer gates on; they may legitimately fail on coarse
    truncations.
    """
    p = G.params
    rng = np.random.default_rng(seed + 1)
    hard = {
        "separation": separation_check(G, sample),
        "coboundedness": coboundedness_check(G, sample),
        "valency": valency_check(G),
        "edge_length": edge_length_check(G, sample),
        "height_lipschitz": lipschitz_check(G),
        "net_quality": net_quality_check(G, sample),
        "qi": qi_check(G, sample, n_pairs=200, seed=seed),
    }
    # metric facts spot-checked on the sample
    i = int(rng.integers(0, sample.n_points))
    hard["ball_confinement"] = ball_height_confinement(
        sample.point(i), p.delta, sample, strict=False
    )
    lo = int(rng.integers(0, sample.Z.n))
    hard["segment_confinement"] = segment_confinement_check(
        sample, ConePoint(lo, 0.0), max(p.r0, 2 * p.L), p.L, strict=False
    )
    hard["projection_contraction"] = _contraction_spot_check(sample, p.r0)
    xs = rng.integers(0, sample.Z.n, size=4)
    ys = rng.integers(0, sample.Z.n, size=4)
    exp_checks = []
    for x, y in zip(xs, ys):
        rep = level_expansion_check(sample, int(x), int(y), 0.0, sample.r0, p.L)
        exp_checks.append(rep)
    worst = min(exp_checks, key=lambda r: float(r.passed))
    hard["level_expansion"] = worst
    # growth-constant certificate recheck (cached after the build)
    try:
        kappa(p.L)
        hard["kappa_certificate"] = _trivial_check(
            "growth constant re-certified on the refined grid", p.kappa)
    except CertificationFailure as exc:  # pragma: no cover
        hard["kappa_certificate"] = _trivial_check(str(exc), p.kappa, passed=False)

    mq = [region_multiplicity_check(G, v.level, v.net_point, sample)
          for v in G.vertices[: min(len(G.vertices), 16)]]
    hard["region_multiplicity"] = max(mq, key=lambda r: r.measured)
    soft = {
        "degree_asymmetry": asymmetry_check(G),
        "laplacian_positive": _laplacian_check(G),
    }
    return hard, soft


def _trivial_check(assertion: str, value: float, passed: bool = True):
    from .report import CheckReport
    return CheckReport(assertion=assertion, bound=1.0, measured=float(value), passed=passed)


def _contraction_spot_check(sample: ConeSample, t: float):
    from .report import CheckReport
    idx = np.where(sample.heights >= t - 1e-9)[0]
    if len(idx) < 2:
        return CheckReport(assertion="projection to height t never increases distances",
                           bound=0.0, measured=0.0, passed=True)
    rho = sample.rho_matrix()[np.ix_(idx, idx)]
    proj = cone_metric_pairs(sample.Z, sample.bases[idx], np.full(len(idx), t),
                             sample.bases[idx], np.full(len(idx), t))
    excess = float((proj - rho).max())
    return CheckReport(
        assertion="projection to height t never increases distances",
        bound=0.0, measured=max(excess, 0.0), passed=bool(excess <= 1e-9),
    )


def _laplacian_check(G: CaoGraph):
    from .report import CheckReport
    interior = G.interior()
    lap = laplacian_height(G)
    if len(interior) == 0:
        return CheckReport(assertion="height Laplacian strictly positive on interior vertices",
                           bound=0.0, measured=float("nan"), passed=False,
                           detail={"interior_vertices": 0})
    ratios = lap[interior] / G.params.r0
    m = float(ratios.min())
    k = int(interior[int(ratios.argmin())])
    return CheckReport(
        assertion="height Laplacian strictly positive on interior vertices",
        bound=1.0 / G.params.N_big,
        measured=m,
        passed=bool(m > 0),
        witness=None if m > 0 else k,
        detail={"interior_vertices": int(len(interior))},
    )


def cmd_verify(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    try:
        manifest, comps = _load_artifacts(out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read artifacts: {exc}", file=sys.stderr)
        return EXIT_PARSE

    all_components = []
    first_failure = None
    for k, sample, graph in comps:
        hard, soft = _component_checks(sample, graph, cfg.seed)
        for name, rep in hard.items():
            if not rep.passed and first_failure is None:
                first_failure = (k, name, rep)
        all_components.append({
            "component": k,
            "hard": {name: rep.to_json_dict() for name, rep in hard.items()},
            "soft": {name: rep.to_json_dict() for name, rep in soft.items()},
        })
    report = {
        "config": cfg.to_json_dict(),
        "components": all_components,
        "hard_failures": 0 if first_failure is None else sum(
            1 for c in all_components for r in c["hard"].values() if not r["pass"]
        ),
    }
    write_json(out / "verify_report.json", report)
    if cfg.format == "csv":
        flat = {}
        for c in all_components:
            for name, rep in {**c["hard"], **c["soft"]}.items():
                flat[f"component_{c['component']}:{name}"] = rep
        _write_checks_csv(out / "verify_report.csv", flat)
    if first_failure is not None:
        k, name, rep = first_failure
        print(f"verify failed: component {k}, check '{name}': {rep.assertion} "
              f"(bound {rep.bound}, measured {rep.measured}, witness {rep.witness})",
              file=sys.stderr)
        return EXIT_VERIFY
    n_soft_fail = sum(1 for c in all_components for r in c["soft"].values() if not r["pass"])
    print(f"verify: all hard checks passed on {len(comps)} component(s); "
          f"{n_soft_fail} soft check(s) reported failing")
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def cmd_certify(cfg: RunConfig) -> int:
    out = Path(cfg.out_dir)
    try:
        manifest, comps = _load_artifacts(out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"cannot read artifacts: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if manifest.get("singletons"):
        msg = (
            "certification refused: the base space has coarse components with a "
            "single point (components "
            f"{[s['component'] for s in manifest['singletons']]}). The construction "
            "requires every coarse component to contain at least two points; a "
            "one-point component gives a degenerate cone with no expansion to "
            "certify. Re-run with a coarser component scale (--epsilon) or drop "
            "the isolated points."
        )
        write_json(out / "certificate.json", {
            "issued": False,
            "reason": "hypothesis gate: singleton coarse component",
            "detail": msg,
            "components": [],
            "combined": None,
        })
        print(msg, file=sys.stderr)
        return EXIT_NO_CERTIFICATE

    certs = []
    profile_rows = []
    failed_witness = None
    for k, sample, graph in comps:
        try:
            cert = nonamenability_certificate(graph)
        except NoInteriorVertices as exc:
            print(f"certify: component {k}: {exc}", file=sys.stderr)
            return EXIT_NO_CERTIFICATE
        certs.append((k, cert))
        if not cert.issued and failed_witness is None:
            failed_witness = (k, cert.witness)
        lat = QuasiLattice.from_graph(graph)
        hops = graph.hop_matrix()
        center = 0
        for radius in range(0, int(np.nanmax(hops[np.isfinite(hops)])) + 1 if graph.n_vertices else 1):
            ball = np.where(hops[center] <= radius)[0]
            if len(ball) == 0 or len(ball) == graph.n_vertices:
                continue
            rep = isoperimetric_check(lat, ball, 1.5, C=float("inf"))
            profile_rows.append((f"component_{k}:ball_{radius}", rep.F_size,
                                 rep.boundary_size,
                                 rep.F_size / rep.boundary_size if rep.boundary_size else float("inf")))

    combined = None
    if certs and all(cert.issued for _, cert in certs):
        combined_C, combined_r = combine_components(
            [(cert.iso_constant, cert.iso_radius) for _, cert in certs]
        )
        combined = {"C": combined_C, "r": combined_r}

    write_json(out / "certificate.json", {
        "issued": combined is not None,
        "components": [{"component": k, **cert.to_json_dict()} for k, cert in certs],
        "combined": combined,
    })
    write_isoperimetric_csv(out / "isoperimetric_profile.csv", profile_rows)
    render_profile_svg(out / "isoperimetric_profile.svg", profile_rows)

    if combined is None:
        k, witness = failed_witness if failed_witness else (None, None)
        print(
            "no certificate: the height Laplacian is not strictly positive on all "
            f"interior vertices (component {k}, witness vertex {witness}). "
            "The finite truncation does not exhibit the uniform expansion the "
            "certificate requires.",
            file=sys.stderr,
        )
        return EXIT_NO_CERTIFICATE
    print(f"certificate issued: C = {combined['C']:.6g}, r = {combined['r']}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coarselab",
        description="Hyperbolic cones over finite metric spaces: construction, "
                    "verification, and expansion certificates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, with_input: bool):
        if with_input:
            p.add_argument("input", help="distance CSV, space JSON, point cloud, "
                                         "or generator spec like circle:64")
        else:
            p.add_argument("artifacts", help="output directory of a previous build")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--mu", type=float, default=None, help="chain roughness constant")
        p.add_argument("--r-b", dest="r_b", type=float, default=None,
                       help="properness base scale override")
        p.add_argument("--depth", type=int, default=None, help="number of levels to build")
        p.add_argument("--seed", type=int, default=None, help="net tie-break seed (0 = ascending)")
        p.add_argument("--epsilon", type=float, default=None,
                       help="coarse component scale (default: sample mesh)")
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--out", dest="out_dir", default=None, help="output directory")
        p.add_argument("--format", choices=("json", "csv"), default=None,
                       help="also emit flat CSV check tables")

    add_common(sub.add_parser("validate", help="check metric axioms and profile the space"), True)
    add_common(sub.add_parser("build", help="build cone samples and graphs per component"), True)
    add_common(sub.add_parser("verify", help="re-run all checks on built artifacts"), False)
    add_common(sub.add_parser("certify", help="issue the expansion certificate"), False)
    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values: dict = {}
    if args.config:
        file_values = _coerce_config(parse_config_file(args.config))
    cli_values = _coerce_config({
        k: getattr(args, k)
        for k in ("mu", "r_b", "depth", "seed", "tolerance", "epsilon", "out_dir", "format")
        if getattr(args, k, None) is not None
    })
    source = getattr(args, "input", None)
    if source is None:
        source = file_values.pop("source", getattr(args, "artifacts", ""))
    merged = {"source": source, **file_values, **cli_values}
    if getattr(args, "artifacts", None) is not None and "out_dir" not in cli_values:
        merged["out_dir"] = args.artifacts
    return RunConfig(**merged)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    try:
        cfg = _config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
    except MetricViolation as exc:
        print(f"metric violation: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except InfeasibleParams as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CoarselabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    raise AssertionError("unreachable")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
