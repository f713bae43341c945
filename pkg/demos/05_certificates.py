"""Non-amenability certificates: issue, combine, and refuse.

A certificate records measured isoperimetric constants: every finite vertex
set F in the graph satisfies #F <= C * #boundary(F).  Small graphs get exact
constants by enumeration; larger ones get a spectral sweep estimate plus the
interior height-Laplacian audit.  When the hypotheses do not hold, the
pipeline refuses with an explanation instead of certifying.

Run:  python3 demos/05_certificates.py
"""
import json
import tempfile
from pathlib import Path

from coarselab import (
    build_cao_graph,
    calibrate,
    combine_components,
    estimate_properness_scale,
    nonamenability_certificate,
    two_intervals,
)
from coarselab.cli import main

print("== per-component certificates on a disconnected base ==")
Z = two_intervals(16, gap=1.0)
constants = []
for k, idx in enumerate((range(16), range(16, 32))):
    Zk = Z.subspace(idx)
    sample, params = calibrate(Zk, mu=0.0,
                               r_b=estimate_properness_scale(Zk.dist), depth=1)
    cert = nonamenability_certificate(build_cao_graph(sample, params, depth=1))
    print(f"component {k}: issued = {cert.issued}, exact C = {cert.iso_constant}, "
          f"boundary radius r = {cert.iso_radius}")
    constants.append((cert.iso_constant, cert.iso_radius))
C, r = combine_components(constants)
print(f"union of components satisfies #F <= {C} * #boundary_{r}(F)")

print("\n== the full pipeline via the command line ==")
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "circle"
    main(["build", "circle:16", "--depth", "1", "--out", str(out)])
    main(["verify", str(out)])
    code = main(["certify", str(out)])
    cert = json.loads((out / "certificate.json").read_text())
    print(f"circle at depth 1: certify exit code {code}, "
          f"issued = {cert['issued']}, combined = {cert['combined']}")

    deep = Path(tmp) / "circle_deep"
    main(["build", "circle:16", "--depth", "3", "--out", str(deep)])
    code = main(["certify", str(deep)])
    cert = json.loads((deep / "certificate.json").read_text())
    comp = cert["components"][0]
    print(f"circle at depth 3: certify exit code {code}, issued = {cert['issued']} "
          f"(min Laplacian ratio {comp['min_laplacian_ratio']:.2e} is not positive)")

    print("\n== refusing to certify a dust space ==")
    dust = Path(tmp) / "cantor"
    main(["build", "cantor:3", "--epsilon", "0.01", "--depth", "1", "--out", str(dust)])
    code = main(["certify", str(dust)])
    cert = json.loads((dust / "certificate.json").read_text())
    print(f"cantor:3 at resolution 0.01: exit code {code}, reason: {cert['reason']}")
