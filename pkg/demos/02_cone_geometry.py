"""The warped cone over a bounded space: rays, projections, and the disk model.

Every point of the cone is (base point, height >= 0).  Distances contract
exponentially with height, so climbing is the cheapest way to travel.

Run:  python3 demos/02_cone_geometry.py
"""
import numpy as np

from coarselab import (
    ConePoint,
    ball_height_confinement,
    bs_isometry,
    bs_metric,
    circle_sample,
    cone_metric,
    ConeSample,
    sigma_ray,
)

Z = circle_sample(16)
D = Z.diameter
print(f"base: 16-point circle, diameter D = {D:.6f}")

print("\n== vertical rays are unit-speed geodesics ==")
p, q = sigma_ray(0, [1.0, 4.5])
print(f"rho((x,1.0),(x,4.5)) = {cone_metric(p, q, Z):.12f}  (exactly 3.5)")

print("\n== distinct rays diverge as they climb ==")
far = Z.index("c8")  # antipode of c0
for h in (0.0, 2.0, 4.0, 6.0):
    d = cone_metric(ConePoint(0, h), ConePoint(far, h), Z)
    print(f"antipodes at height {h}: rho = {d:.6f}")
print("the whole base fits in a 2*log(2) ball at height 0, but rays to "
      "different\nbase points separate linearly in height, like geodesics "
      "aimed at different\npoints at infinity")

print("\n== projecting down to a common level never expands ==")
rng = np.random.default_rng(2)
worst = -np.inf
for _ in range(500):
    x, y = rng.integers(0, 16, size=2)
    t, s = rng.uniform(1.0, 6.0, size=2)
    tt = rng.uniform(0.0, min(t, s))
    before = cone_metric(ConePoint(int(x), t), ConePoint(int(y), s), Z)
    after = cone_metric(ConePoint(int(x), tt), ConePoint(int(y), tt), Z)
    worst = max(worst, after - before)
print(f"500 random pairs projected to a common lower level: "
      f"max expansion {worst:.3e} (never positive)")

print("\n== balls stay in height bands ==")
sample = ConeSample(Z, r0=0.5, depth=8)
rep = ball_height_confinement(ConePoint(0, 2.0), delta=0.75, sample=sample)
print(f"ball of radius 0.75 around height 2.0: {rep.detail['members']} sampled "
      f"members, max height gap to the center {rep.detail['max_center_gap']:.3f} "
      f"< 0.75")

print("\n== the punctured-disk model is the same space ==")
x, t = 3, 0.8
p = bs_isometry((x, t), Z)
print(f"(x, scale {t}) maps to cone point (base {p.base}, height {p.height:.6f})")
d1 = bs_metric((0, 0.5), (5, 1.2), Z)
d2 = cone_metric(bs_isometry((0, 0.5), Z), bs_isometry((5, 1.2), Z), Z)
print(f"disk-model distance {d1:.12f} == cone distance {d2:.12f}")
