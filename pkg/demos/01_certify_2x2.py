"""Certify a 2x2 positive system and inspect the cross-checked report.

The operator T = [[0.5, 1], [0, 0.5]] has spectral radius 1/2, so every
stability criterion must agree.  The interior point (6, 2) strictly
decays under T while the interior point (2, 2) does not -- stability
guarantees *some* strictly decaying interior point, not all of them.
"""

import json

import numpy as np

import posstab as ps

T = ps.dense([[0.5, 1.0], [0.0, 0.5]])
cone = ps.orthant(2, "linf")

print("T (6, 2)^T =", ps.apply(T, [6.0, 2.0]), " -> strictly below (6, 2)")
print("T (2, 2)^T =", ps.apply(T, [2.0, 2.0]), " -> NOT below (2, 2)")
for point in ([6.0, 2.0], [2.0, 2.0]):
    gap = np.array(point) - ps.apply(T, point)
    inside, margin = ps.is_interior(cone, gap)
    print(f"  {point}: decay gap {gap} interior={inside} margin={margin:+.3f}")

report = ps.cross_check(T, cone)
print("\nconsensus:", report.consensus)
print("spectral bracket:", (report.spectral.lower, report.spectral.upper))
for v in report.criteria:
    print(f"  {v.id:<14} holds={v.holds}  margin={v.margin:+.6f}")

print("\nfull JSON report:")
print(json.dumps(report.to_dict(), indent=2, sort_keys=True)[:1200], "...")
