"""
The pointwise inequality on surfaces and hypersurfaces
======================================================

Compute fundamental forms of parametrized submanifolds, the intrinsic
curvature from the Gauss equation, and compare delta with c H^2.
"""

import numpy as np

from deltaideal.immersion import (
    cylinder,
    fundamental_forms,
    ideality_residual,
    is_ideal,
    sample_points,
    sphere,
    torus,
    verify_inequality,
)

# On the torus K <= H^2, with equality nowhere.
im = torus(2.0, 1.0)
report = verify_inequality(im, sample_points(im, 200, 1))
print("torus:", report.summary())

# The inner and outer equators.
for theta in (0.0 + 1e-3, np.pi):
    s = fundamental_forms(im, [theta, 1.0])
    print(f"theta={theta:.3f}  H^2={s.H2:.4f}")

# Round spheres attain equality: H^2 equals max delta/c at every point.
for n in (2, 3, 4):
    s = sphere(n)
    res = ideality_residual(s, sample_points(s, 20, n))
    print(f"S^{n}: ideal = {is_ideal(res)}  max |residual| = {np.abs(res).max():.1e}")

# A cylinder is flat but has H^2 = 1/4, so it is not ideal.
res = ideality_residual(cylinder(1.0), sample_points(cylinder(1.0), 10, 0))
print("cylinder residuals:", res)

# CSV rows for one point of the 3-sphere.
print(verify_inequality(sphere(3), sample_points(sphere(3), 1, 5)).to_csv())
