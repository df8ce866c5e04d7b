"""
Delta-invariants of curvature tensors
=====================================

Build curvature tensors, evaluate sectional and scalar curvature, and
minimize the blocked subspace objective to obtain delta-invariants.
"""

import numpy as np

from deltaideal.delta_opt import delta_constant_curvature, delta_invariant, max_normalized_delta
from deltaideal.partitions import Partition, c_coefficient, enumerate_tuples
from deltaideal.tensor_core import (
    constant_curvature_tensor,
    random_curvature_tensor,
    scalar_curvature,
    sectional_curvature,
)

# The unit 4-sphere: every plane has curvature one.
R = constant_curvature_tensor(4, 1.0)
print("K(e1, e2) =", sectional_curvature(R, [1, 0, 0, 0], [0, 1, 0, 0]))
print("tau =", scalar_curvature(R))

# Optimizer against the closed form for every admissible tuple.
for p in enumerate_tuples(4):
    res = delta_invariant(R, p)
    print(f"delta{p} = {res.value:.12f}  closed form {delta_constant_curvature(4, 1.0, p)}")

# A random tensor with all the curvature symmetries.
rng = np.random.default_rng(0)
T = random_curvature_tensor(4, rng)
res = delta_invariant(T, Partition(4, (2,)))
print("random tensor: delta(2) =", res.value, "converged:", res.converged)
print("minimizing 2-plane basis:\n", res.minimizer.subspaces()[0])

# The normalized maximum over all tuples.
nd = max_normalized_delta(T)
for p, d, ratio, _ in nd.table:
    print(f"{str(p):>6}  delta={d: .6f}  c={c_coefficient(p):.4f}  delta/c={ratio: .6f}")
print("max delta/c =", nd.value, "attained at", nd.partition)
