"""
Ideal embeddings of spheres and projective spaces
=================================================

Apply the eigenvalue criterion lambda1 = n * max(delta/c) and the covering
obstruction to registered compact homogeneous spaces.
"""

import json

from deltaideal.spectral import get_space
from deltaideal.verdict import covering_obstruction, ideality_criterion

# Round spheres satisfy the criterion.
for n in range(2, 6):
    v = ideality_criterion(get_space(f"sphere:{n}"))
    print(f"sphere:{n}  lambda1={v.lambda1}  n*delta0={v.n_delta0:.6f}  {v.outcome.value}")

# Real projective spaces fail it, and the covering by the sphere explains why.
v = covering_obstruction(get_space("sphere:4"), get_space("rp:4"))
print(json.dumps(v.to_json(), indent=2))

# Flat tori are reducible, so the criterion declines to decide.
print(ideality_criterion(get_space("flat-torus:2")).to_json())
