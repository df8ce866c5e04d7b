"""
First eigenvalues of spheres and projective planes on meshes
============================================================

Solve the cotangent Laplace eigenproblem on refined icospheres, pass to the
antipodal quotient, and check that lifted base eigenfunctions solve the
cover's problem with the same eigenvalue.
"""

from deltaideal.spectral import (
    antipodal_quotient,
    flat_torus_grid,
    icosphere,
    lambda1_mesh,
    lift,
    pullback_report,
    rayleigh_quotient,
)

# Refinement drives lambda1 of the round 2-sphere toward 2.
for level in range(1, 5):
    mesh = icosphere(level)
    res = lambda1_mesh(mesh)
    print(f"level {level}: {mesh.num_vertices:5d} vertices  lambda1 = {res.lambda1:.8f}")

# The projective plane is the antipodal quotient; its lambda1 approaches 6.
mesh = icosphere(4)
cover = lambda1_mesh(mesh)
base = lambda1_mesh(antipodal_quotient(mesh))
print("quotient lambda1 =", base.lambda1)

# Pulling the base eigenfunction back gives a cover eigenfunction.
f = lift(base)
print("Rayleigh quotient of the lift =", rayleigh_quotient(cover.stiffness, cover.mass, f))
print(pullback_report(cover, base))

# A periodic grid realizes the flat square torus of side 2 pi (lambda1 = 1).
print("flat torus lambda1 =", lambda1_mesh(flat_torus_grid(64)).lambda1)
