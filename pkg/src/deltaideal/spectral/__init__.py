"""First Laplace eigenvalues: closed-form registry and mesh computations."""
from .laplacian import (
    SpectralResult,
    build_mesh_laplacian,
    lambda1_mesh,
    lift,
    pullback_report,
    rayleigh_quotient,
    verify_pullback,
)
from .mesh import (
    TriMesh,
    antipodal_quotient,
    flat_torus_grid,
    icosahedron,
    icosphere,
    mesh_from_json,
    octahedron,
    read_off,
    tetrahedron,
    write_off,
)
from .registry import (
    SpaceDescriptor,
    covering_sheets,
    get_space,
    lambda1_closed_form,
    load_registry,
)
