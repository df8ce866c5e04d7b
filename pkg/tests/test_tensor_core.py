import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltaideal.delta_opt import random_orthogonal
from deltaideal.errors import (
    DegeneratePlane,
    DimensionError,
    DimensionMismatch,
    RankError,
    SymmetryViolation,
)
from deltaideal.tensor_core import (
    Subspace,
    constant_curvature_tensor,
    project_curvature,
    random_curvature_tensor,
    ricci_tensor,
    scalar_curvature,
    sectional_curvature,
    subspace_scalar_curvature,
    symmetry_deviations,
    validate_curvature_tensor,
)


def test_constant_tensor_is_accepted_unchanged():
    R = constant_curvature_tensor(3, 1.0)
    V = validate_curvature_tensor(R.components)
    np.testing.assert_allclose(V.components, R.components, atol=1e-15)


def test_zero_tensor_is_flat():
    R = validate_curvature_tensor(np.zeros((4, 4, 4, 4)))
    assert R.n == 4
    assert scalar_curvature(R) == 0.0


def test_perturbed_component_is_rejected():
    C = constant_curvature_tensor(3, 1.0).components.copy()
    C[0, 1, 0, 1] += 1e-3
    with pytest.raises(SymmetryViolation) as info:
        validate_curvature_tensor(C, tol=1e-9)
    assert info.value.deviation == pytest.approx(1e-3)


def test_bianchi_violation_is_named():
    # totally antisymmetric tensors satisfy every symmetry except Bianchi
    A = np.zeros((4, 4, 4, 4))
    from itertools import permutations

    for perm in permutations(range(4)):
        sign = np.linalg.det(np.eye(4)[list(perm)])
        A[perm] = sign
    with pytest.raises(SymmetryViolation) as info:
        validate_curvature_tensor(A)
    assert info.value.family == "bianchi"


@pytest.mark.parametrize("shape", [(1, 1, 1, 1), (3, 3, 3), (2, 3, 2, 2)])
def test_bad_shapes(shape):
    with pytest.raises(DimensionError):
        validate_curvature_tensor(np.zeros(shape))


def test_constant_curvature_needs_n_at_least_two():
    with pytest.raises(DimensionError):
        constant_curvature_tensor(1, 1.0)


def test_projection_is_idempotent_and_symmetric(rng):
    C = project_curvature(rng.standard_normal((5, 5, 5, 5)))
    assert max(symmetry_deviations(C).values()) < 1e-14
    np.testing.assert_allclose(project_curvature(C), C, atol=1e-14)


def test_space_form_model_formula():
    # (3, 0.25): R(X,Y,Z,W) = c0(<X,W><Y,Z> - <X,Z><Y,W>), evaluated entrywise
    R = constant_curvature_tensor(3, 0.25)
    e = np.eye(3)
    for i, j, k, l in np.ndindex(3, 3, 3, 3):
        expected = 0.25 * (e[i] @ e[l] * (e[j] @ e[k]) - e[i] @ e[k] * (e[j] @ e[l]))
        assert R.components[i, j, k, l] == expected
    assert sectional_curvature(R, e[0], e[2]) == pytest.approx(0.25, abs=1e-15)


def test_flat_space_form():
    R = constant_curvature_tensor(2, 0.0)
    assert sectional_curvature(R, [1, 0], [0, 1]) == 0.0


def test_unit_sphere_all_orthonormal_pairs(rng):
    R = constant_curvature_tensor(4, 1.0)
    for _ in range(20):
        Q = random_orthogonal(4, rng)
        assert sectional_curvature(R, Q[:, 0], Q[:, 1]) == pytest.approx(1.0, abs=1e-12)


def test_sectional_curvature_of_non_orthonormal_pair():
    R = constant_curvature_tensor(4, 1.0)
    e = np.eye(4)
    assert sectional_curvature(R, e[0] + e[1], e[2]) == pytest.approx(1.0, abs=1e-14)


def test_degenerate_plane():
    R = constant_curvature_tensor(3, 1.0)
    with pytest.raises(DegeneratePlane):
        sectional_curvature(R, [1, 0, 0], [2, 0, 0])
    with pytest.raises(DimensionMismatch):
        sectional_curvature(R, [1, 0], [0, 1])


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.1, 10) | st.floats(-10, -0.1),
    b=st.floats(-10, 10),
    seed=st.integers(0, 2**32 - 1),
)
def test_sectional_curvature_depends_only_on_the_plane(a, b, seed):
    rng = np.random.default_rng(seed)
    R = random_curvature_tensor(4, rng)
    X, Y = rng.standard_normal((2, 4))
    K = sectional_curvature(R, X, Y)
    assert sectional_curvature(R, Y, X) == pytest.approx(K, rel=1e-10, abs=1e-10)
    assert sectional_curvature(R, X, a * Y + b * X) == pytest.approx(K, rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("n,expected", [(4, 6.0), (3, 3.0)])
def test_scalar_curvature_of_unit_spheres(n, expected, rng):
    R = constant_curvature_tensor(n, 1.0)
    assert scalar_curvature(R) == expected
    assert scalar_curvature(R, random_orthogonal(n, rng)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("c0", [-1.0, 0.3, 2.0])
def test_scalar_curvature_space_form_exact(n, c0):
    R = constant_curvature_tensor(n, c0)
    assert abs(scalar_curvature(R) - c0 * n * (n - 1) / 2) < 1e-12


def test_scalar_curvature_frame_independence(random_tensor, rng):
    R = random_tensor(5)
    values = [scalar_curvature(R, random_orthogonal(5, rng)) for _ in range(100)]
    assert np.ptp(values) < 1e-8


def test_scalar_curvature_is_half_ricci_trace(random_tensor):
    R = random_tensor(5)
    assert scalar_curvature(R) == pytest.approx(np.trace(ricci_tensor(R)) / 2, abs=1e-12)


def test_scalar_curvature_rejects_bad_frame():
    R = constant_curvature_tensor(3, 1.0)
    with pytest.raises(ValueError):
        scalar_curvature(R, 2 * np.eye(3))
    with pytest.raises(DimensionMismatch):
        scalar_curvature(R, np.eye(4))


def test_subspace_scalar_curvature_examples(rng):
    S4 = constant_curvature_tensor(4, 1.0)
    Q = random_orthogonal(4, rng)
    assert subspace_scalar_curvature(S4, Q[:, :2]) == pytest.approx(1.0, abs=1e-12)
    assert subspace_scalar_curvature(S4, Subspace(Q[:, :3])) == pytest.approx(3.0, abs=1e-12)
    flat = constant_curvature_tensor(4, 0.0)
    assert subspace_scalar_curvature(flat, Q[:, 1:]) == 0.0


def test_subspace_scalar_curvature_in_subspace_rotation(random_tensor, rng):
    R = random_tensor(6)
    B = random_orthogonal(6, rng)[:, :3]
    values = [subspace_scalar_curvature(R, B @ random_orthogonal(3, rng)) for _ in range(100)]
    assert np.ptp(values) < 1e-8


def test_subspace_rank_error():
    R = constant_curvature_tensor(3, 1.0)
    with pytest.raises(RankError):
        subspace_scalar_curvature(R, np.eye(3)[:, :1])


def test_rotated_tensor_matches_sectional_curvatures(random_tensor, rng):
    R = random_tensor(4)
    Q = random_orthogonal(4, rng)
    Rq = R.rotated(Q)
    e = np.eye(4)
    assert sectional_curvature(Rq, e[0], e[2]) == pytest.approx(
        sectional_curvature(R, Q[:, 0], Q[:, 2]), abs=1e-12
    )


def test_components_are_read_only():
    R = constant_curvature_tensor(3, 1.0)
    with pytest.raises(ValueError):
        R.components[0, 0, 0, 0] = 1.0
