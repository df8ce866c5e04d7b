"""Pointwise algebraic curvature tensors and the curvature functionals built on them.

Components are stored as ``R[i, j, k, l] = R(e_i, e_j, e_k, e_l)`` in an
orthonormal basis. The sign convention makes the round unit sphere positive::

    R(X, Y, Z, W) = c0 * (<X, W><Y, Z> - <X, Z><Y, W>)
    K(X ^ Y)      = R(X, Y, Y, X) / (|X|^2 |Y|^2 - <X, Y>^2)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegeneratePlane,
    DimensionError,
    DimensionMismatch,
    RankError,
    SymmetryViolation,
)

SYMMETRY_TOL = 1e-9
ORTHONORMAL_TOL = 1e-10
PLANE_GRAM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """An algebraic curvature tensor at a point.

    Instances should be created through :func:`validate_curvature_tensor`,
    :func:`constant_curvature_tensor` or :func:`random_curvature_tensor`;
    the components array is made read-only.
    """

    components: np.ndarray

    def __post_init__(self):
        arr = np.array(self.components, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @property
    def n(self) -> int:
        return self.components.shape[0]

    def scaled(self, a: float) -> "CurvatureTensor":
        return CurvatureTensor(a * self.components)

    def rotated(self, Q: np.ndarray) -> "CurvatureTensor":
        """Express the tensor in the frame given by the columns of ``Q``."""
        Q = np.asarray(Q, dtype=float)
        return CurvatureTensor(
            np.einsum("abcd,ai,bj,ck,dl->ijkl", self.components, Q, Q, Q, Q)
        )

    def to_json(self) -> dict:
        return {"n": self.n, "components": self.components.tolist()}


def _antisymmetry_deviation(R):
    return max(
        np.max(np.abs(R + np.einsum("jikl->ijkl", R))),
        np.max(np.abs(R + np.einsum("ijlk->ijkl", R))),
    )


def _pair_deviation(R):
    return np.max(np.abs(R - np.einsum("klij->ijkl", R)))


def _bianchi_sum(R):
    # R[i,j,k,l] + R[i,k,l,j] + R[i,l,j,k]
    return R + np.einsum("iklj->ijkl", R) + np.einsum("iljk->ijkl", R)


def symmetry_deviations(components) -> dict:
    """Largest violation of each symmetry family, keyed by family name."""
    R = np.asarray(components, dtype=float)
    return {
        "antisymmetry": float(_antisymmetry_deviation(R)),
        "pair": float(_pair_deviation(R)),
        "bianchi": float(np.max(np.abs(_bianchi_sum(R)))),
    }


def project_curvature(components) -> np.ndarray:
    """Orthogonal projection of a 4-array onto algebraic curvature tensors.

    Averages over the 8-element group generated by the two antisymmetries
    and the pair swap, then removes the totally antisymmetric part.
    """
    R = np.asarray(components, dtype=float)
    R = 0.5 * (R - np.einsum("jikl->ijkl", R))
    R = 0.5 * (R - np.einsum("ijlk->ijkl", R))
    R = 0.5 * (R + np.einsum("klij->ijkl", R))
    return R - _bianchi_sum(R) / 3.0


def _check_shape(R):
    if R.ndim != 4 or len(set(R.shape)) != 1:
        raise DimensionError(f"expected an n^4 array, got shape {R.shape}")
    if R.shape[0] < 2:
        raise DimensionError(f"curvature tensors need n >= 2, got n={R.shape[0]}")


def validate_curvature_tensor(components, tol: float = SYMMETRY_TOL) -> CurvatureTensor:
    """Check the algebraic curvature symmetries and return a symmetrized tensor.

    Raises
    ------
    DimensionError
        If the array is not ``n^4``-shaped with ``n >= 2``.
    SymmetryViolation
        If the raw input breaks a symmetry family by more than ``tol``.
    """
    R = np.asarray(components, dtype=float)
    _check_shape(R)
    for family, dev in symmetry_deviations(R).items():
        if dev > tol:
            raise SymmetryViolation(family, dev)
    return CurvatureTensor(project_curvature(R))


def constant_curvature_tensor(n: int, c0: float) -> CurvatureTensor:
    """Space-form tensor whose sectional curvature is ``c0`` on every plane."""
    if n < 2:
        raise DimensionError(f"curvature tensors need n >= 2, got n={n}")
    eye = np.eye(n)
    R = c0 * (np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye))
    return CurvatureTensor(R)


def random_curvature_tensor(n: int, rng=None, scale: float = 1.0) -> CurvatureTensor:
    """Generic algebraic curvature tensor from a projected Gaussian array."""
    if n < 2:
        raise DimensionError(f"curvature tensors need n >= 2, got n={n}")
    rng = np.random.default_rng(rng)
    return CurvatureTensor(project_curvature(scale * rng.standard_normal((n, n, n, n))))


def sectional_curvature(R: CurvatureTensor, X, Y) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != (R.n,) or Y.shape != (R.n,):
        raise DimensionMismatch(f"vectors must have length {R.n}")
    gram = X @ X * (Y @ Y) - (X @ Y) ** 2
    if gram <= PLANE_GRAM_TOL:
        raise DegeneratePlane(f"Gram determinant {gram:.3e} is too small")
    return float(np.einsum("abcd,a,b,c,d->", R.components, X, Y, Y, X) / gram)


def _check_orthonormal(B, n, what):
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != n:
        raise DimensionMismatch(f"{what} must have {n} rows, got shape {B.shape}")
    dev = np.max(np.abs(B.T @ B - np.eye(B.shape[1])))
    if dev > ORTHONORMAL_TOL:
        raise ValueError(f"{what} columns are not orthonormal (deviation {dev:.3e})")
    return B


def pair_curvatures(R: CurvatureTensor, B) -> np.ndarray:
    """Matrix ``K[i, j] = R(b_i, b_j, b_j, b_i)`` for the columns of ``B``.

    For orthonormal columns this is the sectional curvature of each
    coordinate plane; the diagonal is zero.
    """
    B = np.asarray(B, dtype=float)
    return np.einsum("abcd,ai,bj,cj,di->ij", R.components, B, B, B, B)


def scalar_curvature(R: CurvatureTensor, F=None) -> float:
    """Sum of sectional curvatures over the coordinate planes of frame ``F``.

    The result does not depend on ``F``; the identity frame is used when
    none is given.
    """
    if F is None:
        F = np.eye(R.n)
    F = _check_orthonormal(F, R.n, "frame")
    if F.shape[1] != R.n:
        raise DimensionMismatch(f"frame must be {R.n}x{R.n}, got {F.shape}")
    return float(np.sum(pair_curvatures(R, F)) / 2.0)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of the tangent space given by an orthonormal basis."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.array(self.basis, dtype=float)
        if B.ndim != 2:
            raise DimensionMismatch("basis must be a matrix")
        _check_orthonormal(B, B.shape[0], "subspace basis")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def r(self) -> int:
        return self.basis.shape[1]


def subspace_scalar_curvature(R: CurvatureTensor, L) -> float:
    """Scalar curvature of the subspace ``L`` (a :class:`Subspace` or basis matrix)."""
    B = L.basis if isinstance(L, Subspace) else L
    B = _check_orthonormal(B, R.n, "subspace basis")
    if B.shape[1] < 2:
        raise RankError(f"subspace dimension must be >= 2, got {B.shape[1]}")
    return float(np.sum(pair_curvatures(R, B)) / 2.0)


def ricci_tensor(R: CurvatureTensor) -> np.ndarray:
    """Ricci form ``Ric(X, Y) = sum_i R(e_i, X, Y, e_i)`` in the stored basis."""
    return np.einsum("iabi->ab", R.components)
