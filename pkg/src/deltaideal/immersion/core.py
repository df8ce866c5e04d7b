"""Fundamental forms of parametric immersions into Euclidean space."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ..errors import DomainError, RankDeficiency
from ..tensor_core import CurvatureTensor, validate_curvature_tensor

RANK_TOL = 1e-10
TANGENCY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ParametricImmersion:
    """A chart ``x: U -> R^m`` of an ``n``-manifold.

    ``jacobian(u)`` returns the ``m x n`` matrix of first partials and
    ``hessian(u)`` the ``n x n x m`` array of second partials. When they
    are missing, central differences with one Richardson step are used.
    ``domain`` lists ``(low, high)`` per parameter.
    """

    n: int
    m: int
    position: Callable
    domain: tuple
    jacobian: Callable | None = None
    hessian: Callable | None = None
    name: str = "immersion"
    step: float = 1e-5
    second_step: float = 1e-3
    params: dict = field(default_factory=dict)

    @property
    def derivative_source(self) -> str:
        return "analytic" if self.jacobian is not None and self.hessian is not None else "numeric"

    def numeric(self) -> "ParametricImmersion":
        """Same chart with the analytic partials dropped."""
        return replace(self, jacobian=None, hessian=None)

    def contains(self, u) -> bool:
        u = np.asarray(u, dtype=float)
        return u.shape == (self.n,) and all(lo <= x <= hi for x, (lo, hi) in zip(u, self.domain))

    def sample(self, u) -> "ImmersionSample":
        return fundamental_forms(self, u)


def _central(f, u, i, h):
    e = np.zeros_like(u)
    e[i] = h
    return (f(u + e) - f(u - e)) / (2 * h)


def _second(f, u, i, j, h):
    ei = np.zeros_like(u)
    ej = np.zeros_like(u)
    ei[i] = h
    ej[j] = h
    if i == j:
        return (f(u + ei) - 2 * f(u) + f(u - ei)) / h**2
    return (f(u + ei + ej) - f(u + ei - ej) - f(u - ei + ej) + f(u - ei - ej)) / (4 * h**2)


def numeric_jacobian(position, u, h=1e-5) -> np.ndarray:
    """Central differences at ``h`` and ``h/2`` combined by Richardson extrapolation."""
    f = lambda x: np.asarray(position(x), dtype=float)
    u = np.asarray(u, dtype=float)
    cols = [(4 * _central(f, u, i, h / 2) - _central(f, u, i, h)) / 3 for i in range(len(u))]
    return np.column_stack(cols)


def numeric_hessian(position, u, h=1e-3) -> np.ndarray:
    f = lambda x: np.asarray(position(x), dtype=float)
    u = np.asarray(u, dtype=float)
    n = len(u)
    out = None
    for i in range(n):
        for j in range(i, n):
            d = (4 * _second(f, u, i, j, h / 2) - _second(f, u, i, j, h)) / 3
            if out is None:
                out = np.empty((n, n, len(d)))
            out[i, j] = out[j, i] = d
    return out


@dataclass(frozen=True, eq=False)
class ImmersionSample:
    """First and second fundamental form data at one parameter point."""

    u: np.ndarray
    position: np.ndarray
    jacobian: np.ndarray
    g: np.ndarray
    h: np.ndarray
    mean_curvature_vector: np.ndarray
    H2: float

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def orthonormal_coefficients(self) -> np.ndarray:
        """Coefficients ``E`` with ``jacobian @ E`` g-orthonormal (from Cholesky of g)."""
        L = np.linalg.cholesky(self.g)
        return np.linalg.inv(L).T

    def second_form_orthonormal(self) -> np.ndarray:
        E = self.orthonormal_coefficients()
        return np.einsum("ia,jb,ijk->abk", E, E, self.h)


def forms_from_derivatives(u, x, J, X2) -> ImmersionSample:
    """Assemble an :class:`ImmersionSample` from position and partials."""
    J = np.asarray(J, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    g = J.T @ J
    if np.linalg.det(g) <= RANK_TOL:
        raise RankDeficiency(f"Gram determinant {np.linalg.det(g):.3e} at u={u}")
    ginv = np.linalg.inv(g)
    normal_proj = np.eye(J.shape[0]) - J @ ginv @ J.T
    h = np.einsum("ab,ijb->ija", normal_proj, X2)
    h = 0.5 * (h + h.transpose(1, 0, 2))
    n = J.shape[1]
    Hvec = np.einsum("ij,ija->a", ginv, h) / n
    return ImmersionSample(
        u=np.asarray(u, dtype=float),
        position=np.asarray(x, dtype=float),
        jacobian=J,
        g=0.5 * (g + g.T),
        h=h,
        mean_curvature_vector=Hvec,
        H2=float(Hvec @ Hvec),
    )


def fundamental_forms(im: ParametricImmersion, u) -> ImmersionSample:
    """First form ``g``, normal-valued second form ``h`` and mean curvature at ``u``.

    ``h`` is the normal projection of the second partials and the mean
    curvature vector is ``trace_g(h) / n``.
    """
    u = np.asarray(u, dtype=float)
    if not im.contains(u):
        raise DomainError(f"{u} is outside the chart domain of {im.name}")
    x = np.asarray(im.position(u), dtype=float)
    if im.derivative_source == "analytic":
        J, X2 = im.jacobian(u), im.hessian(u)
    else:
        J = numeric_jacobian(im.position, u, im.step)
        X2 = numeric_hessian(im.position, u, im.second_step)
    return forms_from_derivatives(u, x, J, X2)


def induced_curvature(sample: ImmersionSample, tol: float = 1e-9) -> CurvatureTensor:
    """Intrinsic curvature tensor from the Gauss equation, in a g-orthonormal frame.

    ``R(X, Y, Z, W) = <h(X, W), h(Y, Z)> - <h(X, Z), h(Y, W)>``.
    """
    hh = sample.second_form_orthonormal()
    G = np.einsum("adk,bck->abcd", hh, hh)
    R = G - np.einsum("ack,bdk->abcd", hh, hh)
    scale = max(1.0, float(np.max(np.abs(R))))
    return validate_curvature_tensor(R, tol * scale)


def reparametrize(im: ParametricImmersion, A, shift=None, domain=None) -> ParametricImmersion:
    """Chart ``v -> x(A v + shift)``; ``domain`` bounds the new parameters."""
    A = np.asarray(A, dtype=float)
    b = np.zeros(im.n) if shift is None else np.asarray(shift, dtype=float)
    if domain is None:
        domain = tuple((-np.inf, np.inf) for _ in range(im.n))
    pos = lambda v: im.position(A @ np.asarray(v, dtype=float) + b)
    jac = hes = None
    if im.derivative_source == "analytic":
        jac = lambda v: im.jacobian(A @ np.asarray(v, dtype=float) + b) @ A
        hes = lambda v: np.einsum(
            "ki,lj,klm->ijm", A, A, im.hessian(A @ np.asarray(v, dtype=float) + b)
        )
    return replace(
        im, position=pos, jacobian=jac, hessian=hes, domain=tuple(domain),
        name=f"{im.name} (reparametrized)",
    )
