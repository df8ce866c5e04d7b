"""Cotangent Laplacian, lumped mass and the first positive eigenvalue on meshes."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import lobpcg

from ..errors import MismatchedPair, SolverFailure
from .mesh import TriMesh

ZERO_MODE_TOL = 1e-8
# below this many unknowns a dense generalized solve is cheaper and exact
DENSE_LIMIT = 64


def _cotangents(V, F):
    """Cotangent of the angle at each corner of each face, shape (faces, 3)."""
    cots = np.empty(F.shape)
    for c in range(3):
        o = V[F[:, c]]
        u = V[F[:, (c + 1) % 3]] - o
        v = V[F[:, (c + 2) % 3]] - o
        cots[:, c] = np.einsum("ij,ij->i", u, v) / np.linalg.norm(np.cross(u, v), axis=1)
    return cots


def _merge_matrix(mesh):
    n = len(mesh.vertices)
    return sp.csr_matrix((np.ones(n), (np.arange(n), mesh.classes)), shape=(n, mesh.num_vertices))


def build_mesh_laplacian(m: TriMesh):
    """Stiffness and lumped mass matrices of the mesh (after identification).

    Returns
    -------
    stiffness : scipy.sparse.csr_matrix
        Cotangent weights, symmetric positive semidefinite with zero row sums.
    mass : scipy.sparse.dia_matrix
        Barycentric lumped areas on the diagonal.
    """
    m.validate()
    V, F = m.vertices, m.faces
    cots = _cotangents(V, F)
    n = len(V)
    rows, cols, vals = [], [], []
    for c in range(3):
        # corner c is opposite the edge (c+1, c+2)
        i, j = F[:, (c + 1) % 3], F[:, (c + 2) % 3]
        w = 0.5 * cots[:, c]
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        vals += [-w, -w, w, w]
    K = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    lumped = np.bincount(F.ravel(), weights=np.repeat(m.face_areas() / 3.0, 3), minlength=n)
    if m.identification is not None:
        P = _merge_matrix(m)
        K = (P.T @ K @ P).tocsr()
        lumped = P.T @ lumped
    K = (0.5 * (K + K.T)).tocsr()
    return K, sp.diags(lumped)


@dataclass(frozen=True, eq=False)
class SpectralResult:
    lambda1: float
    eigenvector: np.ndarray
    solver_iterations: int
    mesh_size: tuple
    residual: float = 0.0
    stiffness: sp.spmatrix | None = field(default=None, repr=False)
    mass: sp.spmatrix | None = field(default=None, repr=False)
    classes: np.ndarray | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "solver_iterations": self.solver_iterations,
            "mesh_size": list(self.mesh_size),
            "residual": self.residual,
        }


def lambda1_mesh(
    m: TriMesh,
    block_size: int = 6,
    rayleigh_tol: float = 1e-10,
    max_iterations: int | None = None,
    seed: int = 0,
) -> SpectralResult:
    """Smallest eigenvalue above ``1e-8`` of ``K v = lambda M v``.

    Meshes with at most ``DENSE_LIMIT`` unknowns are solved densely.

    LOBPCG runs unpreconditioned in the mass-orthogonal complement of the
    constants, so the zero mode is deflated and nothing is factorized. The
    result is accepted once the relative residual is below
    ``sqrt(rayleigh_tol)``, which bounds the relative Rayleigh-quotient
    error by ``rayleigh_tol``.

    Raises
    ------
    SolverFailure
        If the residual criterion is not met within ``10 * |V|`` iterations.
    """
    K, M = build_mesh_laplacian(m)
    n = K.shape[0]
    if n <= DENSE_LIMIT:
        return _dense_lambda1(m, K, M)
    budget = max_iterations or 10 * n
    rng = np.random.default_rng(seed)
    k = min(block_size, n - 2)
    X0 = rng.standard_normal((n, k))
    ones = np.ones((n, 1))
    target = np.sqrt(rayleigh_tol)
    used = 0
    while True:
        with warnings.catch_warnings():
            # convergence is judged below on the Rayleigh residual
            warnings.simplefilter("ignore", UserWarning)
            vals, vecs, hist = lobpcg(
                K, X0, B=M, Y=ones, tol=target * 1e-2,
                maxiter=min(budget - used, 200), largest=False, retResidualNormsHistory=True,
            )
        used += max(len(hist), 1)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        positive = np.flatnonzero(vals > ZERO_MODE_TOL)
        if positive.size:
            i = positive[0]
            v = vecs[:, i]
            Mv = M @ v
            lam = float(v @ (K @ v) / (v @ Mv))
            res = float(np.linalg.norm(K @ v - lam * Mv) / (abs(lam) * np.linalg.norm(Mv)))
            if res <= target:
                break
        if used >= budget:
            raise SolverFailure(used)
        X0 = vecs
    v = v / np.sqrt(v @ (M @ v))
    v = v - (ones[:, 0] @ (M @ v)) / M.diagonal().sum()
    v = v / np.sqrt(v @ (M @ v))
    return SpectralResult(
        lambda1=lam,
        eigenvector=v,
        solver_iterations=used,
        mesh_size=(m.num_vertices, m.num_faces),
        residual=res,
        stiffness=K,
        mass=M,
        classes=m.classes if m.identification is not None else None,
    )


def _dense_lambda1(m, K, M) -> SpectralResult:
    vals, vecs = scipy.linalg.eigh(K.toarray(), M.toarray())
    positive = np.flatnonzero(vals > ZERO_MODE_TOL)
    if not positive.size:
        raise SolverFailure(0, "mesh has no positive eigenvalue")
    i = positive[0]
    v = vecs[:, i] / np.sqrt(vecs[:, i] @ (M @ vecs[:, i]))
    lam = rayleigh_quotient(K, M, v)
    Mv = M @ v
    res = float(np.linalg.norm(K @ v - lam * Mv) / (abs(lam) * np.linalg.norm(Mv)))
    return SpectralResult(
        lambda1=lam, eigenvector=v, solver_iterations=0,
        mesh_size=(m.num_vertices, m.num_faces), residual=res, stiffness=K, mass=M,
        classes=m.classes if m.identification is not None else None,
    )


def rayleigh_quotient(K, M, v) -> float:
    return float(v @ (K @ v) / (v @ (M @ v)))


def lift(base: SpectralResult) -> np.ndarray:
    """Pull the base eigenvector back to the stored vertices of the cover."""
    if base.classes is None:
        raise MismatchedPair("base result carries no identification map")
    return base.eigenvector[base.classes]


def pullback_report(cover, base, tol: float = 1e-6) -> dict:
    """Numbers behind :func:`verify_pullback`.

    For two :class:`SpectralResult` objects the base eigenvector is lifted
    to the cover; its Rayleigh quotient and relative residual on the
    cover's operators are reported alongside both eigenvalues.
    """
    from .registry import SpaceDescriptor, covering_sheets

    if isinstance(cover, SpaceDescriptor) or isinstance(base, SpaceDescriptor):
        if not (isinstance(cover, SpaceDescriptor) and isinstance(base, SpaceDescriptor)):
            raise MismatchedPair("cannot compare a registry space with a mesh result")
        if covering_sheets(cover, base) is None:
            raise MismatchedPair(f"{cover.name} is not registered as covering {base.name}")
        lam_c, lam_b = cover.require_lambda1(), base.require_lambda1()
        return {
            "lambda1_cover": lam_c,
            "lambda1_base": lam_b,
            "inequality_holds": lam_b >= lam_c - tol,
            "lift_rayleigh": None,
            "lift_deviation": 0.0,
            "holds": lam_b >= lam_c - tol,
        }

    if base.classes is None or cover.stiffness is None or len(base.classes) != cover.stiffness.shape[0]:
        raise MismatchedPair("base identification map does not match the cover mesh")
    f = lift(base)
    rq = rayleigh_quotient(cover.stiffness, cover.mass, f)
    Mf = cover.mass @ f
    residual = float(np.linalg.norm(cover.stiffness @ f - base.lambda1 * Mf) / np.linalg.norm(Mf))
    ineq = base.lambda1 >= cover.lambda1 - tol
    dev = abs(rq - base.lambda1)
    return {
        "lambda1_cover": cover.lambda1,
        "lambda1_base": base.lambda1,
        "inequality_holds": bool(ineq),
        "lift_rayleigh": rq,
        "lift_deviation": dev,
        "lift_residual": residual,
        "holds": bool(ineq and dev <= tol),
    }


def verify_pullback(cover, base, tol: float = 1e-6) -> bool:
    """Check ``lambda1(base) >= lambda1(cover) - tol`` for a covering pair.

    For mesh results the lifted base eigenfunction must also have Rayleigh
    quotient within ``tol`` of ``lambda1(base)`` on the cover. Registry
    descriptors with a registered covering relation are accepted too.
    """
    return pullback_report(cover, base, tol)["holds"]
