"""delta-invariants by minimization over mutually orthogonal subspaces.

A configuration of ``k`` mutually orthogonal subspaces with dimensions
``n_1, ..., n_k`` is encoded as one orthogonal ``n x n`` matrix ``Q``: the
first ``n_1`` columns span ``L_1``, the next ``n_2`` span ``L_2`` and so on,
with any trailing columns unused. Orthogonality between blocks is then
structural, and the objective

    f(Q) = tau(L_1) + ... + tau(L_k)

is minimized by Riemannian gradient descent on the orthogonal group with a
QR retraction, Barzilai-Borwein trial steps and Armijo backtracking, from
several uniformly random starting frames.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .partitions import Partition, c_coefficient, enumerate_tuples
from .tensor_core import CurvatureTensor, scalar_curvature


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 32
    max_iterations: int = 500
    gradient_tol: float = 1e-8
    armijo: float = 1e-4
    shrink: float = 0.5
    max_backtracks: int = 40
    rng_seed: int = 42
    workers: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if self.gradient_tol <= 0 or not 0 < self.armijo < 1 or not 0 < self.shrink < 1:
            raise ValueError("tolerances and step parameters must be positive")


@dataclass(frozen=True, eq=False)
class SubspaceConfig:
    frame: np.ndarray
    partition: Partition

    def subspaces(self) -> list:
        """Basis matrices of ``L_1, ..., L_k``."""
        out, start = [], 0
        for size in self.partition.parts:
            out.append(self.frame[:, start:start + size])
            start += size
        return out


@dataclass(frozen=True, eq=False)
class DeltaResult:
    value: float
    minimizer: SubspaceConfig
    objective: float
    restarts_used: int
    converged: bool
    gradient_norm: float = 0.0

    @property
    def partition(self) -> Partition:
        return self.minimizer.partition

    def to_json(self, verbose: bool = False) -> dict:
        out = {
            "value": self.value,
            "objective": self.objective,
            "partition": self.partition.to_json(),
            "converged": self.converged,
            "restarts_used": self.restarts_used,
        }
        if verbose:
            out["minimizer"] = self.minimizer.frame.tolist()
        return out


def _block_mask(p: Partition) -> np.ndarray:
    W = np.zeros((p.n, p.n))
    start = 0
    for size in p.parts:
        W[start:start + size, start:start + size] = 1.0
        start += size
    np.fill_diagonal(W, 0.0)
    return W


def blocked_objective(R: CurvatureTensor, Q, p: Partition) -> float:
    """``sum_j tau(L_j)`` for the subspaces encoded by the columns of ``Q``."""
    Q = np.asarray(Q, dtype=float)
    K = np.einsum("abcd,ai,bj,cj,di->ij", R.components, Q, Q, Q, Q)
    return float(np.sum(K * _block_mask(p)) / 2.0)


def _pair_matrix(Rc):
    """``R[a, b, c, d]`` as a matrix on index pairs ``(a, d) x (b, c)``."""
    n = Rc.shape[0]
    return np.ascontiguousarray(Rc.transpose(0, 3, 1, 2)).reshape(n * n, n * n)


def _objective_and_gradient(M, Q, W):
    # K[i, j] = R(q_i, q_j, q_j, q_i) = vec(q_i q_i^T) . M . vec(q_j q_j^T)
    n = Q.shape[0]
    U = (Q[:, None, :] * Q[None, :, :]).reshape(n * n, n)
    N = (M @ U).reshape(n, n, n)  # N[a, d, j] = R(e_a, q_j, q_j, e_d)
    K = U.T @ (M @ U)
    f = np.sum(K * W) / 2.0
    G = 2.0 * np.einsum("adj,di,ij->ai", N, Q, W)
    return f, G


def _qr_retract(Y):
    Q, Rfac = np.linalg.qr(Y)
    signs = np.sign(np.diag(Rfac))
    signs[signs == 0] = 1.0
    return Q * signs


def random_orthogonal(n: int, rng) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix)."""
    return _qr_retract(rng.standard_normal((n, n)))


def _descend(M, W, Q, opts):
    """Gradient descent on O(n) from ``Q``; returns (Q, f, grad norm, iterations)."""
    f, G = _objective_and_gradient(M, Q, W)
    A = Q.T @ G
    Omega = 0.5 * (A - A.T)
    gnorm = np.linalg.norm(Omega)
    step = 1.0 / max(np.max(np.abs(M)), 1e-12) / Q.shape[0]
    it = 0
    while it < opts.max_iterations and gnorm >= opts.gradient_tol:
        it += 1
        t = step
        for _ in range(opts.max_backtracks):
            Qn = _qr_retract(Q - t * (Q @ Omega))
            fn, Gn = _objective_and_gradient(M, Qn, W)
            # round-off allowance so BB steps survive once decreases drop below eps*|f|
            if fn <= f - opts.armijo * t * gnorm**2 + 1e-14 * max(1.0, abs(f)):
                break
            t *= opts.shrink
        else:
            # no descent available at machine precision
            break
        An = Qn.T @ Gn
        Omega_n = 0.5 * (An - An.T)
        S = -t * Omega
        Y = Omega_n - Omega
        sy = np.sum(S * Y)
        step = np.sum(S * S) / sy if sy > 0 else 4.0 * t
        step = float(np.clip(step, 1e-10, 1e10))
        Q, f, Omega = Qn, fn, Omega_n
        gnorm = np.linalg.norm(Omega)
    return Q, float(f), float(gnorm), it


def _worker_count(opts):
    if opts.workers is not None:
        return max(1, opts.workers)
    env = os.environ.get("DELTA_IDEAL_THREADS")
    return max(1, int(env)) if env else 1


def delta_invariant(
    R: CurvatureTensor, p: Partition, opts: OptimizerOptions | None = None
) -> DeltaResult:
    """``tau - min (tau(L_1) + ... + tau(L_k))`` over orthogonal configurations.

    Restarts draw their starting frames from independent child seeds of
    ``opts.rng_seed``, so the result does not depend on the number of
    worker threads. Ties between restarts go to the lowest restart index.
    Non-convergence is reported through ``converged=False``.
    """
    opts = opts or OptimizerOptions()
    if p.n != R.n:
        raise DimensionMismatch(f"partition is for n={p.n}, tensor has n={R.n}")
    tau = scalar_curvature(R)
    if p.k == 0:
        config = SubspaceConfig(np.eye(R.n), p)
        return DeltaResult(tau, config, 0.0, 0, True)

    Rc = np.asarray(R.components)
    M = _pair_matrix(Rc)
    W = _block_mask(p)
    seeds = np.random.SeedSequence(opts.rng_seed).spawn(opts.restarts)

    def run(seed):
        Q0 = random_orthogonal(R.n, np.random.default_rng(seed))
        return _descend(M, W, Q0, opts)

    workers = _worker_count(opts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run, seeds))
    else:
        runs = [run(s) for s in seeds]

    best = min(range(len(runs)), key=lambda i: (runs[i][1], i))
    Q, f, gnorm, _ = runs[best]
    return DeltaResult(
        value=tau - f,
        minimizer=SubspaceConfig(Q, p),
        objective=f,
        restarts_used=len(runs),
        converged=gnorm < opts.gradient_tol,
        gradient_norm=gnorm,
    )


def delta_constant_curvature(n: int, c0: float, p: Partition) -> float:
    """Closed form for space forms: ``(c0/2) (n(n-1) - sum n_j (n_j - 1))``."""
    if p.n != n:
        raise DimensionMismatch(f"partition is for n={p.n}, expected n={n}")
    return 0.5 * c0 * (n * (n - 1) - sum(m * (m - 1) for m in p.parts))


def delta_bruteforce(
    R: CurvatureTensor, p: Partition, samples: int, rng_seed: int = 0, chunk: int = 4096
) -> float:
    """Monte-Carlo estimate of the invariant from random orthogonal frames.

    The sampled minimum can only overshoot the true infimum, so the
    returned value never exceeds the exact invariant (up to rounding).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if p.n != R.n:
        raise DimensionMismatch(f"partition is for n={p.n}, tensor has n={R.n}")
    tau = scalar_curvature(R)
    if p.k == 0:
        return tau
    return tau - sampled_minimum(R, p, samples, rng_seed, chunk)


def sampled_minimum(R, p, samples, rng_seed=0, chunk=4096) -> float:
    """Smallest blocked objective over ``samples`` Haar-random frames."""
    rng = np.random.default_rng(rng_seed)
    W = _block_mask(p)
    M = _pair_matrix(np.asarray(R.components))
    n = R.n
    best = np.inf
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        Z = rng.standard_normal((m, n, n))
        Q, Rfac = np.linalg.qr(Z)
        signs = np.sign(np.diagonal(Rfac, axis1=1, axis2=2))
        signs[signs == 0] = 1.0
        Q = Q * signs[:, None, :]
        U = (Q[:, :, None, :] * Q[:, None, :, :]).reshape(m, n * n, n)
        K = np.swapaxes(U, 1, 2) @ (M @ U)
        best = min(best, float(np.min(np.sum(K * W, axis=(1, 2)) / 2.0)))
        done += m
    return best


@dataclass(frozen=True, eq=False)
class NormalizedDelta:
    """Maximum of delta/c over all admissible tuples."""

    value: float
    partition: Partition
    converged: bool
    table: list = field(default_factory=list)

    def __iter__(self):
        # unpacks as (value, partition)
        return iter((self.value, self.partition))


TIE_TOL = 1e-12


def max_normalized_delta(R: CurvatureTensor, opts: OptimizerOptions | None = None) -> NormalizedDelta:
    """Maximum of ``delta(p) / c(p)`` over :func:`enumerate_tuples`.

    Ties (within ``TIE_TOL`` relative) go to the earliest tuple in
    enumeration order, so the flat tensor yields the empty tuple.
    """
    opts = opts or OptimizerOptions()
    best_val, best_p = -np.inf, None
    converged = True
    table = []
    for p in enumerate_tuples(R.n):
        res = delta_invariant(R, p, opts)
        ratio = res.value / c_coefficient(p)
        table.append((p, res.value, ratio, res.converged))
        converged &= res.converged
        if best_p is None or ratio > best_val + TIE_TOL * max(1.0, abs(best_val)):
            best_val, best_p = ratio, p
    return NormalizedDelta(float(best_val), best_p, converged, table)
