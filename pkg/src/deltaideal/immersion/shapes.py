"""Builtin immersions with analytic first and second partials."""
from __future__ import annotations

import numpy as np

from .core import ParametricImmersion

TWO_PI = 2 * np.pi


def _sphere_factors(theta):
    """Per-component factor tables for hyperspherical coordinates.

    Component ``k < n`` is ``prod_{j<k} sin(t_j) * cos(t_k)``; component
    ``n`` is ``prod_j sin(t_j)``. Returns values and first/second
    derivatives of every factor, each shaped ``(n + 1, n)``.
    """
    n = len(theta)
    s, c = np.sin(theta), np.cos(theta)
    val = np.ones((n + 1, n))
    d1 = np.zeros((n + 1, n))
    d2 = np.zeros((n + 1, n))
    for k in range(n + 1):
        for j in range(min(k, n)):
            val[k, j], d1[k, j], d2[k, j] = s[j], c[j], -s[j]
        if k < n:
            val[k, k], d1[k, k], d2[k, k] = c[k], -s[k], -c[k]
    return val, d1, d2


def _sphere_order(n):
    # n=2 gives (sin t0 cos t1, sin t0 sin t1, cos t0)
    return [n - 1, n] + list(range(n - 2, -1, -1))


def sphere(n: int = 2, radius: float = 1.0) -> ParametricImmersion:
    """Round ``n``-sphere in ``R^(n+1)`` in hyperspherical coordinates.

    The first ``n - 1`` angles range over ``(0, pi)`` and the last over
    ``(0, 2 pi)``.
    """
    order = _sphere_order(n)

    def position(t):
        val, _, _ = _sphere_factors(np.asarray(t, dtype=float))
        return radius * np.prod(val, axis=1)[order]

    def jacobian(t):
        val, d1, _ = _sphere_factors(np.asarray(t, dtype=float))
        J = np.empty((n + 1, n))
        for i in range(n):
            f = val.copy()
            f[:, i] = d1[:, i]
            J[:, i] = np.prod(f, axis=1)
        return radius * J[order]

    def hessian(t):
        val, d1, d2 = _sphere_factors(np.asarray(t, dtype=float))
        H = np.empty((n, n, n + 1))
        for i in range(n):
            for j in range(i, n):
                f = val.copy()
                if i == j:
                    f[:, i] = d2[:, i]
                else:
                    f[:, i] = d1[:, i]
                    f[:, j] = d1[:, j]
                H[i, j] = H[j, i] = np.prod(f, axis=1)
        return radius * H[:, :, order]

    domain = tuple([(0.0, np.pi)] * (n - 1) + [(0.0, TWO_PI)])
    return ParametricImmersion(
        n, n + 1, position, domain, jacobian, hessian,
        name=f"sphere:{n}", params={"radius": radius},
    )


def plane() -> ParametricImmersion:
    return ParametricImmersion(
        2, 3,
        lambda u: np.array([u[0], u[1], 0.0]),
        ((-10.0, 10.0), (-10.0, 10.0)),
        lambda u: np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
        lambda u: np.zeros((2, 2, 3)),
        name="plane",
    )


def cylinder(radius: float = 1.0) -> ParametricImmersion:
    a = radius

    def hessian(u):
        H = np.zeros((2, 2, 3))
        H[0, 0] = [-a * np.cos(u[0]), -a * np.sin(u[0]), 0.0]
        return H

    return ParametricImmersion(
        2, 3,
        lambda u: np.array([a * np.cos(u[0]), a * np.sin(u[0]), u[1]]),
        ((0.0, TWO_PI), (-10.0, 10.0)),
        lambda u: np.array([[-a * np.sin(u[0]), 0.0], [a * np.cos(u[0]), 0.0], [0.0, 1.0]]),
        hessian,
        name="cylinder", params={"radius": radius},
    )


def torus(R: float = 2.0, r: float = 1.0) -> ParametricImmersion:
    """Torus of revolution; parameters (theta around the tube, phi around the axis)."""

    def position(u):
        t, p = u
        w = R + r * np.cos(t)
        return np.array([w * np.cos(p), w * np.sin(p), r * np.sin(t)])

    def jacobian(u):
        t, p = u
        w = R + r * np.cos(t)
        return np.array([
            [-r * np.sin(t) * np.cos(p), -w * np.sin(p)],
            [-r * np.sin(t) * np.sin(p), w * np.cos(p)],
            [r * np.cos(t), 0.0],
        ])

    def hessian(u):
        t, p = u
        w = R + r * np.cos(t)
        H = np.empty((2, 2, 3))
        H[0, 0] = [-r * np.cos(t) * np.cos(p), -r * np.cos(t) * np.sin(p), -r * np.sin(t)]
        H[0, 1] = H[1, 0] = [r * np.sin(t) * np.sin(p), -r * np.sin(t) * np.cos(p), 0.0]
        H[1, 1] = [-w * np.cos(p), -w * np.sin(p), 0.0]
        return H

    return ParametricImmersion(
        2, 3, position, ((0.0, TWO_PI), (0.0, TWO_PI)), jacobian, hessian,
        name="torus", params={"R": R, "r": r},
    )


def ellipsoid(a: float = 1.0, b: float = 1.0, c: float = 1.0) -> ParametricImmersion:
    scale = np.array([a, b, c])
    base = sphere(2)
    return ParametricImmersion(
        2, 3,
        lambda u: scale * base.position(u),
        base.domain,
        lambda u: scale[:, None] * base.jacobian(u),
        lambda u: scale * base.hessian(u),
        name="ellipsoid", params={"a": a, "b": b, "c": c},
    )


def product_torus(r1: float = 2**-0.5, r2: float = 2**-0.5) -> ParametricImmersion:
    """Flat torus ``S^1(r1) x S^1(r2)`` in ``R^4`` (Clifford torus for equal radii)."""

    def hessian(u):
        H = np.zeros((2, 2, 4))
        H[0, 0, :2] = [-r1 * np.cos(u[0]), -r1 * np.sin(u[0])]
        H[1, 1, 2:] = [-r2 * np.cos(u[1]), -r2 * np.sin(u[1])]
        return H

    return ParametricImmersion(
        2, 4,
        lambda u: np.array([r1 * np.cos(u[0]), r1 * np.sin(u[0]), r2 * np.cos(u[1]), r2 * np.sin(u[1])]),
        ((0.0, TWO_PI), (0.0, TWO_PI)),
        lambda u: np.array([
            [-r1 * np.sin(u[0]), 0.0], [r1 * np.cos(u[0]), 0.0],
            [0.0, -r2 * np.sin(u[1])], [0.0, r2 * np.cos(u[1])],
        ]),
        hessian,
        name="product-torus", params={"r1": r1, "r2": r2},
    )


BUILTIN_SHAPES = {
    "sphere": sphere,
    "plane": plane,
    "cylinder": cylinder,
    "torus": torus,
    "ellipsoid": ellipsoid,
    "product-torus": product_torus,
}


def builtin_shape(name: str, *params: float) -> ParametricImmersion:
    """Look up a builtin shape; ``sphere`` takes its dimension as first parameter."""
    if name not in BUILTIN_SHAPES:
        raise KeyError(f"unknown shape {name!r}; choose from {sorted(BUILTIN_SHAPES)}")
    if name == "sphere" and params:
        return sphere(int(params[0]), *params[1:])
    return BUILTIN_SHAPES[name](*params)


def sample_points(im: ParametricImmersion, count: int, rng=None, margin: float = 1e-3) -> np.ndarray:
    """Uniform parameter points at least ``margin`` inside every domain bound."""
    rng = np.random.default_rng(rng)
    lo = np.array([a for a, _ in im.domain]) + margin
    hi = np.array([b for _, b in im.domain]) - margin
    return lo + (hi - lo) * rng.random((count, im.n))
