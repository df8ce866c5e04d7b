"""Immersions given only as position samples on a rectilinear parameter grid.

JSON layout::

    {"n": 2, "m": 3, "grid": [[[u1, u2], [x1, x2, x3]], ...]}

The parameter points must fill a full tensor-product grid (any order).
Partials are taken with second-order finite differences on the grid, so
only nodes at least two steps from the boundary are sampled.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DomainError
from .core import ImmersionSample, forms_from_derivatives


class SampledImmersion:
    def __init__(self, n, m, points, positions):
        points = np.asarray(points, dtype=float).reshape(-1, n)
        positions = np.asarray(positions, dtype=float).reshape(-1, m)
        self.n, self.m = n, m
        self.axes = [np.unique(points[:, i]) for i in range(n)]
        shape = tuple(len(a) for a in self.axes)
        if np.prod(shape) != len(points):
            raise ValueError("parameter points do not form a full rectilinear grid")
        index = tuple(np.searchsorted(a, points[:, i]) for i, a in enumerate(self.axes))
        X = np.empty(shape + (m,))
        X[index] = positions
        self.X = X
        self.J = np.stack(np.gradient(X, *self.axes, axis=tuple(range(n)), edge_order=2), axis=-1)
        H = np.empty(shape + (n, n, m))
        for i in range(n):
            d = np.gradient(self.J[..., i], *self.axes, axis=tuple(range(n)), edge_order=2)
            for j in range(n):
                H[..., i, j, :] = d[j]
        self.H = 0.5 * (H + np.swapaxes(H, -2, -3))
        self.name = "sampled"

    @classmethod
    def from_json(cls, data) -> "SampledImmersion":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        pts = [row[0] for row in data["grid"]]
        pos = [row[1] for row in data["grid"]]
        return cls(int(data["n"]), int(data["m"]), pts, pos)

    def _node(self, u):
        idx = []
        for x, a in zip(np.atleast_1d(u), self.axes):
            i = int(np.argmin(np.abs(a - x)))
            if abs(a[i] - x) > 1e-9 * max(1.0, abs(x)) or i < 2 or i > len(a) - 3:
                raise DomainError(f"{u} is not an interior grid node")
            idx.append(i)
        return tuple(idx)

    def default_points(self) -> list:
        inner = [a[2:-2] for a in self.axes]
        mesh = np.meshgrid(*inner, indexing="ij")
        return list(np.stack([g.ravel() for g in mesh], axis=1))

    def sample(self, u) -> ImmersionSample:
        k = self._node(u)
        return forms_from_derivatives(u, self.X[k], self.J[k], self.H[k])
