"""Closed triangle meshes, optionally with a vertex identification map.

An identification map sends each vertex to a representative vertex. It
realizes quotients (the antipodal map on a sphere mesh) and periodic
gluings (a planar grid glued into a flat torus) without re-embedding the
quotient in 3-space: the Laplacian assembly merges identified rows and
columns instead.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from ..errors import DegenerateFace, NonManifoldEdge, NotCentrallySymmetric

AREA_TOL = 1e-12
SYMMETRY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TriMesh:
    vertices: np.ndarray
    faces: np.ndarray
    identification: np.ndarray | None = None

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float).reshape(-1, 3)
        F = np.array(self.faces, dtype=np.int64).reshape(-1, 3)
        if F.size and (F.min() < 0 or F.max() >= len(V)):
            raise ValueError("face indices out of range")
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "faces", F)
        if self.identification is not None:
            ident = np.array(self.identification, dtype=np.int64)
            if ident.shape != (len(V),):
                raise ValueError("identification map must have one entry per vertex")
            if ident.min() < 0 or ident.max() >= len(V) or np.any(ident[ident] != ident):
                raise ValueError("identification must map each vertex to a fixed representative")
            object.__setattr__(self, "identification", ident)

    @property
    def classes(self) -> np.ndarray:
        """Compact class label (0..num_vertices-1) of every stored vertex."""
        if self.identification is None:
            return np.arange(len(self.vertices))
        _, labels = np.unique(self.identification, return_inverse=True)
        return labels

    @property
    def num_vertices(self) -> int:
        """Vertex count after identification."""
        if self.identification is None:
            return len(self.vertices)
        return len(np.unique(self.identification))

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def face_areas(self) -> np.ndarray:
        V, F = self.vertices, self.faces
        cross = np.cross(V[F[:, 1]] - V[F[:, 0]], V[F[:, 2]] - V[F[:, 0]])
        return 0.5 * np.linalg.norm(cross, axis=1)

    def validate(self):
        """Raise if a face is degenerate or an edge is not shared consistently.

        Without identification every edge must lie on exactly two faces.
        With one, every glued edge class must lie on the same even number of
        faces (2 for a periodic gluing, 4 for a two-sheeted quotient).
        """
        areas = self.face_areas()
        bad = np.flatnonzero(areas <= AREA_TOL)
        if bad.size:
            raise DegenerateFace(f"face {bad[0]} has area {areas[bad[0]]:.3e}")
        lab = self.classes
        F = lab[self.faces]
        if np.any(F[:, 0] == F[:, 1]) or np.any(F[:, 1] == F[:, 2]) or np.any(F[:, 0] == F[:, 2]):
            raise DegenerateFace("a face has two identified corners")
        edges = np.sort(np.concatenate([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]]), axis=1)
        counts = Counter(map(tuple, edges))
        values = set(counts.values())
        if self.identification is None:
            if values != {2}:
                edge = next(e for e, c in counts.items() if c != 2)
                raise NonManifoldEdge(f"edge {edge} lies on {counts[edge]} faces")
        elif len(values) != 1 or next(iter(values)) % 2:
            raise NonManifoldEdge(f"glued edges lie on inconsistent face counts {sorted(values)}")
        return self

    def to_json(self) -> dict:
        out = {"vertices": self.vertices.tolist(), "faces": self.faces.tolist()}
        if self.identification is not None:
            out["identification"] = [
                [int(v), int(r)] for v, r in enumerate(self.identification) if v != r
            ]
        return out


def identification_from_pairs(num_vertices, pairs) -> np.ndarray:
    """Turn a list of ``[v, w]`` index pairs into a representative map.

    Pairs are merged transitively; each class is represented by its
    smallest index.
    """
    parent = np.arange(num_vertices)

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in pairs:
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return np.array([find(v) for v in range(num_vertices)])


def mesh_from_json(data) -> TriMesh:
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    V = np.asarray(data["vertices"], dtype=float)
    ident = None
    if data.get("identification"):
        ident = identification_from_pairs(len(V), data["identification"])
    return TriMesh(V, data["faces"], ident)


def read_off(path) -> TriMesh:
    """Parse an OFF file with triangular faces (``3 i j k`` lines)."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise ValueError("missing OFF header")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    V = np.array(tokens[pos:pos + 3 * nv], dtype=float).reshape(nv, 3)
    pos += 3 * nv
    faces = []
    for _ in range(nf):
        count = int(tokens[pos])
        if count != 3:
            raise ValueError(f"only triangular faces are supported, got a {count}-gon")
        faces.append([int(t) for t in tokens[pos + 1:pos + 4]])
        pos += 1 + count
    return TriMesh(V, faces)


def write_off(mesh: TriMesh, path):
    lines = ["OFF", f"{len(mesh.vertices)} {len(mesh.faces)} 0"]
    lines += [" ".join(repr(float(x)) for x in v) for v in mesh.vertices]
    lines += ["3 " + " ".join(str(int(i)) for i in f) for f in mesh.faces]
    Path(path).write_text("\n".join(lines) + "\n")


def icosahedron() -> TriMesh:
    t = (1.0 + 5.0**0.5) / 2.0
    V = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    F = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    return TriMesh(V / np.linalg.norm(V, axis=1, keepdims=True), F)


def icosphere(level: int = 0) -> TriMesh:
    """Unit-sphere mesh from ``level`` rounds of 1-to-4 icosahedron subdivision.

    Level ``l`` has ``10 * 4**l + 2`` vertices (2562 at level 4).
    """
    mesh = icosahedron()
    V, F = list(mesh.vertices), mesh.faces
    for _ in range(level):
        cache = {}

        def midpoint(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in cache:
                m = V[a] + V[b]
                V.append(m / np.linalg.norm(m))
                cache[key] = len(V) - 1
            return cache[key]

        new = []
        for a, b, c in F:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        F = np.array(new)
    return TriMesh(np.array(V), F)


def octahedron() -> TriMesh:
    V = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)
    F = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
         [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]]
    return TriMesh(V, F)


def tetrahedron() -> TriMesh:
    V = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float) / 3**0.5
    F = [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
    return TriMesh(V, F)


def flat_torus_grid(cells: int = 64, side: float = 2 * np.pi) -> TriMesh:
    """Planar ``cells x cells`` grid of the square ``[0, side]^2`` glued periodically."""
    ticks = np.linspace(0.0, side, cells + 1)
    X, Y = np.meshgrid(ticks, ticks, indexing="ij")
    V = np.column_stack([X.ravel(), Y.ravel(), np.zeros(X.size)])
    idx = np.arange((cells + 1) ** 2).reshape(cells + 1, cells + 1)
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[1:, 1:].ravel(), idx[:-1, 1:].ravel()
    F = np.concatenate([np.column_stack([a, b, c]), np.column_stack([a, c, d])])
    I, J = np.divmod(np.arange((cells + 1) ** 2), cells + 1)
    rep = idx[I % cells, J % cells]
    return TriMesh(V, F, rep)


def antipodal_quotient(m: TriMesh) -> TriMesh:
    """Identify each vertex with its antipode, modelling S^2 -> RP^2.

    Raises
    ------
    NotCentrallySymmetric
        If some vertex has no partner within ``1e-8`` of its negative, or
        the face set is not invariant under the pairing.
    """
    if m.identification is not None:
        raise ValueError("mesh already carries an identification map")
    V = m.vertices
    dist, partner = cKDTree(V).query(-V)
    bad = np.flatnonzero((dist > SYMMETRY_TOL) | (partner == np.arange(len(V))))
    if bad.size:
        raise NotCentrallySymmetric(bad[0])
    if np.any(partner[partner] != np.arange(len(V))):
        raise NotCentrallySymmetric(int(np.flatnonzero(partner[partner] != np.arange(len(V)))[0]))
    faces = {tuple(sorted(f)) for f in m.faces.tolist()}
    for f in m.faces.tolist():
        if tuple(sorted(partner[f].tolist())) not in faces:
            raise NotCentrallySymmetric(f[0])
    rep = np.minimum(np.arange(len(V)), partner)
    return TriMesh(V, m.faces, rep)
