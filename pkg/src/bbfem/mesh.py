"""Conforming tetrahedral meshes of a cube and their entity numbering.

Every element keeps its vertices in ascending global order.  Local edges and
faces then inherit the global orientation (edges point from the lower to the
higher id, faces are ordered ascending), so shared entities are matched by
restricting multi-indices, with no permutation or sign bookkeeping.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .combinatorics import EDGES, face_vertices
from .geometry import build_tetrahedron

__all__ = ["Mesh", "OrientationConvention", "cube_mesh", "orient", "dump_mesh", "load_mesh"]

_LOCAL_FACES = np.array([face_vertices(l) for l in range(4)])
_LOCAL_EDGES = np.array(EDGES)


@dataclass(eq=False)
class Mesh:
    vertices: np.ndarray
    tets: np.ndarray
    edges: np.ndarray = field(init=False)
    faces: np.ndarray = field(init=False)
    tet_edges: np.ndarray = field(init=False)
    tet_faces: np.ndarray = field(init=False)
    face_tets: np.ndarray = field(init=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        tets = np.sort(np.asarray(self.tets, dtype=np.int64).reshape(-1, 4), axis=1)
        if tets.size and (tets.min() < 0 or tets.max() >= len(self.vertices)):
            raise ValueError("tet connectivity refers to missing vertices")
        if np.any(tets[:, 1:] == tets[:, :-1]):
            raise ValueError("tet with repeated vertices")
        self.tets = tets
        e = tets[:, _LOCAL_EDGES].reshape(-1, 2)
        self.edges, inv = np.unique(e, axis=0, return_inverse=True)
        self.tet_edges = inv.reshape(-1, 6)
        f = tets[:, _LOCAL_FACES].reshape(-1, 3)
        self.faces, inv = np.unique(f, axis=0, return_inverse=True)
        self.tet_faces = inv.reshape(-1, 4)
        counts = np.bincount(self.tet_faces.ravel(), minlength=len(self.faces))
        if np.any(counts > 2):
            raise ValueError("non-manifold mesh: a face is shared by more than two tets")
        ft = np.full((len(self.faces), 2), -1, dtype=np.int64)
        for t, l in itertools.product(range(len(tets)), range(4)):
            fid = self.tet_faces[t, l]
            ft[fid, 0 if ft[fid, 0] < 0 else 1] = t
        self.face_tets = ft
        for t in range(len(tets)):
            self.element(t)  # raises on degenerate elements

    # sizes
    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_tets(self):
        return len(self.tets)

    def counts(self):
        return self.n_vertices, self.n_edges, self.n_faces, self.n_tets

    # boundary flags
    @cached_property
    def boundary_faces(self):
        return self.face_tets[:, 1] < 0

    @cached_property
    def boundary_edges(self):
        flag = np.zeros(self.n_edges, dtype=bool)
        bf = self.faces[self.boundary_faces]
        if len(bf):
            be = np.concatenate([bf[:, [0, 1]], bf[:, [0, 2]], bf[:, [1, 2]]])
            idx = _lookup(self.edges, be)
            flag[idx] = True
        return flag

    @cached_property
    def boundary_vertices(self):
        flag = np.zeros(self.n_vertices, dtype=bool)
        flag[self.faces[self.boundary_faces].ravel()] = True
        return flag

    def element(self, t):
        """Tetrahedron of element ``t`` in ascending global vertex order."""
        return self._elements[t] if t in self._elements else self._make(t)

    @cached_property
    def _elements(self):
        return {}

    def _make(self, t):
        tet = build_tetrahedron(self.vertices[self.tets[t]], normalize=False)
        self._elements[t] = tet
        return tet

    @cached_property
    def congruence_classes(self):
        """(class id per element, representative element per class).

        Elements whose vertex offsets agree (translates of each other) share
        every element matrix.
        """
        v = self.vertices[self.tets]
        off = v[:, 1:] - v[:, :1]
        scale = max(np.abs(off).max(), 1e-300)
        key = np.round(off.reshape(len(v), -1) / scale * 1e9).astype(np.int64)
        _, first, inv = np.unique(key, axis=0, return_index=True, return_inverse=True)
        return inv.ravel(), first

    def volume(self):
        return float(sum(self.element(t).volume for t in range(self.n_tets)))


def _lookup(table, rows):
    """Row positions of ``rows`` in the lexicographically sorted ``table``."""
    view = np.ascontiguousarray(table).view([("", table.dtype)] * table.shape[1]).ravel()
    q = np.ascontiguousarray(rows).view([("", rows.dtype)] * rows.shape[1]).ravel()
    idx = np.searchsorted(view, q)
    if np.any(idx >= len(view)) or np.any(view[np.minimum(idx, len(view) - 1)] != q):
        raise KeyError("entity not found")
    return idx


def cube_mesh(m=1, scale=1.0):
    """Kuhn split of ``[0, scale]^3`` into ``m^3`` cubes of 6 tetrahedra each.

    All six tetrahedra of a cube share its main diagonal; each follows one
    monotone lattice path from the lower to the upper corner.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    m = int(m)
    k = m + 1
    g = np.arange(k) * (scale / m)
    X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
    verts = np.stack([X.transpose(2, 1, 0).ravel(), Y.transpose(2, 1, 0).ravel(),
                      Z.transpose(2, 1, 0).ravel()], axis=1)
    step = np.array([1, k, k * k])

    def vid(i, j, l):
        return i + k * j + k * k * l

    tets = []
    for l, j, i in itertools.product(range(m), repeat=3):
        base = vid(i, j, l)
        for perm in itertools.permutations(range(3)):
            path = [base]
            for axis in perm:
                path.append(path[-1] + step[axis])
            tets.append(path)
    return Mesh(verts, np.array(tets))


@dataclass(frozen=True)
class OrientationConvention:
    """Per-element orientation data relative to the global entity choices.

    ``edge_signs``: +1 when the local edge runs from lower to higher global id;
    ``face_perms``: local-to-global vertex permutation of each face;
    ``face_normal_signs``: +1 when the element's outward normal agrees with
    the right-hand normal of the face's ascending global vertex triple.
    """

    edge_signs: np.ndarray
    face_perms: np.ndarray
    face_normal_signs: np.ndarray


def orient(mesh):
    T = mesh.n_tets
    tv = mesh.tets
    edge_signs = np.where(tv[:, _LOCAL_EDGES[:, 0]] < tv[:, _LOCAL_EDGES[:, 1]], 1, -1)
    face_perms = np.argsort(tv[:, _LOCAL_FACES], axis=2)
    normal_signs = np.zeros((T, 4), dtype=np.int64)
    for t in range(T):
        x = mesh.vertices[tv[t]]
        for l in range(4):
            gids = mesh.faces[mesh.tet_faces[t, l]]
            p = mesh.vertices[gids]
            nrm = np.cross(p[1] - p[0], p[2] - p[0])
            inward = x[l] - p[0]
            normal_signs[t, l] = -1 if np.dot(nrm, inward) > 0 else 1
    # conformity: an interior face must see one + and one - incidence
    for f in np.flatnonzero(~mesh.boundary_faces):
        (t0, t1) = mesh.face_tets[f]
        s0 = normal_signs[t0][mesh.tet_faces[t0] == f][0]
        s1 = normal_signs[t1][mesh.tet_faces[t1] == f][0]
        if s0 == s1:
            raise ValueError(f"face {f} has inconsistent incidences; mesh is not conforming")
    return OrientationConvention(edge_signs, face_perms, normal_signs)


def dump_mesh(mesh, path):
    """ASCII: ``V E F T``, vertex coordinates, then 0-based tet connectivity."""
    with open(path, "w") as fh:
        fh.write("%d %d %d %d\n" % mesh.counts())
        np.savetxt(fh, mesh.vertices, fmt="%.17g")
        np.savetxt(fh, mesh.tets, fmt="%d")


def load_mesh(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4:
            raise ValueError("mesh header must read 'V E F T'")
        V, E, F, T = (int(x) for x in header)
        data = fh.read().split()
    coords = np.array(data[:3 * V], dtype=float).reshape(V, 3)
    tets = np.array(data[3 * V:3 * V + 4 * T], dtype=np.int64).reshape(T, 4)
    mesh = Mesh(coords, tets)
    if (mesh.n_edges, mesh.n_faces) != (E, F):
        raise ValueError("entity counts in the header do not match the connectivity")
    return mesh
