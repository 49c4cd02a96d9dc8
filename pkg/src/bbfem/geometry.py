"""Affine tetrahedron geometry and the constant geometric tables used by assembly."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .combinatorics import EDGES, face_vertices

__all__ = [
    "DegenerateElementError",
    "Tetrahedron",
    "GeometricTables",
    "TriangleFace",
    "build_tetrahedron",
    "barycentric",
    "geometric_tables",
    "reference_tetrahedron",
]

REFERENCE_VERTICES = np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])


class DegenerateElementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Tetrahedron:
    vertices: np.ndarray
    volume: float
    grad_lambda: np.ndarray

    @cached_property
    def orientation(self):
        """+1 when (x2-x1, x3-x1, x4-x1) is right handed."""
        return 1 if np.linalg.det(self.vertices[1:] - self.vertices[0]) > 0 else -1

    @property
    def diameter(self):
        v = self.vertices
        return max(np.linalg.norm(v[i] - v[j]) for i, j in EDGES)

    def to_physical(self, lam):
        return np.asarray(lam) @ self.vertices

    def face(self, face):
        return TriangleFace.of(self, face)


def build_tetrahedron(vertices, normalize=True):
    """Tetrahedron from four points.

    With ``normalize`` the last two vertices are swapped when needed so that
    the element is positively oriented (epsilon_234 > 0).  Meshes pass
    ``normalize=False`` and keep their ascending-global-id vertex order.
    """
    v = np.array(vertices, dtype=float).reshape(4, 3)
    jac = (v[1:] - v[0]).T
    det = np.linalg.det(jac)
    scale = np.ptp(v, axis=0).max()
    if abs(det) <= 1e-12 * max(scale, np.finfo(float).tiny) ** 3:
        raise DegenerateElementError(f"degenerate tetrahedron, volume {det / 6:g}")
    if normalize and det < 0:
        v = v[[0, 1, 3, 2]]
        jac = (v[1:] - v[0]).T
        det = -det
    inv = np.linalg.inv(jac)  # rows: grad lambda_2..4
    grads = np.vstack([-inv.sum(axis=0), inv])
    grads.setflags(write=False)
    v.setflags(write=False)
    return Tetrahedron(vertices=v, volume=abs(det) / 6.0, grad_lambda=grads)


def reference_tetrahedron():
    return build_tetrahedron(REFERENCE_VERTICES)


def barycentric(tet, x):
    """Barycentric coordinates of point(s) ``x`` (shape (3,) or (m, 3))."""
    x = np.asarray(x, dtype=float)
    lam_rest = (x - tet.vertices[0]) @ tet.grad_lambda[1:].T
    lam1 = 1.0 - lam_rest.sum(axis=-1, keepdims=True)
    return np.concatenate([lam1, lam_rest], axis=-1)


@dataclass(frozen=True, eq=False)
class GeometricTables:
    """t_ij = grad l_i x grad l_j, eps_ijk and the integrals S0, S1, S2.

    ``S1`` is the 6x6 table over the edges (i<j); ``S1_full`` is the same data
    over all ordered pairs, shape (4, 4, 4, 4), antisymmetric in each pair.
    """

    volume: float
    grad_lambda: np.ndarray
    t: np.ndarray
    eps: np.ndarray
    S0: np.ndarray
    S1: np.ndarray
    S1_full: np.ndarray
    S2: float

    @property
    def eps123(self):
        return float(self.eps[0, 1, 2])


def geometric_tables(tet):
    g = tet.grad_lambda
    vol = tet.volume
    t = np.cross(g[:, None, :], g[None, :, :])
    eps = np.einsum("id,jkd->ijk", g, t)
    S0 = g @ g.T * vol
    S1_full = np.einsum("abx,cdx->abcd", t, t) * vol
    S1 = np.array([[S1_full[i, j, k, l] for k, l in EDGES] for i, j in EDGES])
    S2 = float(eps[0, 1, 2] ** 2 * vol)
    for arr in (t, eps, S0, S1, S1_full):
        arr.setflags(write=False)
    return GeometricTables(vol, g, t, eps, S0, S1, S1_full, S2)


@dataclass(frozen=True, eq=False)
class TriangleFace:
    tet: Tetrahedron
    local: tuple
    normal: np.ndarray
    area: float

    @classmethod
    def of(cls, tet, face):
        i, j, k = face_vertices(face)
        x = tet.vertices
        cr = np.cross(x[j] - x[i], x[k] - x[i])
        area = 0.5 * np.linalg.norm(cr)
        outward = -tet.grad_lambda[face]
        outward = outward / np.linalg.norm(outward)
        return cls(tet, (i, j, k), outward, float(area))

    @property
    def ordered_normal(self):
        """Unit normal by the right-hand rule on the ascending vertex triple."""
        x = self.tet.vertices
        i, j, k = self.local
        cr = np.cross(x[j] - x[i], x[k] - x[i])
        return cr / np.linalg.norm(cr)

    def points(self, lam_face):
        """Physical points from face barycentrics (m, 3)."""
        return np.asarray(lam_face) @ self.tet.vertices[list(self.local)]

    def tet_barycentric(self, lam_face):
        lam_face = np.atleast_2d(lam_face)
        out = np.zeros((lam_face.shape[0], 4))
        out[:, list(self.local)] = lam_face
        return out

    def face_gradients(self):
        """Surface gradients of the three face barycentrics (3, 3)."""
        g = self.tet.grad_lambda[list(self.local)]
        n = self.normal
        return g - np.outer(g @ n, n)
