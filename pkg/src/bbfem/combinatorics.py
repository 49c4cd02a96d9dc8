"""Multi-indices, Bernstein index sets and geometry-free Bernstein coefficients.

Vertices are numbered 0..3 throughout the package.  A face is named by the
vertex opposite to it, an edge by its (ascending) vertex pair.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

__all__ = [
    "MultiIndex",
    "INDEX_SET_KINDS",
    "enumerate_indices",
    "removed_index",
    "domain_point",
    "multinomial",
    "product_coeff",
    "mass_coeff",
    "IndexTable",
    "index_table",
    "mass_table",
    "face_vertices",
    "EDGES",
]

EDGES = tuple(itertools.combinations(range(4), 2))


def face_vertices(face):
    """Ascending vertex triple of the face opposite ``face``."""
    return tuple(v for v in range(4) if v != face)


class MultiIndex(tuple):
    """Four non-negative integers; ``degree`` is their sum."""

    __slots__ = ()

    def __new__(cls, entries):
        entries = tuple(int(a) for a in entries)
        if len(entries) != 4:
            raise ValueError(f"multi-index needs 4 entries, got {len(entries)}")
        if min(entries) < 0:
            raise ValueError(f"multi-index entries must be >= 0: {entries}")
        return super().__new__(cls, entries)

    @property
    def degree(self):
        return sum(self)

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other))

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"


def _all(n):
    # ascending lexicographic order
    out = []
    for a0 in range(n + 1):
        for a1 in range(n + 1 - a0):
            for a2 in range(n + 1 - a0 - a1):
                out.append((a0, a1, a2, n - a0 - a1 - a2))
    return out


def _support(alpha):
    return tuple(k for k in range(4) if alpha[k] > 0)


INDEX_SET_KINDS = (
    "full",
    "interior",
    "edge_bubble",
    "face_bubble",
    "face_lattice",
    "face_lattice_primed",
    "full_primed",
)


@lru_cache(maxsize=None)
def _enumerate(kind, n, entity):
    if kind in ("full", "full_primed"):
        out = _all(n)
    elif kind == "interior":
        out = [a for a in _all(n) if min(a) > 0]
    elif kind == "edge_bubble":
        e = tuple(sorted(entity))
        out = [a for a in _all(n) if _support(a) == e]
    elif kind == "face_bubble":
        f = face_vertices(entity)
        out = [a for a in _all(n) if _support(a) == f]
    elif kind in ("face_lattice", "face_lattice_primed"):
        out = [a for a in _all(n) if a[entity] == 0]
    else:
        raise ValueError(f"unknown index set kind {kind!r}")
    return tuple(MultiIndex(a) for a in out)


def enumerate_indices(kind, n, entity=None, removed=None):
    """Ordered list of the multi-indices in an index set.

    ``kind`` is one of :data:`INDEX_SET_KINDS`.  ``entity`` is an edge (pair of
    vertices) for ``edge_bubble`` and a face (opposite vertex) for the face
    kinds.  For the primed kinds a single index is dropped from the base set;
    by default the lexicographically first one, or ``removed`` if given.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    if kind in ("edge_bubble",) and (entity is None or len(entity) != 2 or entity[0] == entity[1]):
        raise ValueError(f"edge_bubble needs a vertex pair, got {entity!r}")
    if kind.startswith("face") and entity not in (0, 1, 2, 3):
        raise ValueError(f"{kind} needs a face id in 0..3, got {entity!r}")
    key = tuple(sorted(entity)) if kind == "edge_bubble" else entity
    base = list(_enumerate(kind, n, key))
    if kind.endswith("_primed"):
        drop = base[0] if removed is None else tuple(removed)
        if drop not in base:
            raise ValueError(f"removed index {drop} is not in the base set")
        base = [a for a in base if a != drop]
    elif removed is not None:
        raise ValueError("'removed' only applies to primed index sets")
    return base


def removed_index(kind, n, entity=None):
    """The index dropped by default from a primed set."""
    base = {"face_lattice_primed": "face_lattice", "full_primed": "full"}[kind]
    return _enumerate(base, n, entity)[0]


def domain_point(alpha, vertices):
    """Domain point (1/n) sum_k alpha_k x_k of ``alpha`` on the given vertices."""
    n = sum(alpha)
    if n == 0:
        raise ValueError("domain points need |alpha| >= 1")
    vertices = np.asarray(getattr(vertices, "vertices", vertices), dtype=float)
    return np.asarray(alpha, dtype=float) @ vertices / n


def multinomial(alpha):
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out


def _binom_vec(top, bottom):
    out = 1
    for t, b in zip(top, bottom):
        out *= comb(t, b)
    return out


def product_coeff(alpha, beta):
    """c with B_alpha * B_beta = c * B_{alpha+beta} (exact)."""
    s = [a + b for a, b in zip(alpha, beta)]
    na, nb = sum(alpha), sum(beta)
    return Fraction(_binom_vec(s, alpha), comb(na + nb, na))


def mass_coeff(alpha, beta):
    """M with  int_T B_alpha B_beta dx = M |T|  (exact)."""
    s = [a + b for a, b in zip(alpha, beta)]
    na, nb = sum(alpha), sum(beta)
    return Fraction(_binom_vec(s, alpha), comb(na + nb, na) * comb(na + nb + 3, 3))


class IndexTable:
    """All multi-indices of one degree with vectorised position lookup."""

    def __init__(self, degree):
        self.degree = degree
        self.indices = _enumerate("full", degree, None)
        self.array = np.array(self.indices, dtype=np.int64).reshape(-1, 4)
        d1 = degree + 1
        self._lookup = np.full(d1 ** 3, -1, dtype=np.int64)
        a = self.array
        self._lookup[(a[:, 0] * d1 + a[:, 1]) * d1 + a[:, 2]] = np.arange(len(a))
        self.multinomials = np.array([multinomial(a) for a in self.indices], dtype=float)

    def __len__(self):
        return len(self.indices)

    def positions(self, alphas):
        """Positions of an (..., 4) array of indices; -1 where invalid."""
        alphas = np.asarray(alphas, dtype=np.int64)
        d1 = self.degree + 1
        ok = (alphas >= 0).all(axis=-1) & (alphas.sum(axis=-1) == self.degree)
        safe = np.where(ok[..., None], alphas, 0)
        code = (safe[..., 0] * d1 + safe[..., 1]) * d1 + safe[..., 2]
        return np.where(ok, self._lookup[code], -1)

    def position(self, alpha):
        return int(self.positions(np.asarray(alpha)[None])[0])


@lru_cache(maxsize=None)
def index_table(degree):
    return IndexTable(degree)


@lru_cache(maxsize=None)
def _binom_float(top):
    b = np.zeros((top + 1, top + 1))
    for i in range(top + 1):
        for j in range(i + 1):
            b[i, j] = comb(i, j)
    return b


@lru_cache(maxsize=64)
def mass_table(da, db):
    """Float matrix of mass coefficients between all degree-da and degree-db indices."""
    A = index_table(da).array
    B = index_table(db).array
    binom = _binom_float(da + db)
    s = A[:, None, :] + B[None, :, :]
    num = np.prod(binom[s, A[:, None, :]], axis=-1)
    den = comb(da + db, da) * comb(da + db + 3, 3)
    out = num / den
    out.setflags(write=False)
    return out
