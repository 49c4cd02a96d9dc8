"""Quadrature-free element matrices.

A block between two families of functions expressed in terms
``w * B^d_beta * D[dir]`` is

    sum_{r,s} w_P[r] w_Q[s] * M[beta_P[r], beta_Q[s]] * S[dir_P[r], dir_Q[s]]

with ``M`` the exact Bernstein mass coefficients and ``S`` the geometric
table matching the direction kinds (S0 for gradients, S1 for the cross
products t_ab, S2 for eps_123, |T| for constants).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bases import TermSet, basis_groups
from .combinatorics import mass_table

__all__ = [
    "LocalMatrix",
    "term_block",
    "hcurl_mass",
    "hcurl_stiffness",
    "hdiv_mass",
    "hdiv_stiffness",
    "h1_matrices",
    "l2_mass",
    "pressure_terms",
    "mixed_blocks",
    "dump_local_matrix",
    "load_local_matrix",
]


@dataclass
class LocalMatrix:
    """Dense symmetric element matrix in ``enumerate_basis`` order."""

    space: str
    kind: str
    n: int
    entries: np.ndarray
    offsets: tuple = field(default=())

    @property
    def shape(self):
        return self.entries.shape

    def block(self, p, q):
        """Sub-block between families ``p`` and ``q`` (1-based type numbers)."""
        sl = dict(self.offsets)
        return self.entries[sl[p], sl[q]]


def _geometry_matrix(kp, kq, tables):
    vol = tables.volume
    if kp == kq == "grad":
        return tables.S0
    if kp == kq == "cross":
        return tables.S1_full.reshape(16, 16)
    if kp == kq == "eps":
        return np.array([[tables.S2]])
    kinds = {kp, kq}
    if kinds == {"plain"}:
        return np.array([[vol]])
    if kinds == {"plain", "eps"}:
        return np.array([[vol * tables.eps123]])
    raise ValueError(f"no geometric table pairs {kp!r} with {kq!r}")


def term_block(P: TermSet, Q: TermSet, tables):
    """Integral matrix between the families described by ``P`` and ``Q``."""
    S = _geometry_matrix(P.kind, Q.kind, tables)
    M = mass_table(P.degree, Q.degree)
    out = np.zeros((len(P), len(Q)))
    for r in range(P.pos.shape[1]):
        pr, wr, dr = P.pos[:, r], P.weight[:, r], P.direction[:, r]
        okr = pr >= 0
        if not okr.any():
            continue
        Mr = M[np.where(okr, pr, 0)]
        Sr = S[dr]
        for s in range(Q.pos.shape[1]):
            ps, ws, ds = Q.pos[:, s], Q.weight[:, s], Q.direction[:, s]
            if not (ps >= 0).any():
                continue
            prod = Mr[:, np.where(ps >= 0, ps, 0)] * Sr[:, ds]
            out += (wr[:, None] * ws[None, :]) * prod
    return out


def _assemble(groups, pick, tables, space, kind, n, zero=()):
    """Blockwise assembly over the upper triangle of type pairs, then mirrored."""
    size = groups[-1].stop if groups else 0
    A = np.zeros((size, size))
    for a, ga in enumerate(groups):
        for gb in groups[a:]:
            pa, pb = pick(ga), pick(gb)
            if pa is None or pb is None or (ga.family, gb.family) in zero:
                continue
            blk = term_block(pa, pb, tables)
            A[ga.slice, gb.slice] = blk
            if gb is not ga:
                A[gb.slice, ga.slice] = blk.T
            else:
                A[ga.slice, ga.slice] = 0.5 * (blk + blk.T)
    offsets = tuple((g.family, g.slice) for g in groups)
    return LocalMatrix(space, kind, n, A, offsets)


def _hcurl_space(family):
    if family not in ("first", "second"):
        raise ValueError(f"family must be 'first' or 'second', got {family!r}")
    return "HCurl1st" if family == "first" else "HCurl2nd"


def _hdiv_space(family):
    if family not in ("first", "second"):
        raise ValueError(f"family must be 'first' or 'second', got {family!r}")
    return "HDivRT" if family == "first" else "HDivBDM"


def hcurl_mass(n, tables, family="first"):
    """Mass matrix of the H(curl) basis (first or second kind Nedelec)."""
    space = _hcurl_space(family)
    return _assemble(basis_groups(space, n), lambda g: g.value, tables, space, "mass", n)


def hcurl_stiffness(n, tables, family="first"):
    """Curl-curl matrix; every row and column of a gradient function is exactly 0."""
    space = _hcurl_space(family)
    return _assemble(basis_groups(space, n), lambda g: g.deriv, tables, space, "stiffness", n)


def hdiv_mass(n, tables, family="first"):
    """Mass matrix of the H(div) basis (Raviart-Thomas or BDM).

    The curl-type families (types 2 and 3) carry the same term sets as the
    curls of the H(curl) face and cell bubbles, so their blocks coincide with
    the corresponding curl-curl blocks.
    """
    space = _hdiv_space(family)
    return _assemble(basis_groups(space, n), lambda g: g.value, tables, space, "mass", n)


def hdiv_stiffness(n, tables, family="first"):
    """Div-div matrix; only types 1 and 4 carry divergence, and they are orthogonal."""
    space = _hdiv_space(family)
    return _assemble(basis_groups(space, n), lambda g: g.deriv, tables, space,
                     "stiffness", n, zero={(1, 4)})


def h1_matrices(n, tables):
    """(mass, stiffness) of the degree-n Bernstein basis."""
    groups = basis_groups("H1", n)
    mass = _assemble(groups, lambda g: g.value, tables, "H1", "mass", n)
    stiff = _assemble(groups, lambda g: g.deriv, tables, "H1", "stiffness", n)
    return mass, stiff


def l2_mass(n, tables):
    """Bernstein mass matrix M_{alpha,beta} |T| over all degree-n indices."""
    groups = basis_groups("L2", n)
    return _assemble(groups, lambda g: g.value, tables, "L2", "mass", n)


def pressure_terms(n, family="first"):
    """Element pressure basis {1} U {div of the H(div) cell bubbles}.

    Returns two term sets: the constant and the divergence family (``None``
    when there are no cell bubbles).
    """
    space = _hdiv_space(family)
    one = TermSet.build(0, "plain", [[((0, 0, 0, 0), 1.0, 0)]])
    last = basis_groups(space, n)[-1]
    bubbles = last.deriv if last.family == 4 else None
    return one, bubbles


def mixed_blocks(n, tables, family="first"):
    """Velocity mass ``A``, coupling ``B`` (pressure x velocity, int q div v) and
    pressure mass ``C`` for the H(div) x L2 pair with the split pressure basis."""
    space = _hdiv_space(family)
    groups = basis_groups(space, n)
    A = hdiv_mass(n, tables, family).entries
    ptermsets = [t for t in pressure_terms(n, family) if t is not None]
    npres = sum(len(t) for t in ptermsets)
    B = np.zeros((npres, A.shape[0]))
    C = np.zeros((npres, npres))
    r0 = 0
    for pt in ptermsets:
        for g in groups:
            if g.deriv is not None:
                B[r0:r0 + len(pt), g.slice] = term_block(pt, g.deriv, tables)
        c0 = 0
        for qt in ptermsets:
            C[r0:r0 + len(pt), c0:c0 + len(qt)] = term_block(pt, qt, tables)
            c0 += len(qt)
        r0 += len(pt)
    return A, B, 0.5 * (C + C.T)


def dump_local_matrix(mat: LocalMatrix, path):
    """Write ``space kind n dim`` then the dense entries."""
    dim = mat.entries.shape[0]
    with open(path, "w") as fh:
        fh.write(f"{mat.space} {mat.kind} {mat.n} {dim}\n")
        np.savetxt(fh, mat.entries, fmt="%.17g")


def load_local_matrix(path):
    with open(path) as fh:
        space, kind, n, dim = fh.readline().split()
        entries = np.loadtxt(fh, ndmin=2).reshape(int(dim), int(dim))
    return LocalMatrix(space, kind, int(n), entries)

