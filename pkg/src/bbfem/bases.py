"""Bernstein-Bezier bases for H1, H(curl), H(div) and L2 on a tetrahedron.

Every basis function (and its curl / divergence / gradient) is stored as a
geometry-free list of *terms* ``(beta, weight, direction)`` meaning

    weight * B^d_beta * D[direction]

where ``D`` is one of ``grad lambda_a`` (kind ``"grad"``), ``t_ab`` (kind
``"cross"``, direction ``4 a + b``), ``eps_123`` (kind ``"eps"``) or the
constant 1 (kind ``"plain"``).  Realizing the terms against a tetrahedron
gives an ordinary BB-form with numeric coefficients.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .combinatorics import (
    EDGES,
    MultiIndex,
    enumerate_indices,
    face_vertices,
    index_table,
)
from .geometry import barycentric, geometric_tables, reference_tetrahedron

__all__ = [
    "SPACES",
    "BBForm",
    "BasisDescriptor",
    "TermSet",
    "TypeGroup",
    "sigma_set",
    "whitney_edge",
    "gradient_field",
    "hcurl_face_bubble",
    "hcurl_cell_bubble",
    "hdiv_face_element",
    "hdiv_cell_bubble",
    "bernstein",
    "enumerate_basis",
    "basis_groups",
    "realize",
    "evaluate",
    "bernstein_table",
    "tabulate",
    "space_dimension",
    "type_counts",
]

SPACES = ("H1", "HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM", "L2")
KINDS = {"grad": 3, "cross": 3, "eps": 1, "plain": 1}

# Sign applied to chi_l wherever it enters a basis function.  Only touched by
# the fault-injection hook in :mod:`bbfem.verify`.
_CHI_SIGN = np.ones(4)


def sigma_set(face):
    """Cyclic triples (i,j,k), (j,k,i), (k,i,j) of the face opposite ``face``."""
    i, j, k = face_vertices(face)
    return ((i, j, k), (j, k, i), (k, i, j))


def _e(k):
    out = [0, 0, 0, 0]
    out[k] = 1
    return out


def _shift(alpha, plus=(), minus=()):
    out = list(alpha)
    for k in plus:
        out[k] += 1
    for k in minus:
        out[k] -= 1
    return tuple(out)


def _sign1(l):
    # (-1)^l for the 1-based face label l+1
    return -1 if l % 2 == 0 else 1


def _eps_parity(a, b, c):
    """eps_abc / eps_123 (0-based vertices)."""
    if len({a, b, c}) < 3:
        return 0
    missing = ({0, 1, 2, 3} - {a, b, c}).pop()
    inversions = sum(1 for x, y in itertools.combinations((a, b, c), 2) if x > y)
    return (1 if missing % 2 == 1 else -1) * (-1) ** inversions


@dataclass(frozen=True, eq=False)
class TermSet:
    """Terms of a family of functions, padded to a common length.

    ``pos`` holds positions in ``index_table(degree)``; invalid terms (negative
    index entries) carry ``pos == -1`` and ``weight == 0``.
    """

    degree: int
    kind: str
    pos: np.ndarray
    weight: np.ndarray
    direction: np.ndarray

    def __len__(self):
        return self.pos.shape[0]

    @classmethod
    def build(cls, degree, kind, rows):
        """``rows``: one list of (beta, weight, direction) per function."""
        width = max((len(r) for r in rows), default=0)
        nf = len(rows)
        betas = np.full((nf, max(width, 1), 4), -1, dtype=np.int64)
        weight = np.zeros((nf, max(width, 1)))
        direction = np.zeros((nf, max(width, 1)), dtype=np.int64)
        for f, row in enumerate(rows):
            for r, (beta, w, d) in enumerate(row):
                betas[f, r] = beta
                weight[f, r] = w
                direction[f, r] = d
        pos = index_table(degree).positions(betas) if degree >= 0 else np.full(betas.shape[:2], -1)
        weight = np.where(pos >= 0, weight, 0.0)
        if kind == "cross":
            a, b = np.divmod(direction, 4)
            weight = np.where(a == b, 0.0, weight)
        keep = (weight != 0).any(axis=0)
        if nf and not keep.any():
            keep[0] = True
        pos, weight, direction = pos[:, keep], weight[:, keep], direction[:, keep]
        pos = np.where(weight != 0, pos, -1)
        return cls(degree, kind, pos, weight, direction)

    def is_zero(self):
        return not np.any(self.weight)

    def subset(self, rows):
        return TermSet(self.degree, self.kind, self.pos[rows], self.weight[rows], self.direction[rows])

    def directions(self, tables):
        if self.kind == "grad":
            return tables.grad_lambda
        if self.kind == "cross":
            return tables.t.reshape(16, 3)
        if self.kind == "eps":
            return np.array([[tables.eps123]])
        return np.array([[1.0]])

    def coefficients(self, tables):
        """Dense BB coefficients, shape (nfun, N_degree, ncomp)."""
        nf = len(self)
        ncomp = KINDS[self.kind]
        out = np.zeros((nf, len(index_table(self.degree)), ncomp))
        vecs = self.directions(tables)
        ok = self.pos >= 0
        rows = np.broadcast_to(np.arange(nf)[:, None], self.pos.shape)[ok]
        contrib = self.weight[ok][:, None] * vecs[self.direction[ok]]
        np.add.at(out, (rows, self.pos[ok]), contrib)
        return out


def _curl_of_grad_terms(terms, degree):
    """Generic curl of sum w B^d_beta grad(l_a): d sum_k B^{d-1}_{beta-e_k} t_ka."""
    out = []
    for beta, w, a in terms:
        for k in range(4):
            out.append((_shift(beta, minus=(k,)), w * degree, 4 * k + a))
    return out


def _div_of_cross_terms(terms, degree):
    """Generic divergence of sum w B^d_beta t_ab: d sum_k B^{d-1}_{beta-e_k} eps_kab."""
    out = []
    for beta, w, ab in terms:
        a, b = divmod(ab, 4)
        for k in range(4):
            p = _eps_parity(k, a, b)
            if p:
                out.append((_shift(beta, minus=(k,)), w * degree * p, 0))
    return out


# ---------------------------------------------------------------- term rows
def _whitney_rows(i, j):
    value = [(tuple(_e(i)), 1, j), (tuple(_e(j)), -1, i)]
    curl = [((0, 0, 0, 0), 2, 4 * i + j)]
    return value, curl


def _gradient_rows(alpha):
    g = sum(alpha)
    return [(_shift(alpha, minus=(s,)), g, s) for s in range(4)]


def _face_bubble_rows(face, alpha, f):
    value, curl = [], []
    for s1, s2, s3 in sigma_set(face):
        b = _shift(alpha, plus=(s1,))
        c = alpha[s1] + 1
        value.append((b, c * alpha[s3], s2))
        value.append((b, -c * alpha[s2], s3))
        for k in (s1, s2, s3):
            bk = _shift(b, minus=(k,))
            curl.append((bk, (f + 1) * c * alpha[s3], 4 * k + s2))
            curl.append((bk, -(f + 1) * c * alpha[s2], 4 * k + s3))
    return value, curl


def _cell_bubble_rows(l, alpha, m):
    value = [(_shift(alpha, minus=(i,)), (m + 1) * (i == l) - alpha[l], i) for i in range(4)]
    curl = [(_shift(alpha, minus=(l, i)), (m + 1) * m, 4 * i + l) for i in range(4)]
    return value, curl


def _chi_rows(l):
    value = [(tuple(_e(s1)), _CHI_SIGN[l], 4 * s2 + s3) for s1, s2, s3 in sigma_set(l)]
    div = [((0, 0, 0, 0), 3 * _sign1(l) * _CHI_SIGN[l], 0)]
    return value, div


def _div_bubble_rows(alpha, c):
    value = []
    for l in range(4):
        if alpha[l] == 0:
            continue
        for s1, s2, s3 in sigma_set(l):
            w = _sign1(l) * alpha[l] * (alpha[s1] + 1) * _CHI_SIGN[l]
            value.append((_shift(alpha, plus=(s1,)), w, 4 * s2 + s3))
    div = []
    for i in range(4):
        for j in range(4):
            w = (c + 1) * (alpha[i] + 1) * ((i == j) * c - alpha[j])
            div.append((_shift(alpha, plus=(i,), minus=(j,)), w, 0))
    return value, div


def _div_bubble_rows_table7(alpha):
    """BB-form of the H(div) bubble from the tabulated d^(4) coefficients."""
    rows = []
    for i in range(4):
        for s1, s2, s3 in sigma_set(i):
            w = (-1) ** i * (alpha[i] + 1) * alpha[s1]  # (-1)^{i+1} for 1-based i
            rows.append((_shift(alpha, plus=(i,)), w, 4 * s2 + s3))
    return rows


# ---------------------------------------------------------------- BB forms
class BBForm:
    """Numeric BB-form: ``sum_alpha coeffs[alpha] * B^degree_alpha``.

    ``coeffs`` is a dense array aligned with ``index_table(degree)`` of shape
    (N,) for scalar forms or (N, 3) for vector forms.
    """

    def __init__(self, degree, coeffs):
        self.degree = int(degree)
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.shape[0] != len(index_table(self.degree)):
            raise ValueError("coefficient array does not match the degree")

    @property
    def value_kind(self):
        return "scalar" if self.coeffs.ndim == 1 else "vector"

    @property
    def coefficients(self):
        return {MultiIndex(a): c for a, c in zip(index_table(self.degree).indices, self.coeffs)}

    def is_zero(self, tol=0.0):
        return bool(np.all(np.abs(self.coeffs) <= tol))

    @classmethod
    def zero(cls, degree, vector=True):
        n = len(index_table(max(degree, 0)))
        return cls(max(degree, 0), np.zeros((n, 3)) if vector else np.zeros(n))

    @classmethod
    def from_terms(cls, terms, tables):
        coeffs = terms.coefficients(tables)[0]
        if coeffs.shape[1] == 1:
            coeffs = coeffs[:, 0]
        return cls(terms.degree, coeffs)

    def __call__(self, tet, x):
        return evaluate(self, tet, x)

    def __repr__(self):
        return f"BBForm(degree={self.degree}, {self.value_kind})"


def bernstein_table(degree, lam):
    """B^degree_alpha at barycentric points ``lam`` (m, 4) -> (m, N)."""
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    table = index_table(degree)
    powers = lam[:, None, :] ** table.array[None, :, :]
    return table.multinomials * np.prod(powers, axis=-1)


def evaluate(f, tet, x):
    """Value of a BB-form at physical point(s) ``x``."""
    x = np.asarray(x, dtype=float)
    lam = barycentric(tet, np.atleast_2d(x))
    out = bernstein_table(f.degree, lam) @ f.coeffs
    return out[0] if x.ndim == 1 else out


# ---------------------------------------------------------------- descriptors
@dataclass(frozen=True)
class BasisDescriptor:
    """One basis function: space, family (type 1-4, 0 for H1/L2), entity, index, aux.

    ``entity`` is ``("vertex", v)``, ``("edge", (i, j))``, ``("face", l)`` or
    ``("cell", None)``; ``aux`` is the cell-bubble direction l for H(curl)
    type 4 and H(div) type 3.
    """

    space: str
    family: int
    entity: tuple
    alpha: MultiIndex
    aux: int | None = None
    degree: int = 0


def _support_entity(alpha):
    sup = tuple(k for k in range(4) if alpha[k] > 0)
    if len(sup) == 1:
        return ("vertex", sup[0])
    if len(sup) == 2:
        return ("edge", sup)
    if len(sup) == 3:
        return ("face", ({0, 1, 2, 3} - set(sup)).pop())
    return ("cell", None)


_ENTITY_RANK = {"vertex": 0, "edge": 1, "face": 2, "cell": 3}


def _entity_key(entity):
    kind, ident = entity
    return (_ENTITY_RANK[kind], ident if ident is not None else -1)


def _check_space(space, n):
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}")
    low = {"H1": 1, "HCurl2nd": 1, "HDivBDM": 1}.get(space, 0)
    if int(n) != n or n < low:
        raise ValueError(f"{space} needs degree >= {low}, got {n}")


def _degrees(space, n):
    """Degree parameters (gradient, face bubble, cell bubble, div bubble)."""
    second = space in ("HCurl2nd", "HDivBDM")
    return dict(grad=n + 1, face=n - 1 if space == "HCurl2nd" else n,
                cell=n if space == "HCurl2nd" else n + 1,
                div=n - 1 if second else n)


def enumerate_basis(space, n):
    """Ordered basis descriptors for ``space`` at degree ``n``."""
    _check_space(space, n)
    out = []
    if space in ("H1", "L2"):
        alphas = enumerate_indices("full", n)
        if space == "H1":
            alphas = sorted(alphas, key=lambda a: (_entity_key(_support_entity(a)), a))
            return [BasisDescriptor(space, 0, _support_entity(a), a, None, n) for a in alphas]
        return [BasisDescriptor(space, 0, ("cell", None), a, None, n) for a in alphas]
    deg = _degrees(space, n)
    if space.startswith("HCurl"):
        out += [BasisDescriptor(space, 1, ("edge", e), MultiIndex((0, 0, 0, 0)), None, 0) for e in EDGES]
        g = deg["grad"]
        grads = [a for a in enumerate_indices("full", g) if sum(x > 0 for x in a) > 1]
        grads.sort(key=lambda a: (_entity_key(_support_entity(a)), a))
        out += [BasisDescriptor(space, 2, _support_entity(a), a, None, g) for a in grads]
        f = deg["face"]
        for face in range(4):
            out += [BasisDescriptor(space, 3, ("face", face), a, None, f)
                    for a in enumerate_indices("face_lattice_primed", f, face)]
        out += _cell_bubble_descriptors(space, 4, deg["cell"])
        return out
    out += [BasisDescriptor(space, 1, ("face", l), MultiIndex((0, 0, 0, 0)), None, 0) for l in range(4)]
    f = deg["face"]
    for face in range(4):
        out += [BasisDescriptor(space, 2, ("face", face), a, None, f)
                for a in enumerate_indices("face_lattice_primed", f, face)]
    out += _cell_bubble_descriptors(space, 3, deg["cell"])
    c = deg["div"]
    out += [BasisDescriptor(space, 4, ("cell", None), a, None, c)
            for a in enumerate_indices("full_primed", c)]
    return out


def _cell_bubble_descriptors(space, family, m):
    out = []
    for l in (0, 1, 2):
        for a in enumerate_indices("interior", m + 1):
            if l == 2 and a[2] != 1:
                continue
            out.append(BasisDescriptor(space, family, ("cell", None), a, l, m))
    return out


def space_dimension(space, n):
    _check_space(space, n)
    return {
        "H1": comb(n + 3, 3),
        "L2": comb(n + 3, 3),
        "HCurl1st": (n + 1) * (n + 3) * (n + 4) // 2,
        "HCurl2nd": 3 * comb(n + 3, 3),
        "HDivRT": (n + 1) * (n + 2) * (n + 4) // 2,
        "HDivBDM": 3 * comb(n + 3, 3),
    }[space]


def type_counts(space, n):
    """Closed-form type counts (type 1..4) for the H(curl)/H(div) spaces."""
    _check_space(space, n)
    d = _degrees(space, n)
    f, m, c = d["face"], d["cell"], d["div"]
    faces = 4 * comb(f + 2, 2) - 4
    cells = 2 * comb(m, 3) + comb(m - 1, 2) if m >= 1 else 0
    if space.startswith("HCurl"):
        return (6, comb(n + 4, 3) - 4, faces, cells)
    if space.startswith("HDiv"):
        return (4, faces, cells, comb(c + 3, 3) - 1)
    raise ValueError(f"{space} has no type decomposition")


# ---------------------------------------------------------------- constructors
def _tables(tet):
    return geometric_tables(reference_tetrahedron() if tet is None else tet)


def whitney_edge(i, j, tet=None):
    """Lowest-order edge function omega_ij and its (constant) curl."""
    if i == j or not (0 <= i < 4 and 0 <= j < 4):
        raise ValueError(f"invalid edge ({i}, {j})")
    value, curl = _whitney_rows(i, j)
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(1, "grad", [value]), tb)
    c = BBForm.from_terms(TermSet.build(0, "cross", [curl]), tb)
    return v, c


def gradient_field(alpha, tet=None):
    """grad B^{|alpha|}_alpha in BB-form; its curl is the zero form."""
    alpha = MultiIndex(alpha)
    g = alpha.degree
    if g < 1 or max(alpha) == g:
        raise ValueError(f"gradient fields exclude vertex indices, got {tuple(alpha)}")
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(g - 1, "grad", [_gradient_rows(alpha)]), tb)
    return v, BBForm.zero(g - 2)


def hcurl_face_bubble(face, alpha, tet=None):
    """Non-gradient face bubble on the face opposite ``face``; degree |alpha|+1."""
    alpha = MultiIndex(alpha)
    if alpha[face] != 0:
        raise ValueError(f"index {tuple(alpha)} is not on face {face}")
    f = alpha.degree
    value, curl = _face_bubble_rows(face, alpha, f)
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(f + 1, "grad", [value]), tb)
    c = BBForm.from_terms(TermSet.build(f, "cross", [curl]), tb)
    return v, c


def hcurl_cell_bubble(l, alpha, tet=None):
    """Cell bubble (m+1) B^m_{alpha-e_l} grad l_l - alpha_l/(m+1) grad B^{m+1}_alpha.

    ``alpha`` is an interior index of degree m+1; ``l`` in {0, 1} always,
    ``l == 2`` only when alpha_2 == 1.
    """
    alpha = MultiIndex(alpha)
    if min(alpha) < 1:
        raise ValueError(f"cell bubbles need an interior index, got {tuple(alpha)}")
    if l not in (0, 1, 2):
        raise ValueError(f"cell bubble direction must be 0, 1 or 2, got {l}")
    if l == 2 and alpha[2] != 1:
        raise ValueError("direction 2 requires alpha_2 == 1")
    m = alpha.degree - 1
    value, curl = _cell_bubble_rows(l, alpha, m)
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(m, "grad", [value]), tb)
    c = BBForm.from_terms(TermSet.build(m - 1, "cross", [curl]), tb)
    return v, c


def hdiv_face_element(l, tet=None):
    """Lowest-order face function chi_l and its constant divergence."""
    if l not in (0, 1, 2, 3):
        raise ValueError(f"face must be in 0..3, got {l}")
    value, div = _chi_rows(l)
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(1, "cross", [value]), tb)
    d = BBForm.from_terms(TermSet.build(0, "eps", [div]), tb)
    return v, d


def hdiv_cell_bubble(alpha, tet=None):
    """(n+1) B^n_alpha sum_l (-1)^l alpha_l chi_l and its divergence; n = |alpha|."""
    alpha = MultiIndex(alpha)
    c = alpha.degree
    value, div = _div_bubble_rows(alpha, c)
    tb = _tables(tet)
    v = BBForm.from_terms(TermSet.build(c + 1, "cross", [value]), tb)
    d = BBForm.from_terms(TermSet.build(c, "eps", [div]), tb)
    return v, d


def bernstein(alpha, tet=None):
    """B^n_alpha as a one-term BB-form and its gradient."""
    alpha = MultiIndex(alpha)
    n = alpha.degree
    table = index_table(n)
    coeffs = np.zeros(len(table))
    coeffs[table.position(alpha)] = 1.0
    tb = _tables(tet)
    if n == 0:
        return BBForm(0, coeffs), BBForm.zero(0)
    return BBForm(n, coeffs), BBForm.from_terms(TermSet.build(n - 1, "grad", [_gradient_rows(alpha)]), tb)


# ---------------------------------------------------------------- families
@dataclass(frozen=True, eq=False)
class TypeGroup:
    """Consecutive basis functions of one type with their term sets."""

    family: int
    start: int
    descriptors: tuple
    value: TermSet
    deriv: TermSet | None

    @property
    def stop(self):
        return self.start + len(self.descriptors)

    @property
    def slice(self):
        return slice(self.start, self.stop)


def _group_rows(space, d):
    """(value rows, value degree, value kind, deriv rows, deriv degree, deriv kind)."""
    fam = d.family
    a = d.alpha
    if space == "H1":
        n = d.degree
        return ([(tuple(a), 1, 0)], n, "plain", _gradient_rows(a), n - 1, "grad")
    if space == "L2":
        return ([(tuple(a), 1, 0)], d.degree, "plain", None, None, None)
    if space.startswith("HCurl"):
        if fam == 1:
            v, c = _whitney_rows(*d.entity[1])
            return (v, 1, "grad", c, 0, "cross")
        if fam == 2:
            return (_gradient_rows(a), d.degree - 1, "grad", None, None, None)
        if fam == 3:
            v, c = _face_bubble_rows(d.entity[1], a, d.degree)
            return (v, d.degree + 1, "grad", c, d.degree, "cross")
        v, c = _cell_bubble_rows(d.aux, a, d.degree)
        return (v, d.degree, "grad", c, d.degree - 1, "cross")
    if fam == 1:
        v, dv = _chi_rows(d.entity[1])
        return (v, 1, "cross", dv, 0, "eps")
    if fam == 2:
        _, c = _face_bubble_rows(d.entity[1], a, d.degree)
        return (c, d.degree, "cross", None, None, None)
    if fam == 3:
        _, c = _cell_bubble_rows(d.aux, a, d.degree)
        return (c, d.degree - 1, "cross", None, None, None)
    v, dv = _div_bubble_rows(a, d.degree)
    return (v, d.degree + 1, "cross", dv, d.degree, "eps")


def _chi_key():
    return tuple(_CHI_SIGN.tolist())


def basis_groups(space, n):
    """Type groups of the local basis; cached per (space, n)."""
    return _basis_groups(space, n, _chi_key())


@lru_cache(maxsize=64)
def _basis_groups(space, n, chi_key):
    descs = enumerate_basis(space, n)
    groups = []
    start = 0
    for fam, items in itertools.groupby(descs, key=lambda d: d.family):
        items = tuple(items)
        rows = [_group_rows(space, d) for d in items]
        _, vdeg, vkind, _, ddeg, dkind = rows[0]
        value = TermSet.build(vdeg, vkind, [r[0] for r in rows])
        deriv = None
        if dkind is not None and ddeg is not None and ddeg >= 0:
            deriv = TermSet.build(ddeg, dkind, [r[3] for r in rows])
            if deriv.is_zero():
                deriv = None
        groups.append(TypeGroup(fam, start, items, value, deriv))
        start += len(items)
    return tuple(groups)


def realize(descriptor, tet):
    """(value, derivative) BB-forms of one basis function.

    The derivative is the curl for H(curl), the divergence for H(div), the
    gradient for H1 and ``None`` for L2.
    """
    space = descriptor.space
    vrows, vdeg, vkind, drows, ddeg, dkind = _group_rows(space, descriptor)
    tb = _tables(tet)
    value = BBForm.from_terms(TermSet.build(vdeg, vkind, [vrows]), tb)
    if space == "L2":
        return value, None
    if drows is None or ddeg is None or ddeg < 0:
        vector = space != "HDivRT" and space != "HDivBDM"
        return value, BBForm.zero(max(vdeg - 1, 0), vector=vector)
    return value, BBForm.from_terms(TermSet.build(ddeg, dkind, [drows]), tb)


def tabulate(space, n, tet, lam, derivative=False):
    """Values of every basis function at barycentric points.

    Returns an array (m, ndofs, ncomp); with ``derivative`` the curl / div /
    gradient instead (zero where the type has no derivative terms).
    """
    tb = _tables(tet)
    lam = np.atleast_2d(lam)
    groups = basis_groups(space, n)
    blocks = []
    ncomp = None
    for g in groups:
        terms = g.deriv if derivative else g.value
        if terms is None:
            blocks.append(None)
            continue
        coeffs = terms.coefficients(tb)
        ncomp = coeffs.shape[-1]
        nf, nb, nc = coeffs.shape
        flat = bernstein_table(terms.degree, lam) @ coeffs.transpose(1, 0, 2).reshape(nb, nf * nc)
        blocks.append(flat.reshape(-1, nf, nc))
    if ncomp is None:
        ncomp = 1 if space in ("HDivRT", "HDivBDM", "L2") else 3
    out = []
    for g, b in zip(groups, blocks):
        out.append(b if b is not None else np.zeros((lam.shape[0], len(g.descriptors), ncomp)))
    return np.concatenate(out, axis=1)
