"""Stroud conical quadrature oracle and the numerical property suite.

The oracle evaluates every basis function from its defining closed form
(products of barycentric coordinates, Whitney forms and their derivatives by
the product rule), independently of the Bernstein-Bezier term tables used by
:mod:`bbfem.local_assembly`.
"""
from __future__ import annotations

import contextlib
import csv
import io
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.special import roots_jacobi

from . import bases
from .bases import (
    basis_groups,
    enumerate_basis,
    tabulate,
    type_counts,
    space_dimension,
)
from .combinatorics import face_vertices, index_table, multinomial
from .geometry import barycentric, build_tetrahedron, geometric_tables
from .local_assembly import (
    LocalMatrix,
    h1_matrices,
    hcurl_mass,
    hcurl_stiffness,
    hdiv_mass,
    hdiv_stiffness,
    l2_mass,
)

__all__ = [
    "QuadratureRule",
    "stroud_rule",
    "direct_values",
    "assemble_by_quadrature",
    "explicit_matrix",
    "random_tetrahedron",
    "numerical_rank",
    "relative_entry_error",
    "Report",
    "run_property_suite",
    "inject_chi_sign_fault",
]


# ---------------------------------------------------------------- quadrature
@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray   # barycentric, (m, 4)
    weights: np.ndarray  # sum to 1
    exactness_degree: int

    def integrate(self, values, volume=1.0):
        """Integral of sampled values (leading axis = points)."""
        return volume * np.tensordot(self.weights, values, axes=(0, 0))


def _jacobi01(q, a):
    x, w = roots_jacobi(q, a, 0)
    return (1 + x) / 2, w / w.sum()


def stroud_rule(q):
    """Conical product rule with ``q`` Gauss-Jacobi points per axis.

    Exact for polynomials of total degree ``2q - 1`` on a tetrahedron.
    """
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    s, ws = _jacobi01(q, 2)
    t, wt = _jacobi01(q, 1)
    u, wu = _jacobi01(q, 0)
    S, T, U = np.meshgrid(s, t, u, indexing="ij")
    W = (ws[:, None, None] * wt[None, :, None] * wu[None, None, :]).ravel()
    S, T, U = S.ravel(), T.ravel(), U.ravel()
    lam = np.stack([S, (1 - S) * T, (1 - S) * (1 - T) * U, (1 - S) * (1 - T) * (1 - U)], axis=1)
    return QuadratureRule(lam, W, 2 * q - 1)


# ---------------------------------------------------------------- oracle
def _bern_and_grad(alpha, lam, grads):
    """B^n_alpha and its gradient at barycentric points by direct differentiation."""
    alpha = np.asarray(alpha)
    c = multinomial(tuple(int(a) for a in alpha))
    val = c * np.prod(lam ** alpha, axis=1)
    dl = np.zeros_like(lam)
    for k in range(4):
        if alpha[k] > 0:
            a = alpha.copy()
            a[k] -= 1
            dl[:, k] = c * alpha[k] * np.prod(lam ** a, axis=1)
    return val, dl @ grads


def _whitney(i, j, lam, g):
    return lam[:, [i]] * g[j] - lam[:, [j]] * g[i]


def _chi(l, lam, g):
    i, j, k = face_vertices(l)
    return (lam[:, [i]] * np.cross(g[j], g[k]) - lam[:, [j]] * np.cross(g[i], g[k])
            + lam[:, [k]] * np.cross(g[i], g[j]))


def _chi_div(l, g):
    i, j, k = face_vertices(l)
    return 3.0 * np.dot(g[i], np.cross(g[j], g[k]))


def _sgn(l):
    # (-1)^l with the 1-based label l+1
    return -1.0 if l % 2 == 0 else 1.0


def _face_bubble(face, alpha, lam, g):
    f = sum(alpha)
    i, j, k = face_vertices(face)
    B, dB = _bern_and_grad(alpha, lam, g)
    w = alpha[i] * _whitney(j, k, lam, g) + alpha[j] * _whitney(k, i, lam, g) + alpha[k] * _whitney(i, j, lam, g)
    curl_w = 2 * (alpha[i] * np.cross(g[j], g[k]) + alpha[j] * np.cross(g[k], g[i]) + alpha[k] * np.cross(g[i], g[j]))
    value = (f + 1) * B[:, None] * w
    curl = (f + 1) * (np.cross(dB, w) + B[:, None] * curl_w)
    return value, curl


def _cell_bubble(l, alpha, lam, g):
    m = sum(alpha) - 1
    a = list(alpha)
    a[l] -= 1
    Bl, dBl = _bern_and_grad(a, lam, g)
    _, dB = _bern_and_grad(alpha, lam, g)
    value = (m + 1) * Bl[:, None] * g[l] - alpha[l] / (m + 1) * dB
    curl = (m + 1) * np.cross(dBl, np.broadcast_to(g[l], dBl.shape))
    return value, curl


def _div_bubble(alpha, lam, g):
    c = sum(alpha)
    B, dB = _bern_and_grad(alpha, lam, g)
    field = sum(_sgn(l) * alpha[l] * _chi(l, lam, g) for l in range(4))
    divs = sum(_sgn(l) * alpha[l] * _chi_div(l, g) for l in range(4))
    value = (c + 1) * B[:, None] * field
    div = (c + 1) * (np.einsum("pc,pc->p", dB, field) + B * divs)
    return value, div


def direct_values(desc, tet, lam):
    """(value, derivative) of one basis function at barycentric points.

    Shapes: vector fields (m, 3); scalars (m,).  The derivative is the curl
    (H(curl)), divergence (H(div)), gradient (H1) or ``None`` (L2).
    """
    lam = np.atleast_2d(np.asarray(lam, dtype=float))
    g = tet.grad_lambda
    space, fam, a = desc.space, desc.family, tuple(desc.alpha)
    m = lam.shape[0]
    if space in ("H1", "L2"):
        B, dB = _bern_and_grad(a, lam, g)
        return B, (dB if space == "H1" else None)
    if space.startswith("HCurl"):
        if fam == 1:
            i, j = desc.entity[1]
            return _whitney(i, j, lam, g), np.tile(2 * np.cross(g[i], g[j]), (m, 1))
        if fam == 2:
            _, dB = _bern_and_grad(a, lam, g)
            return dB, np.zeros((m, 3))
        if fam == 3:
            return _face_bubble(desc.entity[1], a, lam, g)
        return _cell_bubble(desc.aux, a, lam, g)
    if fam == 1:
        l = desc.entity[1]
        return _chi(l, lam, g), np.full(m, _chi_div(l, g))
    if fam == 2:
        return _face_bubble(desc.entity[1], a, lam, g)[1], np.zeros(m)
    if fam == 3:
        return _cell_bubble(desc.aux, a, lam, g)[1], np.zeros(m)
    return _div_bubble(a, lam, g)


def _function_degree(space, n):
    return {"H1": n, "L2": n, "HCurl2nd": n, "HDivBDM": n}.get(space, n + 1)


def assemble_by_quadrature(space, kind, n, tet, q=None):
    """Element matrix by Stroud quadrature of the closed-form basis functions.

    ``kind`` is ``"mass"`` or ``"stiffness"`` (derivative-derivative).
    """
    if kind not in ("mass", "stiffness"):
        raise ValueError(f"kind must be mass or stiffness, got {kind!r}")
    if space == "L2" and kind == "stiffness":
        raise ValueError("L2 has no stiffness matrix")
    need = 2 * _function_degree(space, n)
    if q is None:
        q = need // 2 + 1
    rule = stroud_rule(q)
    if rule.exactness_degree < need:
        raise ValueError(f"rule with q={q} is exact to degree {rule.exactness_degree} < {need}")
    descs = enumerate_basis(space, n)
    cols = []
    for d in descs:
        v, dv = direct_values(d, tet, rule.points)
        f = v if kind == "mass" else dv
        cols.append(np.asarray(f).reshape(len(rule.weights), -1))
    F = np.stack(cols, axis=1)  # (m, N, c)
    A = tet.volume * np.einsum("p,pic,pjc->ij", rule.weights, F, F)
    groups = basis_groups(space, n)
    return LocalMatrix(space, kind, n, 0.5 * (A + A.T), tuple((g.family, g.slice) for g in groups))


def explicit_matrix(space, kind, n, tables):
    """Quadrature-free matrix of the given space and kind."""
    fam = "second" if space in ("HCurl2nd", "HDivBDM") else "first"
    if space.startswith("HCurl"):
        return (hcurl_mass if kind == "mass" else hcurl_stiffness)(n, tables, fam)
    if space.startswith("HDiv"):
        return (hdiv_mass if kind == "mass" else hdiv_stiffness)(n, tables, fam)
    if space == "H1":
        mass, stiff = h1_matrices(n, tables)
        return mass if kind == "mass" else stiff
    return l2_mass(n, tables)


def random_tetrahedron(rng, min_quality=0.05):
    """A random, reasonably shaped tetrahedron (volume vs. diameter^3 bounded below)."""
    while True:
        v = rng.uniform(-1.0, 1.0, size=(4, 3))
        d = max(np.linalg.norm(v[i] - v[j]) for i in range(4) for j in range(i))
        vol = abs(np.linalg.det(v[1:] - v[0])) / 6
        if vol > min_quality * d ** 3 / (6 * np.sqrt(2)):
            return build_tetrahedron(v)


def numerical_rank(A, rtol=1e-9):
    s = np.linalg.svd(np.atleast_2d(A), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def relative_entry_error(A, B):
    scale = max(np.abs(B).max(), np.finfo(float).tiny)
    return float(np.abs(A - B).max() / scale)


# ---------------------------------------------------------------- faults
@contextlib.contextmanager
def inject_chi_sign_fault(face=0):
    """Flip the sign of chi_face wherever it enters a BB-form (test hook)."""
    bases._CHI_SIGN[face] *= -1
    bases._basis_groups.cache_clear()
    try:
        yield
    finally:
        bases._CHI_SIGN[face] *= -1
        bases._basis_groups.cache_clear()


# ---------------------------------------------------------------- report
@dataclass
class Claim:
    name: str
    residual: float
    passed: bool


class Report:
    """Named claims with worst-case residuals."""

    def __init__(self):
        self.claims = []

    def add(self, name, residual, passed):
        self.claims.append(Claim(name, float(residual), bool(passed)))

    def check(self, name, residual, tol):
        self.add(name, residual, residual <= tol)

    @property
    def passed(self):
        return all(c.passed for c in self.claims)

    def failures(self):
        return [c for c in self.claims if not c.passed]

    def to_text(self):
        w = max((len(c.name) for c in self.claims), default=10)
        lines = [f"{c.name:<{w}}  {c.residual:.3e}  {'PASS' if c.passed else 'FAIL'}" for c in self.claims]
        npass = sum(c.passed for c in self.claims)
        lines.append(f"{npass}/{len(self.claims)} claims passed")
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["claim", "residual", "pass"])
        for c in self.claims:
            wr.writerow([c.name, f"{c.residual:.6e}", "true" if c.passed else "false"])
        return buf.getvalue()


# ---------------------------------------------------------------- checks
def _face_points(rng, count):
    lam = rng.dirichlet(np.ones(3), size=count)
    return lam


def _interior_points(rng, count, margin=0.05):
    out = []
    while len(out) < count:
        lam = rng.dirichlet(np.ones(4))
        if lam.min() >= margin:
            out.append(lam)
    return np.array(out)


def _tangential(v, normal):
    return v - np.outer(v @ normal, normal)


def _values_on_face(space, n, tet, face, lam_face, derivative=False):
    F = tet.face(face)
    lam = F.tet_barycentric(lam_face)
    return F, tabulate(space, n, tet, lam, derivative=derivative)


def check_dimensions(report, n_max):
    worst = 0
    for space in ("HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM", "H1", "L2"):
        for n in range(0, n_max + 1):
            try:
                descs = enumerate_basis(space, n)
            except ValueError:
                continue
            bad = abs(len(descs) - space_dimension(space, n))
            if space not in ("H1", "L2"):
                counts = tuple(sum(d.family == k for d in descs) for k in (1, 2, 3, 4))
                bad += sum(abs(a - b) for a, b in zip(counts, type_counts(space, n)))
            worst = max(worst, bad)
    report.check("dimension tables", worst, 0)


def check_exact_sequence(report, n_max, tables):
    worst = 0.0
    for space, fams in (("HCurl1st", (2,)), ("HCurl2nd", (2,)), ("HDivRT", (2, 3)), ("HDivBDM", (2, 3))):
        for n in range(0 if space in ("HCurl1st", "HDivRT") else 1, n_max + 1):
            for g in basis_groups(space, n):
                if g.family in fams and g.deriv is not None:
                    worst = max(worst, np.abs(g.deriv.coefficients(tables)).max())
    report.check("exact sequence: zero curl/div coefficients", worst, 0.0)


def check_nullity(report, n_max, tables):
    worst = 0
    for n in range(0, n_max + 1):
        for fam, space in (("first", "HCurl1st"), ("second", "HCurl2nd")):
            if fam == "second" and n == 0:
                continue
            S = hcurl_stiffness(n, tables, fam).entries
            c = type_counts(space, n)
            worst = max(worst, abs((S.shape[0] - numerical_rank(S)) - c[1] - 3))
        for fam, space in (("first", "HDivRT"), ("second", "HDivBDM")):
            if fam == "second" and n == 0:
                continue
            S = hdiv_stiffness(n, tables, fam).entries
            c = type_counts(space, n)
            worst = max(worst, abs((S.shape[0] - numerical_rank(S)) - c[1] - c[2] - 3))
    # the lowest-order functions have constant curls/divergences spanning only
    # 3 (resp. 1) dimensions, which adds 3 to each kernel
    report.check("stiffness nullity equals gradient/curl counts plus 3", worst, 0)


def check_oracle(report, n_max, tet):
    tables = geometric_tables(tet)
    worst = 0.0
    for space in ("HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM", "H1", "L2"):
        for n in range(0, min(n_max, 3) + 1):
            if n == 0 and space in ("HCurl2nd", "HDivBDM", "H1"):
                continue
            for kind in ("mass", "stiffness"):
                if space == "L2" and kind == "stiffness":
                    continue
                A = explicit_matrix(space, kind, n, tables).entries
                B = assemble_by_quadrature(space, kind, n, tet).entries
                worst = max(worst, relative_entry_error(A, B))
    report.check("explicit matrices equal quadrature oracle", worst, 1e-10)


def check_derivatives_fd(report, n_max, tet, rng):
    """Curl/div BB-forms against central differences of the BB-form values."""
    h = 1e-5 * tet.diameter
    lam = _interior_points(rng, 6)
    x = lam @ tet.vertices
    worst = 0.0
    for space in ("HCurl1st", "HDivRT"):
        n = min(n_max, 3)
        D = tabulate(space, n, tet, lam, derivative=True)
        fd = np.zeros_like(D)
        for axis in range(3):
            e = np.zeros(3)
            e[axis] = h
            vp = tabulate(space, n, tet, barycentric(tet, x + e))
            vm = tabulate(space, n, tet, barycentric(tet, x - e))
            dv = (vp - vm) / (2 * h)  # (m, N, 3): d v_c / d x_axis
            if space == "HCurl1st":
                # curl_c = eps_{c,axis,k} d_axis v_k
                for c in range(3):
                    for k in range(3):
                        s = _levi(c, axis, k)
                        if s:
                            fd[:, :, c] += s * dv[:, :, k]
            else:
                fd[:, :, 0] += dv[:, :, axis]
        scale = max(1.0, np.abs(D).max())
        worst = max(worst, np.abs(D - fd).max() / scale)
    report.check("curl/div forms match finite differences", worst, 1e-6)


def _levi(i, j, k):
    return int((i - j) * (j - k) * (k - i) / 2)


def check_closed_forms(report, n_max, tet, rng):
    """BB-forms equal the closed-form definitions pointwise."""
    lam = _interior_points(rng, 20, margin=0.0)
    worst = 0.0
    for space in ("HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM", "H1"):
        for n in range(1, min(n_max, 3) + 1):
            V = tabulate(space, n, tet, lam)
            D = tabulate(space, n, tet, lam, derivative=True)
            for j, d in enumerate(enumerate_basis(space, n)):
                v, dv = direct_values(d, tet, lam)
                v = np.asarray(v).reshape(lam.shape[0], -1)
                dv = np.asarray(dv).reshape(lam.shape[0], -1)
                s = max(1.0, np.abs(v).max())
                worst = max(worst, np.abs(V[:, j] - v).max() / s,
                            np.abs(D[:, j] - dv).max() / max(1.0, np.abs(dv).max()))
    report.check("BB-forms equal closed-form definitions", worst, 1e-11)


def _face_bubble_2d(F, alpha_face, lam_face):
    """Two-dimensional face bubble on F, expressed with surface gradients."""
    gF = F.face_gradients()
    f = sum(alpha_face)
    c = multinomial(tuple(alpha_face))
    B = c * np.prod(lam_face ** np.asarray(alpha_face), axis=1)

    def w(i, j):
        return lam_face[:, [i]] * gF[j] - lam_face[:, [j]] * gF[i]

    a1, a2, a3 = alpha_face
    return (f + 1) * B[:, None] * (a1 * w(1, 2) - a2 * w(0, 2) + a3 * w(0, 1))


def check_face_bubble_traces(report, n_max, tet, rng):
    lam_face = _face_points(rng, 20)
    worst_own, worst_other = 0.0, 0.0
    for n in range(0, n_max + 1):
        descs = enumerate_basis("HCurl1st", n)
        idx = [j for j, d in enumerate(descs) if d.family == 3]
        for face in range(4):
            F, V = _values_on_face("HCurl1st", n, tet, face, lam_face)
            for j in idx:
                d = descs[j]
                tang = _tangential(V[:, j], F.normal)
                if d.entity[1] == face:
                    ref = _face_bubble_2d(F, [d.alpha[k] for k in F.local], lam_face)
                    worst_own = max(worst_own, np.abs(tang - ref).max())
                else:
                    worst_other = max(worst_other, np.abs(tang).max())
    report.check("face bubble trace equals 2D bubble", worst_own, 1e-11)
    report.check("face bubble trace vanishes on other faces", worst_other, 1e-11)


def check_cell_bubbles(report, n_max, tet, rng):
    lam_face = _face_points(rng, 20)
    trace, rank_bad, div, normal = 0.0, 0, 0.0, 0.0
    tables = geometric_tables(tet)
    for n in range(0, n_max + 1):
        descs = enumerate_basis("HCurl1st", n)
        idx = [j for j, d in enumerate(descs) if d.family == 4]
        if not idx:
            continue
        for face in range(4):
            F, V = _values_on_face("HCurl1st", n, tet, face, lam_face)
            _, C = _values_on_face("HCurl1st", n, tet, face, lam_face, derivative=True)
            for j in idx:
                trace = max(trace, np.abs(_tangential(V[:, j], F.normal)).max())
                normal = max(normal, np.abs(C[:, j] @ F.normal).max())
        group = [g for g in basis_groups("HCurl1st", n) if g.family == 4][0]
        coeffs = group.deriv.coefficients(tables).reshape(len(group.descriptors), -1)
        rank_bad = max(rank_bad, abs(numerical_rank(coeffs) - (2 * comb(n + 1, 3) + comb(n, 2))))
        rows = [[r for r in _rows_of(group.deriv, f)] for f in range(len(group.descriptors))]
        dv = bases.TermSet.build(max(group.deriv.degree - 1, 0), "eps",
                                 [bases._div_of_cross_terms(r, group.deriv.degree) for r in rows])
        div = max(div, np.abs(dv.coefficients(tables)).max() if group.deriv.degree > 0 else 0.0)
    report.check("cell bubble tangential trace vanishes", trace, 1e-11)
    report.check("cell bubble curls: rank", rank_bad, 0)
    report.check("cell bubble curls: divergence free", div, 1e-11)
    report.check("cell bubble curls: normal trace vanishes", normal, 1e-11)


def _rows_of(terms, f):
    """Recover (beta, weight, direction) rows of function ``f`` from a TermSet."""
    table = index_table(terms.degree)
    out = []
    for p, w, d in zip(terms.pos[f], terms.weight[f], terms.direction[f]):
        if p >= 0:
            out.append((tuple(int(x) for x in table.array[p]), w, int(d)))
    return out


def check_div_bubbles(report, n_max, tet, rng):
    lam_face = _face_points(rng, 20)
    normal, mean, rank_bad = 0.0, 0.0, 0
    tables = geometric_tables(tet)
    for n in range(0, n_max + 1):
        descs = enumerate_basis("HDivRT", n)
        idx = [j for j, d in enumerate(descs) if d.family == 4]
        if not idx:
            continue
        for face in range(4):
            F, V = _values_on_face("HDivRT", n, tet, face, lam_face)
            for j in idx:
                normal = max(normal, np.abs(V[:, j] @ F.normal).max())
        group = [g for g in basis_groups("HDivRT", n) if g.family == 4][0]
        coeffs = group.deriv.coefficients(tables)[:, :, 0]
        # integral of a BB-form is |T| times the mean of its coefficients
        mean = max(mean, np.abs(coeffs.mean(axis=1)).max() * tables.volume)
        rank_bad = max(rank_bad, abs(numerical_rank(coeffs) - (comb(n + 3, 3) - 1)))
    report.check("div bubble normal trace vanishes", normal, 1e-11)
    report.check("div bubble divergences have zero mean", mean, 1e-11)
    report.check("div bubble divergences: rank", rank_bad, 0)


def check_whitney_face_traces(report, tet, rng):
    lam_face = _face_points(rng, 20)
    worst = 0.0
    for face in range(4):
        F, V = _values_on_face("HDivRT", 0, tet, face, lam_face)
        for l in range(4):
            tr = V[:, l] @ F.ordered_normal
            ref = 1.0 / (2 * F.area) if l == face else 0.0
            worst = max(worst, np.abs(tr - ref).max() * F.area)
    report.check("face function normal trace is 1/(2 area)", worst, 1e-11)


def check_independence(report, n_max, tet):
    bad = 0
    for space in ("HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM", "H1", "L2"):
        for n in range(0, min(n_max, 4) + 1):
            try:
                descs = enumerate_basis(space, n)
            except ValueError:
                continue
            lam = index_table(n + 2).array / (n + 2)
            V = tabulate(space, n, tet, lam)
            E = V.transpose(0, 2, 1).reshape(-1, len(descs))
            bad = max(bad, abs(numerical_rank(E) - len(descs)))
    report.check("linear independence (rank of evaluations)", bad, 0)


def check_trace_hierarchy(report, n_max, tet, rng):
    """Traces of the entity functions of a face span the 2D spaces."""
    lam_face = _face_points(rng, 60)
    bad = 0
    for n in range(0, min(n_max, 3) + 1):
        for face in range(4):
            on_face = set(face_vertices(face))

            def touches(d):
                kind, ident = d.entity
                if kind == "vertex":
                    return ident in on_face
                if kind == "edge":
                    return set(ident) <= on_face
                if kind == "face":
                    return ident == face
                return False

            targets = []
            if n >= 1:
                targets.append(("H1", n, comb(n + 2, 2)))
            targets.append(("HCurl1st", n, (n + 1) * (n + 3)))
            if n >= 1:
                targets.append(("HCurl2nd", n, (n + 1) * (n + 2)))
            targets.append(("HDivRT", n, comb(n + 2, 2)))
            for space, deg, dim in targets:
                descs = enumerate_basis(space, deg)
                idx = [j for j, d in enumerate(descs) if touches(d) and d.family in (0, 1, 2, 3)
                       and not (space.startswith("HDiv") and d.family == 3)]
                F, V = _values_on_face(space, deg, tet, face, lam_face)
                V = V[:, idx]
                if space.startswith("HCurl"):
                    T = np.stack([_tangential(V[:, k], F.normal) for k in range(len(idx))], axis=1)
                    M = T.transpose(0, 2, 1).reshape(-1, len(idx))
                elif space.startswith("HDiv"):
                    M = V @ F.normal
                else:
                    M = V[:, :, 0]
                bad = max(bad, abs(numerical_rank(M) - dim) + abs(len(idx) - dim))
    report.check("face traces span the 2D spaces", bad, 0)


def run_property_suite(n_max=3, seed=0):
    """Run every claim for degrees up to ``n_max``; returns a :class:`Report`."""
    if n_max > 5:
        raise ValueError("n_max above 5 is outside the intended range")
    rng = np.random.default_rng(seed)
    tet = random_tetrahedron(rng)
    tables = geometric_tables(tet)
    report = Report()
    check_dimensions(report, max(n_max, 8))
    check_exact_sequence(report, n_max, tables)
    check_nullity(report, n_max, tables)
    check_oracle(report, n_max, tet)
    check_closed_forms(report, n_max, tet, rng)
    check_derivatives_fd(report, n_max, tet, rng)
    check_face_bubble_traces(report, n_max, tet, rng)
    check_cell_bubbles(report, n_max, tet, rng)
    check_div_bubbles(report, n_max, tet, rng)
    check_whitney_face_traces(report, tet, rng)
    check_independence(report, n_max, tet)
    check_trace_hierarchy(report, n_max, tet, rng)
    return report

