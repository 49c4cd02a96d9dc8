"""Eigen and saddle-point solvers, L2 errors and the three model problems."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bases import basis_groups, enumerate_basis, tabulate
from .geometry import barycentric, geometric_tables
from .local_assembly import hcurl_mass, hcurl_stiffness, mixed_blocks
from .mesh import cube_mesh
from .system import (
    apply_essential_tangential_bc,
    assemble_global,
    build_dof_map,
    mixed_dof_map,
    reduced_divfree_space,
    static_condense,
)
from .verify import stroud_rule

__all__ = [
    "EigenResult",
    "generalized_eig",
    "solve_saddle",
    "l2_error",
    "locate",
    "cavity_system",
    "CAVITY_EIGENVALUES",
    "poisson_exact",
    "modified_poisson_exact",
    "MixedSolution",
    "solve_mixed",
    "mixed_errors",
    "MaxwellCavity",
    "MixedPoisson",
    "ModifiedMixedPoisson",
]

# first eleven nonzero resonances of [0, pi]^3 (squared frequencies)
CAVITY_EIGENVALUES = np.array([2.0] * 3 + [3.0] * 2 + [5.0] * 6)


# ---------------------------------------------------------------- eigenproblem
@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    n_zero: int
    threshold: float


def generalized_eig(S, M, k=None, zero_tol=1e-8, vectors=False):
    """Smallest eigenvalues above ``zero_tol * lambda_max`` of ``S x = lam M x``.

    Dense: symmetric Jacobi scaling, Cholesky reduction of ``M`` and a
    symmetric tridiagonal eigensolve (LAPACK).
    """
    S = S.toarray() if sp.issparse(S) else np.asarray(S, dtype=float)
    M = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=float)
    if S.shape != M.shape or S.shape[0] != S.shape[1]:
        raise ValueError("S and M must be square matrices of one size")
    d = np.diag(M)
    if np.any(d <= 0):
        raise ValueError("M is not positive definite")
    s = 1.0 / np.sqrt(d)
    Ss = S * s[:, None] * s[None, :]
    Ms = M * s[:, None] * s[None, :]
    try:
        sla.cholesky(Ms, lower=True, check_finite=False)
    except sla.LinAlgError as exc:
        raise ValueError("M is not positive definite") from exc
    if vectors:
        w, V = sla.eigh(Ss, Ms, check_finite=False)
        V = V * s[:, None]
    else:
        w = sla.eigh(Ss, Ms, eigvals_only=True, check_finite=False)
        V = None
    thr = zero_tol * np.abs(w).max() if w.size else 0.0
    keep = w > thr
    n_zero = int(np.sum(np.abs(w) <= thr))
    vals = w[keep]
    if V is not None:
        V = V[:, keep]
    if k is not None:
        vals = vals[:k]
        V = None if V is None else V[:, :k]
    return EigenResult(vals, V, n_zero, float(thr))


def _class_tables(mesh):
    classes, reps = mesh.congruence_classes
    return classes, reps, [geometric_tables(mesh.element(t)) for t in reps]


def cavity_system(n, m=1, scale=np.pi):
    """(stiffness, mass, dofmap, mesh) of the H0(curl) cavity on ``[0, scale]^3``."""
    mesh = cube_mesh(m, scale)
    dm = build_dof_map("HCurl1st", n, mesh)
    classes, _, tabs = _class_tables(mesh)
    S = assemble_global(dm, np.stack([hcurl_stiffness(n, tb).entries for tb in tabs]), classes)
    M = assemble_global(dm, np.stack([hcurl_mass(n, tb).entries for tb in tabs]), classes)
    S = apply_essential_tangential_bc(S, dm, mesh)
    M = apply_essential_tangential_bc(M, dm, mesh)
    return S, M, dm, mesh


# ---------------------------------------------------------------- linear solve
def solve_saddle(system, rhs=None, rtol=1e-10):
    """Sparse direct solve of a (possibly indefinite) symmetric system."""
    A = system.matrix if hasattr(system, "matrix") else system
    b = system.rhs if rhs is None else rhs
    A = sp.csc_matrix(A)
    b = np.asarray(b, dtype=float)
    if not np.any(b):
        return np.zeros_like(b)
    try:
        lu = spla.splu(A)
    except RuntimeError as exc:
        raise np.linalg.LinAlgError(f"singular system: {exc}") from exc
    x = lu.solve(b)
    res = np.linalg.norm(A @ x - b) / max(np.linalg.norm(b), np.finfo(float).tiny)
    if not np.isfinite(res) or res > rtol:
        raise np.linalg.LinAlgError(f"direct solve residual {res:.2e} exceeds {rtol:g}")
    return x


# ---------------------------------------------------------------- exact data
def poisson_exact():
    """(p, u, f) for p = sin(pi x) sin(pi y) sin(pi z), u = -grad p, f = div u."""
    pi = np.pi

    def p(x):
        return np.sin(pi * x[:, 0]) * np.sin(pi * x[:, 1]) * np.sin(pi * x[:, 2])

    def u(x):
        sx, sy, sz = (np.sin(pi * x[:, k]) for k in range(3))
        cx, cy, cz = (np.cos(pi * x[:, k]) for k in range(3))
        return -pi * np.stack([cx * sy * sz, sx * cy * sz, sx * sy * cz], axis=1)

    def f(x):
        return 3 * pi ** 2 * p(x)

    return p, u, f


def modified_poisson_exact():
    """(p, u, f) with a divergence-free u and f = u + grad p."""
    pi = np.pi
    p, mgrad, _ = poisson_exact()

    def u(x):
        sx, sy, sz = (np.sin(pi * x[:, k]) for k in range(3))
        cx, cy, cz = (np.cos(pi * x[:, k]) for k in range(3))
        return np.stack([np.zeros(len(x)), sx * cy * sz, -sx * sy * cz], axis=1)

    def f(x):
        return u(x) - mgrad(x)

    return p, u, f


# ---------------------------------------------------------------- mixed problems
@dataclass
class _ElementBasis:
    """Tabulated element functions of one congruence class."""

    lam: np.ndarray
    weights: np.ndarray
    velocity: np.ndarray   # (q, nv, 3)
    divergence: np.ndarray  # (q, nv)
    pressure: np.ndarray   # (q, np)


def _element_basis(space, n, tet, q):
    rule = stroud_rule(q)
    V = tabulate(space, n, tet, rule.points)
    D = tabulate(space, n, tet, rule.points, derivative=True)[:, :, 0]
    groups = basis_groups(space, n)
    last = groups[-1]
    P = [np.ones((len(rule.weights), 1))]
    if last.family == 4:
        P.append(D[:, last.slice])
    return _ElementBasis(rule.points, rule.weights, V, D, np.concatenate(P, axis=1))


@dataclass
class MixedSolution:
    dofmap: object
    coefficients: np.ndarray  # (T, nfull) element coefficients (velocity then pressure)
    nvel: int
    system_size: int
    original_size: int
    n_condensable: int

    def velocity_coefficients(self):
        return self.coefficients[:, :self.nvel]

    def pressure_coefficients(self):
        return self.coefficients[:, self.nvel:]


def _mixed_setup(n, mesh, family, reduced):
    space = "HDivRT" if family == "first" else "HDivBDM"
    dm = mixed_dof_map(n, mesh, family)
    full_dm = dm
    if reduced:
        dm = reduced_divfree_space(dm)
    classes, reps, tabs = _class_tables(mesh)
    K = []
    for tb in tabs:
        A, B, _ = mixed_blocks(n, tb, family)
        nv, npr = A.shape[0], B.shape[0]
        Kf = np.zeros((nv + npr, nv + npr))
        Kf[:nv, :nv] = A
        Kf[nv:, :nv] = -B
        Kf[:nv, nv:] = -B.T
        K.append(Kf[np.ix_(dm.local_index, dm.local_index)])
    nv = len(enumerate_basis(space, n))
    return space, dm, full_dm, classes, reps, np.stack(K), nv


def solve_mixed(n, mesh, problem="poisson", family="first", reduced=False, condense=True, q=None):
    """Solve the mixed (or modified mixed) Poisson problem on ``mesh``.

    ``problem="poisson"``: u + grad p = 0, div u = f.
    ``problem="modified"``: u + grad p = f, div u = 0.
    """
    if problem not in ("poisson", "modified"):
        raise ValueError(f"unknown problem {problem!r}")
    _, _, f = poisson_exact() if problem == "poisson" else modified_poisson_exact()
    space, dm, full_dm, classes, reps, K, nv = _mixed_setup(n, mesh, family, reduced)
    q = n + 3 if q is None else q
    bases_ = [_element_basis(space, n, mesh.element(t), q) for t in reps]
    T = mesh.n_tets
    nfull = nv + bases_[0].pressure.shape[1]
    F = np.zeros((T, nfull))
    for t in range(T):
        eb = bases_[classes[t]]
        tet = mesh.element(t)
        x = eb.lam @ tet.vertices
        w = eb.weights * tet.volume
        fx = f(x)
        if problem == "poisson":
            F[t, nv:] = -(w * fx) @ eb.pressure
        else:
            F[t, :nv] = np.einsum("q,qc,qkc->k", w, fx, eb.velocity)
    Floc = F[:, dm.local_index]
    if condense:
        cs = static_condense(K, classes, Floc, dm)
        xi = solve_saddle(cs)
        loc = cs.recover(xi)
        size = cs.size
    else:
        system = assemble_global(dm, K, classes, rhs=Floc)
        x = solve_saddle(system)
        loc = x[dm.cell_dofs] * dm.signs
        size = system.matrix.shape[0]
    coeffs = np.zeros((T, nfull))
    coeffs[:, dm.local_index] = loc
    return MixedSolution(dm, coeffs, nv, size, dm.ndofs, dm.n_condensable())


def mixed_errors(sol, mesh, problem="poisson", q=None):
    """(L2 error of p, L2 error of u) for a mixed solution."""
    p_ex, u_ex, _ = poisson_exact() if problem == "poisson" else modified_poisson_exact()
    n = sol.dofmap.n
    space = sol.dofmap.space.split("x")[0]
    classes, reps = mesh.congruence_classes
    q = n + 3 if q is None else q
    bases_ = [_element_basis(space, n, mesh.element(t), q) for t in reps]
    ep = eu = 0.0
    for t in range(mesh.n_tets):
        eb = bases_[classes[t]]
        tet = mesh.element(t)
        x = eb.lam @ tet.vertices
        w = eb.weights * tet.volume
        uh = np.einsum("k,qkc->qc", sol.velocity_coefficients()[t], eb.velocity)
        ph = eb.pressure @ sol.pressure_coefficients()[t]
        eu += w @ np.sum((uh - u_ex(x)) ** 2, axis=1)
        ep += w @ (ph - p_ex(x)) ** 2
    return float(np.sqrt(ep)), float(np.sqrt(eu))


def l2_error(solution, dofmap, mesh, analytic, q=None):
    """L2 distance between a discrete field and ``analytic`` (callable on (m, 3)).

    ``solution`` is a global coefficient vector or element coefficients (T, nloc)
    of a single space from :data:`bbfem.bases.SPACES`.
    """
    n = dofmap.n
    q = n + 3 if q is None else q
    sol = np.asarray(solution, dtype=float)
    loc = sol[dofmap.cell_dofs] * dofmap.signs if sol.ndim == 1 else sol
    rule = stroud_rule(q)
    classes, reps = mesh.congruence_classes
    tabs = [tabulate(dofmap.space, n, mesh.element(t), rule.points)[:, dofmap.local_index] for t in reps]
    total = 0.0
    for t in range(mesh.n_tets):
        tet = mesh.element(t)
        x = rule.points @ tet.vertices
        vals = np.einsum("k,qkc->qc", loc[t], tabs[classes[t]])
        ref = np.asarray(analytic(x), dtype=float).reshape(len(x), -1)
        total += tet.volume * rule.weights @ np.sum((vals - ref) ** 2, axis=1)
    return float(np.sqrt(total))


def locate(mesh, X, tol=1e-10):
    """Containing element and barycentric coordinates of each point."""
    X = np.atleast_2d(X)
    tet_ids = np.full(len(X), -1)
    lams = np.zeros((len(X), 4))
    for t in range(mesh.n_tets):
        lam = barycentric(mesh.element(t), X)
        hit = (lam.min(axis=1) >= -tol) & (tet_ids < 0)
        tet_ids[hit] = t
        lams[hit] = lam[hit]
    if np.any(tet_ids < 0):
        raise ValueError("points outside the mesh")
    return tet_ids, lams


# ---------------------------------------------------------------- estimators
class MaxwellCavity(BaseEstimator):
    """Resonances of the H0(curl) cavity ``[0, pi]^3`` with first-kind Nedelec elements.

    ``fit`` computes ``eigenvalues_`` (the ``n_eigs`` smallest nonzero ones),
    ``n_zero_modes_`` and ``n_dofs_``.
    """

    def __init__(self, degree=1, m=1, n_eigs=11, zero_tol=1e-8):
        self.degree = degree
        self.m = m
        self.n_eigs = n_eigs
        self.zero_tol = zero_tol

    def _validate(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if not (0 < self.zero_tol < 1):
            raise ValueError(f"zero_tol must lie in (0, 1), got {self.zero_tol}")

    def fit(self, X=None, y=None):
        self._validate()
        S, M, dm, _ = cavity_system(int(self.degree), int(self.m))
        res = generalized_eig(S.matrix, M.matrix, k=self.n_eigs, zero_tol=self.zero_tol)
        self.eigenvalues_ = res.eigenvalues
        self.n_zero_modes_ = res.n_zero
        self.n_dofs_ = S.matrix.shape[0]
        return self

    def errors(self, exact=CAVITY_EIGENVALUES):
        check_is_fitted(self)
        k = min(len(exact), len(self.eigenvalues_))
        return np.abs(self.eigenvalues_[:k] - exact[:k])


class _MixedEstimator(BaseEstimator):
    problem = "poisson"
    methods = ("full",)

    def _validate(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if self.method not in self.methods:
            raise ValueError(f"method must be one of {self.methods}, got {self.method!r}")

    def fit(self, X=None, y=None):
        self._validate()
        self.mesh_ = cube_mesh(int(self.m))
        sol = solve_mixed(int(self.degree), self.mesh_, self.problem,
                          reduced=self.method == "reduced")
        self.solution_ = sol
        self.error_p_, self.error_u_ = mixed_errors(sol, self.mesh_, self.problem)
        self.n_global_ = sol.system_size
        self.n_local_ = sol.n_condensable
        self.n_original_ = sol.original_size
        return self

    def _evaluate(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        if X.shape[1] != 3:
            raise ValueError(f"expected points with 3 coordinates, got {X.shape[1]}")
        ids, lam = locate(self.mesh_, X)
        n = int(self.degree)
        space = self.solution_.dofmap.space.split("x")[0]
        u = np.zeros((len(X), 3))
        p = np.zeros(len(X))
        for t in np.unique(ids):
            sel = ids == t
            tet = self.mesh_.element(t)
            V = tabulate(space, n, tet, lam[sel])
            D = tabulate(space, n, tet, lam[sel], derivative=True)[:, :, 0]
            last = basis_groups(space, n)[-1]
            P = np.ones((sel.sum(), 1))
            if last.family == 4:
                P = np.concatenate([P, D[:, last.slice]], axis=1)
            u[sel] = np.einsum("k,qkc->qc", self.solution_.velocity_coefficients()[t], V)
            p[sel] = P @ self.solution_.pressure_coefficients()[t]
        return u, p

    def predict_velocity(self, X):
        return self._evaluate(X)[0]

    def predict_pressure(self, X):
        return self._evaluate(X)[1]


class MixedPoisson(_MixedEstimator):
    """RT x P mixed Poisson solve on the unit cube; ``predict`` returns the potential."""

    problem = "poisson"

    def __init__(self, degree=1, m=1, method="full"):
        self.degree = degree
        self.m = m
        self.method = method

    def predict(self, X):
        return self.predict_pressure(X)


class ModifiedMixedPoisson(_MixedEstimator):
    """Mixed problem with divergence-free velocity; ``predict`` returns the velocity.

    ``method="reduced"`` drops the non-divergence-free velocity bubbles and the
    non-constant pressures; both methods give the same velocity.
    """

    problem = "modified"
    methods = ("full", "reduced")

    def __init__(self, degree=1, m=2, method="full"):
        self.degree = degree
        self.m = m
        self.method = method

    def predict(self, X):
        return self.predict_velocity(X)
