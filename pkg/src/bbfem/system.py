"""Global degrees of freedom, assembly, boundary conditions and static condensation.

Global numbering is blockwise by entity: all vertex DOFs, then edges, faces,
cells, and for the mixed H(div) x L2 pair the elementwise pressure constants
and pressure bubbles.  Inside an entity the slot of a function is the rank of
its key (family, multi-index restricted to the entity, aux).  Because every
element lists its vertices in ascending global order, restricted keys agree
between the elements sharing an entity.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .bases import SPACES, enumerate_basis
from .combinatorics import EDGES, face_vertices

__all__ = [
    "DofMap",
    "GlobalSystem",
    "CondensedSystem",
    "build_dof_map",
    "mixed_dof_map",
    "reduced_divfree_space",
    "assemble_global",
    "assemble_vector",
    "apply_essential_tangential_bc",
    "static_condense",
    "export_coo",
    "entity_dof_counts",
]

BLOCKS = ("vertex", "edge", "face", "cell", "pressure_constant", "pressure_bubble")


@dataclass(eq=False)
class DofMap:
    """Local-to-global map for one space on one mesh.

    ``cell_dofs[t, k]`` is the global id of local function ``k`` of element
    ``t`` with sign ``signs[t, k]``; ``local_block``/``local_entity``/
    ``local_slot`` describe where each local function lives; ``local_index``
    selects the local functions from the element's full basis ordering.
    """

    space: str
    n: int
    mesh: object
    ndofs: int
    cell_dofs: np.ndarray
    signs: np.ndarray
    local_block: np.ndarray
    local_entity: np.ndarray
    local_slot: np.ndarray
    local_index: np.ndarray
    block_counts: dict = field(default_factory=dict)
    dof_block: np.ndarray = None
    dof_entity: np.ndarray = None

    @property
    def nloc(self):
        return self.cell_dofs.shape[1]

    @property
    def condensable(self):
        """Local functions with no inter-element coupling."""
        return np.isin(self.local_block, (BLOCKS.index("cell"), BLOCKS.index("pressure_bubble")))

    @property
    def interface(self):
        return ~self.condensable

    def entity_dofs(self, block):
        """Global DOFs of one block type."""
        return np.flatnonzero(self.dof_block == BLOCKS.index(block))

    def n_interface(self):
        return int(np.unique(self.cell_dofs[:, self.interface]).size)

    def n_condensable(self):
        return int(self.condensable.sum()) * self.cell_dofs.shape[0]


def _local_layout(descs):
    """(block, local entity, key) for every local function."""
    out = []
    for d in descs:
        kind, ident = d.entity
        a = tuple(d.alpha)
        aux = -1 if d.aux is None else d.aux
        if d.space == "pressure":
            block = "pressure_constant" if d.family == 0 else "pressure_bubble"
            out.append((BLOCKS.index(block), 0, (d.family, a, aux)))
        elif kind == "vertex":
            out.append((0, ident, (d.family, (), aux)))
        elif kind == "edge":
            i, j = ident
            out.append((1, EDGES.index((i, j)), (d.family, (a[i], a[j]), aux)))
        elif kind == "face":
            out.append((2, ident, (d.family, tuple(a[k] for k in face_vertices(ident)), aux)))
        else:
            out.append((3, 0, (d.family, a, aux)))
    return out


def _entity_ids(mesh, block, local_entity):
    """Global entity id per element for each local function (T, nloc)."""
    T = mesh.n_tets
    out = np.empty((T, len(block)), dtype=np.int64)
    for k, (b, e) in enumerate(zip(block, local_entity)):
        if b == 0:
            out[:, k] = mesh.tets[:, e]
        elif b == 1:
            out[:, k] = mesh.tet_edges[:, e]
        elif b == 2:
            out[:, k] = mesh.tet_faces[:, e]
        else:
            out[:, k] = np.arange(T)
    return out


def _n_entities(mesh, b):
    return (mesh.n_vertices, mesh.n_edges, mesh.n_faces, mesh.n_tets, mesh.n_tets, mesh.n_tets)[b]


def _build(space, n, mesh, descs, local_index=None):
    layout = _local_layout(descs)
    block = np.array([x[0] for x in layout], dtype=np.int64)
    ent = np.array([x[1] for x in layout], dtype=np.int64)
    slot = np.zeros(len(layout), dtype=np.int64)
    per_entity = {}
    for b in sorted(set(block.tolist())):
        groups = {}
        for k, (bb, e, key) in enumerate(layout):
            if bb == b:
                groups.setdefault(e, []).append((key, k))
        keysets = [sorted(key for key, _ in v) for v in groups.values()]
        if any(ks != keysets[0] for ks in keysets):
            raise RuntimeError("entity keys differ between local entities of one kind")
        for v in groups.values():
            for rank, (_, k) in enumerate(sorted(v)):
                slot[k] = rank
        per_entity[b] = len(keysets[0])
    offsets, start = {}, 0
    for b in range(len(BLOCKS)):
        offsets[b] = start
        start += per_entity.get(b, 0) * _n_entities(mesh, b)
    gid = _entity_ids(mesh, block, ent)
    off = np.array([offsets[b] for b in block])
    cnt = np.array([per_entity[b] for b in block])
    cell_dofs = off[None, :] + gid * cnt[None, :] + slot[None, :]
    dof_block = np.empty(start, dtype=np.int64)
    dof_entity = np.empty(start, dtype=np.int64)
    for b, c in per_entity.items():
        ne = _n_entities(mesh, b)
        sl = slice(offsets[b], offsets[b] + c * ne)
        dof_block[sl] = b
        dof_entity[sl] = np.repeat(np.arange(ne), c)
    used = np.zeros(start, dtype=bool)
    used[cell_dofs.ravel()] = True
    if not used.all():
        raise RuntimeError("global numbering has unused DOFs")
    if local_index is None:
        local_index = np.arange(len(descs))
    counts = {BLOCKS[b]: c for b, c in per_entity.items()}
    return DofMap(space, n, mesh, start, cell_dofs, np.ones(cell_dofs.shape), block, ent, slot,
                  np.asarray(local_index), counts, dof_block, dof_entity)


def build_dof_map(space, n, mesh):
    """DOF map of one of the element spaces on ``mesh``."""
    if space not in SPACES:
        raise ValueError(f"unsupported space {space!r}")
    return _build(space, n, mesh, enumerate_basis(space, n))


@dataclass(frozen=True)
class _PressureDescriptor:
    space: str
    family: int
    entity: tuple
    alpha: tuple
    aux: int | None = None


def mixed_dof_map(n, mesh, family="first"):
    """DOF map of the H(div) x L2 pair: velocity functions, then the pressure
    basis {1} U {div of the cell bubbles} of every element."""
    space = "HDivRT" if family == "first" else "HDivBDM"
    vel = enumerate_basis(space, n)
    bubbles = [d for d in vel if d.family == 4]
    pres = [_PressureDescriptor("pressure", 0, ("cell", None), (0, 0, 0, 0))]
    pres += [_PressureDescriptor("pressure", 1, ("cell", None), tuple(d.alpha)) for d in bubbles]
    return _build(space + "xP", n, mesh, list(vel) + pres)


def _restrict(dofmap, keep, space):
    keep = np.asarray(keep, dtype=bool)
    old = dofmap.cell_dofs[:, keep]
    used, new = np.unique(old, return_inverse=True)
    new = new.reshape(old.shape)
    counts = {}
    for b, name in enumerate(BLOCKS):
        sel = dofmap.local_block == b
        if sel.any():
            first = sel & (dofmap.local_entity == dofmap.local_entity[sel][0])
            if (keep & first).any():
                counts[name] = int((keep & first).sum())
    return replace(dofmap, space=space, ndofs=len(used), cell_dofs=new, signs=dofmap.signs[:, keep],
                   local_block=dofmap.local_block[keep], local_entity=dofmap.local_entity[keep],
                   local_slot=dofmap.local_slot[keep], local_index=dofmap.local_index[keep],
                   block_counts=counts, dof_block=dofmap.dof_block[used], dof_entity=dofmap.dof_entity[used])


def reduced_divfree_space(dofmap):
    """Drop the non-divergence-free velocity bubbles and the pressure bubbles."""
    if not dofmap.space.endswith("xP"):
        raise ValueError("expected a mixed H(div) x L2 DOF map")
    vel_space = dofmap.space[:-2]
    vel = enumerate_basis(vel_space, dofmap.n)
    fam = np.array([d.family for d in vel] + [-1] * (len(dofmap.local_index) - len(vel)))
    fam = fam[dofmap.local_index]
    keep = (fam != 4) & (dofmap.local_block != BLOCKS.index("pressure_bubble"))
    return _restrict(dofmap, keep, dofmap.space + "-reduced")


def entity_dof_counts(space, n):
    """DOFs per vertex, edge, face and cell."""
    d = enumerate_basis(space, n)
    lay = _local_layout(d)
    out = {}
    for b, name in enumerate(BLOCKS[:4]):
        ents = [e for bb, e, _ in lay if bb == b]
        out[name] = ents.count(ents[0]) if ents else 0
    return out


# ---------------------------------------------------------------- assembly
@dataclass(eq=False)
class GlobalSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray | None = None
    essential: np.ndarray | None = None
    free: np.ndarray | None = None


def _element_stack(local, classes):
    local = np.asarray(local)
    if classes is None:
        return local
    return local[classes]


def assemble_global(dofmap, local, classes=None, rhs=None):
    """Sum of signed element matrices.

    ``local`` is (T, nloc, nloc), or (C, nloc, nloc) together with the element
    class ids ``classes`` (T,) when elements share matrices.
    """
    K = _element_stack(local, classes)
    T, nl = dofmap.cell_dofs.shape
    if K.shape != (T, nl, nl):
        raise ValueError(f"element matrices have shape {K.shape}, expected {(T, nl, nl)}")
    s = dofmap.signs
    vals = K * s[:, :, None] * s[:, None, :]
    rows = np.broadcast_to(dofmap.cell_dofs[:, :, None], K.shape).ravel()
    cols = np.broadcast_to(dofmap.cell_dofs[:, None, :], K.shape).ravel()
    A = sp.coo_matrix((vals.ravel(), (rows, cols)), shape=(dofmap.ndofs, dofmap.ndofs)).tocsr()
    A.sum_duplicates()
    A.sort_indices()
    b = assemble_vector(dofmap, rhs) if rhs is not None else None
    return GlobalSystem(A, b, np.zeros(dofmap.ndofs, dtype=bool), np.arange(dofmap.ndofs))


def assemble_vector(dofmap, local_rhs):
    out = np.zeros(dofmap.ndofs)
    np.add.at(out, dofmap.cell_dofs.ravel(), (np.asarray(local_rhs) * dofmap.signs).ravel())
    return out


def apply_essential_tangential_bc(system, dofmap, mesh):
    """Remove every DOF with a nonzero tangential trace on the boundary."""
    if not dofmap.space.startswith("HCurl"):
        raise ValueError("tangential conditions apply to H(curl) maps")
    ess = np.zeros(dofmap.ndofs, dtype=bool)
    for name, flags in (("vertex", mesh.boundary_vertices), ("edge", mesh.boundary_edges),
                        ("face", mesh.boundary_faces)):
        b = BLOCKS.index(name)
        sel = dofmap.dof_block == b
        ess[sel] = flags[dofmap.dof_entity[sel]]
    free = np.flatnonzero(~ess)
    A = system.matrix[free][:, free].tocsr()
    rhs = None if system.rhs is None else system.rhs[free]
    return GlobalSystem(A, rhs, ess, free)


# ---------------------------------------------------------------- condensation
@dataclass(eq=False)
class CondensedSystem:
    """Interface system after eliminating the element-interior unknowns."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    interface_dofs: np.ndarray   # (T, nI) ids in the condensed numbering
    interface_global: np.ndarray  # condensed id -> id in the full numbering
    interface_local: np.ndarray
    condensed_local: np.ndarray
    classes: np.ndarray
    couplings: np.ndarray        # per class: Kcc^{-1} Kci
    inverses: np.ndarray         # per class: Kcc^{-1}
    local_rhs: np.ndarray

    @property
    def size(self):
        return self.matrix.shape[0]

    def recover(self, x_interface):
        """Element solution vectors (T, nloc) from the interface solution."""
        xi = x_interface[self.interface_dofs]
        fc = self.local_rhs[:, self.condensed_local]
        X = self.couplings[self.classes]
        Kinv = self.inverses[self.classes]
        xc = np.einsum("tij,tj->ti", Kinv, fc) - np.einsum("tij,tj->ti", X, xi)
        nloc = len(self.interface_local) + len(self.condensed_local)
        out = np.zeros((len(self.classes), nloc))
        out[:, self.interface_local] = xi
        out[:, self.condensed_local] = xc
        return out


def static_condense(local, classes, local_rhs, dofmap):
    """Schur complement onto the interface DOFs, element by element.

    ``local`` holds one (symmetric) element matrix per class; ``local_rhs``
    is (T, nloc).  Raises ``numpy.linalg.LinAlgError`` when an interior block
    is singular.
    """
    I = np.flatnonzero(dofmap.interface)
    C = np.flatnonzero(dofmap.condensable)
    local = np.asarray(local)
    ncls = local.shape[0]
    nI, nC = len(I), len(C)
    schur = np.empty((ncls, nI, nI))
    couplings = np.empty((ncls, nC, nI))
    inverses = np.empty((ncls, nC, nC))
    for c in range(ncls):
        K = local[c]
        Kii, Kic, Kcc = K[np.ix_(I, I)], K[np.ix_(I, C)], K[np.ix_(C, C)]
        if nC:
            lu = sla.lu_factor(Kcc, check_finite=True)
            if np.any(np.abs(np.diag(lu[0])) <= 1e-14 * np.abs(Kcc).max()):
                raise np.linalg.LinAlgError("interior block is singular")
            X = sla.lu_solve(lu, K[np.ix_(C, I)])
            inverses[c] = sla.lu_solve(lu, np.eye(nC))
            S = Kii - Kic @ X
        else:
            X = np.zeros((0, nI))
            S = Kii
        schur[c] = 0.5 * (S + S.T)
        couplings[c] = X
    classes = np.asarray(classes)
    F = np.asarray(local_rhs, dtype=float)
    g = F[:, I] - np.einsum("tci,tc->ti", couplings[classes], F[:, C]) if nC else F[:, I].copy()
    gl = dofmap.cell_dofs[:, I]
    used, inv = np.unique(gl, return_inverse=True)
    idofs = inv.reshape(gl.shape)
    sub = replace(dofmap, ndofs=len(used), cell_dofs=idofs, signs=dofmap.signs[:, I])
    system = assemble_global(sub, schur, classes, rhs=g)
    return CondensedSystem(system.matrix, system.rhs, idofs, used, I, C, classes, couplings,
                           inverses, F)


def export_coo(matrix, path):
    """Write ``% size N`` then ``row col value`` triplets sorted by (row, col)."""
    A = sp.coo_matrix(matrix)
    order = np.lexsort((A.col, A.row))
    with open(path, "w") as fh:
        fh.write(f"% size {A.shape[0]}\n")
        for r, c, v in zip(A.row[order], A.col[order], A.data[order]):
            fh.write(f"{r} {c} {v:.17g}\n")

