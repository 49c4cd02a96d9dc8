"""Bernstein-Bezier finite elements for the de Rham complex on tetrahedra.

Element matrices for H1, H(curl), H(div) and L2 are assembled from exact
Bernstein moment tables and a handful of per-element geometric scalars, with
no quadrature.  On top sit a cube mesher, global assembly with static
condensation, and solvers for a Maxwell cavity and two mixed Poisson problems.
"""
from .bases import enumerate_basis, space_dimension, tabulate, type_counts
from .geometry import DegenerateElementError, build_tetrahedron, geometric_tables
from .local_assembly import (
    h1_matrices,
    hcurl_mass,
    hcurl_stiffness,
    hdiv_mass,
    hdiv_stiffness,
    l2_mass,
)
from .mesh import Mesh, cube_mesh
from .solvers import MaxwellCavity, MixedPoisson, ModifiedMixedPoisson
from .verify import run_property_suite

__version__ = "0.1.0"

__all__ = [
    "enumerate_basis",
    "space_dimension",
    "tabulate",
    "type_counts",
    "DegenerateElementError",
    "build_tetrahedron",
    "geometric_tables",
    "h1_matrices",
    "hcurl_mass",
    "hcurl_stiffness",
    "hdiv_mass",
    "hdiv_stiffness",
    "l2_mass",
    "Mesh",
    "cube_mesh",
    "MaxwellCavity",
    "MixedPoisson",
    "ModifiedMixedPoisson",
    "run_property_suite",
]
