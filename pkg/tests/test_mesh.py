import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbfem.mesh import Mesh, cube_mesh, dump_mesh, load_mesh, orient


def test_unit_cube_counts():
    mesh = cube_mesh(1)
    assert mesh.counts() == (8, 19, 18, 6)
    assert mesh.boundary_faces.sum() == 12
    assert mesh.volume() == pytest.approx(1.0)
    assert len(mesh.congruence_classes[1]) == 6


def test_refined_cube_sizes():
    assert cube_mesh(2).n_tets == 48
    assert cube_mesh(10).n_tets == 6000
    with pytest.raises(ValueError):
        cube_mesh(0)


@settings(max_examples=5, deadline=None)
@given(st.integers(1, 5), st.floats(0.5, 4.0))
def test_cube_topology(m, scale):
    mesh = cube_mesh(m, scale)
    V, E, F, T = mesh.counts()
    assert V - E + F - T == 1  # Euler characteristic of a ball
    assert mesh.volume() == pytest.approx(scale ** 3)
    assert mesh.boundary_faces.sum() == 12 * m * m
    assert 4 * T == 2 * F - mesh.boundary_faces.sum()
    # translates of the six Kuhn tetrahedra
    assert len(mesh.congruence_classes[1]) == 6
    assert np.all(mesh.tets[:, 1:] > mesh.tets[:, :-1])


def test_orientation_single_tet():
    mesh = Mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 2, 3]])
    conv = orient(mesh)
    assert np.all(conv.edge_signs == 1)
    assert np.all(conv.face_perms == np.arange(3))


def test_orientation_interior_faces_disagree():
    mesh = cube_mesh(2)
    conv = orient(mesh)
    for f in np.flatnonzero(~mesh.boundary_faces):
        t0, t1 = mesh.face_tets[f]
        s0 = conv.face_normal_signs[t0][mesh.tet_faces[t0] == f][0]
        s1 = conv.face_normal_signs[t1][mesh.tet_faces[t1] == f][0]
        assert s0 == -s1


def test_invalid_meshes():
    with pytest.raises(ValueError):
        Mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2, 3]])
    with pytest.raises(ValueError):
        Mesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 1, 3]])


def test_dump_roundtrip(tmp_path):
    mesh = cube_mesh(2, 0.5)
    path = tmp_path / "cube.mesh"
    dump_mesh(mesh, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "27 %d %d 48" % (mesh.n_edges, mesh.n_faces)
    back = load_mesh(path)
    assert np.array_equal(back.tets, mesh.tets)
    assert np.allclose(back.vertices, mesh.vertices)
    path.write_text("27 1 1 48\n" + "\n".join(lines[1:]))
    with pytest.raises(ValueError):
        load_mesh(path)
