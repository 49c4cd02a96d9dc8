import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bbfem.geometry import (
    DegenerateElementError,
    TriangleFace,
    barycentric,
    build_tetrahedron,
    geometric_tables,
)


def test_reference_gradients_and_volume(ref_tet):
    g = ref_tet.grad_lambda
    assert np.allclose(g[0], [-1, -1, -1])
    assert np.allclose(g[1], [1, 0, 0])
    assert ref_tet.volume == pytest.approx(1 / 6)


def test_degenerate_input_rejected():
    with pytest.raises(DegenerateElementError):
        build_tetrahedron([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])


def test_barycentric_examples(ref_tet):
    assert np.allclose(barycentric(ref_tet, ref_tet.vertices[1]), [0, 1, 0, 0])
    assert np.allclose(barycentric(ref_tet, ref_tet.vertices.mean(axis=0)), [0.25] * 4)
    assert np.allclose(barycentric(ref_tet, [0.2, 0.3, 0.1]), [0.4, 0.2, 0.3, 0.1])


def test_reference_tables(ref_tet):
    tb = geometric_tables(ref_tet)
    # |T| grad(lambda_i) . grad(lambda_j)
    assert tb.S0[0, 0] == pytest.approx(0.5)
    assert tb.S0[1, 1] == pytest.approx(1 / 6)
    assert tb.S0[0, 1] == pytest.approx(-1 / 6)
    assert np.allclose(tb.t[1, 2], [0, 0, 1])  # grad(lambda_1) x grad(lambda_2)
    assert tb.eps123 == pytest.approx(-1.0)


def test_negative_orientation_is_normalized():
    v = np.array([[0.0, 0, 0], [1, 0, 0], [0, 0, 1], [0, 1, 0]])
    tet = build_tetrahedron(v)
    assert tet.volume > 0
    raw = build_tetrahedron(v, normalize=False)
    assert raw.volume > 0 and raw.orientation < 0


coords = arrays(np.float64, (4, 3), elements=st.floats(-2, 2, allow_nan=False))


@settings(max_examples=60, deadline=None)
@given(coords, st.lists(st.floats(0.01, 1), min_size=4, max_size=4))
def test_barycentric_roundtrip(v, w):
    try:
        tet = build_tetrahedron(v)
    except DegenerateElementError:
        return
    if tet.volume < 1e-3:
        return
    lam = np.array(w) / sum(w)
    x = lam @ tet.vertices
    out = barycentric(tet, x)
    assert np.isclose(out.sum(), 1.0)
    assert np.allclose(out, lam, atol=1e-7)
    # gradients of barycentrics sum to zero and invert the edge matrix
    assert np.allclose(tet.grad_lambda.sum(axis=0), 0, atol=1e-8)
    E = tet.vertices[1:] - tet.vertices[0]
    assert np.allclose(tet.grad_lambda[1:] @ E.T, np.eye(3), atol=1e-7)


def test_face_normals_point_outward(skew_tet):
    c = skew_tet.vertices.mean(axis=0)
    for l in range(4):
        face = TriangleFace.of(skew_tet, l)
        p = skew_tet.vertices[[v for v in range(4) if v != l]]
        assert np.dot(face.normal, p.mean(axis=0) - c) > 0
        assert np.isclose(np.linalg.norm(face.normal), 1)
        # |grad lambda_l| = area / (3 |T|)
        assert np.isclose(np.linalg.norm(skew_tet.grad_lambda[l]), face.area / (3 * skew_tet.volume))


def test_tables_are_symmetric(skew_tet):
    tb = geometric_tables(skew_tet)
    assert np.allclose(tb.S0, tb.S0.T)
    S1 = tb.S1_full.reshape(16, 16)
    assert np.allclose(S1, S1.T)
