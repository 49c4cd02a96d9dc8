from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbfem.bases import (
    SPACES,
    BBForm,
    bernstein,
    enumerate_basis,
    evaluate,
    gradient_field,
    hcurl_cell_bubble,
    hcurl_face_bubble,
    hdiv_cell_bubble,
    hdiv_face_element,
    realize,
    space_dimension,
    tabulate,
    type_counts,
    whitney_edge,
)
from bbfem.combinatorics import index_table
from bbfem.geometry import TriangleFace, barycentric
from bbfem.verify import direct_values, random_tetrahedron

CURL_TOTAL = {"HCurl1st": lambda n: (n + 1) * (n + 3) * (n + 4) // 2,
              "HCurl2nd": lambda n: (n + 1) * (n + 2) * (n + 3) // 2}
DIV_TOTAL = {"HDivRT": lambda n: (n + 1) * (n + 2) * (n + 4) // 2,
             "HDivBDM": lambda n: (n + 1) * (n + 2) * (n + 3) // 2}


def test_whitney_at_centroid(ref_tet):
    value, curl = whitney_edge(0, 1)
    c = ref_tet.vertices.mean(axis=0)
    assert np.allclose(evaluate(value, ref_tet, c), 0.25 * np.array([2, 1, 1]))
    # curl of lambda_i grad lambda_j - lambda_j grad lambda_i is 2 grad_i x grad_j
    assert np.allclose(evaluate(curl, ref_tet, c), 2 * np.cross([-1, -1, -1], [1, 0, 0]))
    with pytest.raises(ValueError):
        whitney_edge(2, 2)


def test_gradient_field_matches_analytic(ref_tet, rng):
    value, curl = gradient_field((1, 1, 0, 0))
    g = ref_tet.grad_lambda
    for x in rng.uniform(0, 0.3, size=(5, 3)):
        lam = barycentric(ref_tet, x)
        expected = 2 * (lam[1] * g[0] + lam[0] * g[1])  # grad(2 lambda_0 lambda_1)
        assert np.allclose(evaluate(value, ref_tet, x), expected)
    assert curl.is_zero()
    with pytest.raises(ValueError):
        gradient_field((3, 0, 0, 0))


def test_constructor_argument_errors():
    with pytest.raises(ValueError):
        hcurl_face_bubble(0, (1, 1, 1, 0))  # entry on the opposite vertex
    with pytest.raises(ValueError):
        hcurl_cell_bubble(2, (1, 1, 2, 1))
    with pytest.raises(ValueError):
        hcurl_cell_bubble(3, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        enumerate_basis("HCurl3rd", 2)
    with pytest.raises(ValueError):
        enumerate_basis("H1", 0)


def test_div_bubble_normal_trace_vanishes(skew_tet, rng):
    value, _ = hdiv_cell_bubble((0, 2, 1, 1), tet=skew_tet)
    for face in range(4):
        tf = TriangleFace.of(skew_tet, face)
        w = rng.dirichlet(np.ones(3), size=20)
        lam = np.zeros((20, 4))
        lam[:, [v for v in range(4) if v != face]] = w
        for row in lam:
            x = row @ skew_tet.vertices
            assert abs(evaluate(value, skew_tet, x) @ tf.normal) < 1e-13


def test_face_element_divergence_constant(skew_tet):
    for l in range(4):
        _, div = hdiv_face_element(l, tet=skew_tet)
        vals = div.coeffs.ravel()
        assert np.allclose(vals, vals[0])
        # div chi integrates to the face flux: |div chi| |T| = 1/2
        assert abs(vals[0]) * skew_tet.volume == pytest.approx(0.5)


def test_enumeration_examples():
    assert type_counts("HCurl1st", 3) == (6, 31, 36, 11)
    assert len(enumerate_basis("HCurl1st", 3)) == 84
    assert type_counts("HDivRT", 3) == (4, 36, 11, 19)
    assert len(enumerate_basis("HDivRT", 3)) == 70
    assert len(enumerate_basis("HDivBDM", 2)) == 30


@pytest.mark.parametrize("n", range(0, 9))
def test_dimension_formulas(n):
    for space, f in CURL_TOTAL.items():
        if space == "HCurl2nd" and n < 1:
            continue
        assert space_dimension(space, n) == len(enumerate_basis(space, n)) == f(n)
    for space, f in DIV_TOTAL.items():
        if space == "HDivBDM" and n < 1:
            continue
        assert space_dimension(space, n) == len(enumerate_basis(space, n)) == f(n)
    if n >= 1:
        assert len(enumerate_basis("H1", n)) == comb(n + 3, 3)
    assert len(enumerate_basis("L2", n)) == comb(n + 3, 3)


def test_realize_special_cases(skew_tet):
    for d in enumerate_basis("HCurl1st", 2):
        if d.family == 2:
            assert realize(d, skew_tet)[1].is_zero()
    for d in enumerate_basis("HDivRT", 2):
        if d.family in (2, 3):
            assert realize(d, skew_tet)[1].is_zero(1e-12)
    d = enumerate_basis("H1", 2)[0]
    value, _ = realize(d, skew_tet)
    assert np.count_nonzero(value.coeffs) == 1


def test_evaluate_examples(ref_tet, rng):
    const = BBForm(3, np.full(len(index_table(3)), 2.5))
    for x in rng.uniform(0, 0.3, size=(4, 3)):
        assert evaluate(const, ref_tet, x) == pytest.approx(2.5)
    value, _ = bernstein((1, 1, 0, 0))
    assert evaluate(value, ref_tet, [0.5, 0, 0]) == pytest.approx(0.5)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["H1", "HCurl1st", "HCurl2nd", "HDivRT", "HDivBDM"]),
       st.integers(1, 3), st.integers(0, 10 ** 6))
def test_tabulate_matches_closed_forms(space, n, seed):
    rng = np.random.default_rng(seed)
    tet = random_tetrahedron(rng)
    lam = rng.dirichlet(np.ones(4), size=6)
    got = tabulate(space, n, tet, lam)
    dgot = tabulate(space, n, tet, lam, derivative=True)
    for k, desc in enumerate(enumerate_basis(space, n)):
        val, der = direct_values(desc, tet, lam)
        assert np.allclose(got[:, k], np.reshape(val, got[:, k].shape), atol=1e-10)
        assert np.allclose(dgot[:, k], np.reshape(der, dgot[:, k].shape), atol=1e-9)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SPACES[1:5]), st.integers(0, 10 ** 6))
def test_derivative_matches_finite_differences(space, seed):
    rng = np.random.default_rng(seed)
    tet = random_tetrahedron(rng)
    n = 2
    lam0 = rng.dirichlet(np.ones(4) * 4)
    x0 = lam0 @ tet.vertices
    h = 1e-6

    def values(x):
        return tabulate(space, n, tet, barycentric(tet, x)[None])[0]

    J = np.stack([(values(x0 + h * e) - values(x0 - h * e)) / (2 * h) for e in np.eye(3)], axis=-1)
    d = tabulate(space, n, tet, lam0[None], derivative=True)[0]
    if space.startswith("HCurl"):
        curl = np.stack([J[:, 2, 1] - J[:, 1, 2], J[:, 0, 2] - J[:, 2, 0], J[:, 1, 0] - J[:, 0, 1]], axis=1)
        assert np.allclose(curl, d, atol=1e-5)
    else:
        assert np.allclose(np.trace(J, axis1=1, axis2=2), d[:, 0], atol=1e-5)
