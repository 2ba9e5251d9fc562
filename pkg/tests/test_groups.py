import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebk import groups
from ebk.groups import GroupSpec

SU2 = GroupSpec.su2()
unit = st.floats(-1, 1, allow_nan=False)


def quaternions():
    return st.tuples(unit, unit, unit, unit).filter(lambda q: np.linalg.norm(q) > 0.1).map(
        lambda q: np.asarray(q) / np.linalg.norm(q))


def diag_element(t):
    return np.array([math.cos(t), math.sin(t), 0.0, 0.0])


def test_group_spec_kinds():
    assert GroupSpec.circle().rank == 1 and GroupSpec.circle().dim_g == 1
    assert GroupSpec.torus(2).dim_g == 2 and GroupSpec.torus(2).is_abelian
    assert SU2.dim_g == 3 and not SU2.is_abelian


def test_check_weight_normalizes_and_rejects():
    assert groups.check_weight(SU2, 4.0) == 4
    assert groups.check_weight(GroupSpec.circle(), 3) == (3,)
    assert groups.check_weight(GroupSpec.torus(2), [1, -2]) == (1, -2)
    for bad in (-1, (1,), 0.5):
        with pytest.raises(ValueError):
            groups.check_weight(SU2, bad)
    with pytest.raises(ValueError):
        groups.check_weight(GroupSpec.torus(2), (1,))


def test_irrep_dims():
    assert groups.irrep_dim(SU2, 0) == 1
    assert groups.irrep_dim(SU2, 5) == 6
    assert groups.irrep_dim(GroupSpec.torus(3), (1, 2, 3)) == 1


@pytest.mark.parametrize("m", range(7))
def test_su2_character_at_centre(m):
    assert groups.character(SU2, m, groups.su2_identity()) == pytest.approx(m + 1)
    assert groups.character(SU2, m, diag_element(math.pi)) == pytest.approx((-1) ** m * (m + 1))


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 12), t=st.floats(0, math.pi))
def test_character_is_trace_of_symmetric_power(m, t):
    # independent route: trace of the explicit representation matrix
    g = diag_element(t)
    R = groups.sym_power_matrix(groups.quaternion_to_matrix(g), m)
    assert groups.character(SU2, m, g) == pytest.approx(np.trace(R), abs=1e-9)


@pytest.mark.parametrize("t0", [0.0, math.pi])
def test_character_series_continuous(t0):
    m = 9
    t = t0 + np.array([-3e-5, -1e-6, 1e-6, 3e-5])
    t = t[(t >= 0) & (t <= math.pi)]
    exact = np.array([np.trace(groups.sym_power_matrix(groups.quaternion_to_matrix(diag_element(s)), m)).real
                      for s in t])
    np.testing.assert_allclose(groups._su2_character(m, t), exact, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(g=quaternions(), h=quaternions(), m=st.integers(0, 8))
def test_character_conjugation_invariant(g, h, m):
    conj = groups.quaternion_multiply(groups.quaternion_multiply(h, g), groups.quaternion_inverse(h))
    assert groups.character(SU2, m, conj) == pytest.approx(groups.character(SU2, m, g), abs=1e-9)


def test_torus_character():
    G = GroupSpec.torus(2)
    assert groups.character(G, (2, -1), (0.3, 0.4)) == pytest.approx(np.exp(1j * 0.2))
    with pytest.raises(ValueError):
        groups.character(G, (1, 1), (0.1,))


@settings(max_examples=40, deadline=None)
@given(g=quaternions(), h=quaternions())
def test_quaternion_product_matches_matrices(g, h):
    prod = groups.quaternion_to_matrix(groups.quaternion_multiply(g, h))
    np.testing.assert_allclose(prod, groups.quaternion_to_matrix(g) @ groups.quaternion_to_matrix(h), atol=1e-12)
    ident = groups.quaternion_multiply(g, groups.quaternion_inverse(g))
    np.testing.assert_allclose(ident, groups.su2_identity(), atol=1e-12)


def test_quaternion_matrix_round_trip(rng):
    for q in groups.random_su2(rng, 20):
        U = groups.quaternion_to_matrix(q)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(2), atol=1e-12)
        assert np.linalg.det(U) == pytest.approx(1)
        np.testing.assert_allclose(groups.matrix_to_quaternion(U), q, atol=1e-12)


def test_check_su2_element_rejects():
    with pytest.raises(ValueError):
        groups.check_su2_element([1, 0, 0])
    with pytest.raises(ValueError):
        groups.check_su2_element([1, 1, 0, 0])


def test_conjugacy_angle():
    assert groups.conjugacy_angle(diag_element(0.7)) == pytest.approx(0.7)


@pytest.mark.parametrize("order", [1, 4, 9])
def test_haar_weights_normalized(order):
    for G in (GroupSpec.circle(), GroupSpec.torus(2), SU2):
        _, w = groups.haar_quadrature(G, order)
        assert w.sum() == pytest.approx(1.0)


def test_su2_character_orthonormality():
    elements, w = groups.haar_quadrature(SU2, 15)  # exact up to degree 14
    table = np.array([groups.character_array(SU2, m, elements) for m in range(8)])
    gram = (table * w) @ table.conj().T
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-12)


def test_torus_character_orthonormality():
    G = GroupSpec.torus(2)
    elements, w = groups.haar_quadrature(G, 6)
    weights = [(a, b) for a in range(-2, 3) for b in range(-2, 3)]
    table = np.array([groups.character_array(G, om, elements) for om in weights])
    gram = (table * w) @ table.conj().T
    np.testing.assert_allclose(gram, np.eye(len(weights)), atol=1e-12)


def test_haar_rule_left_invariant_on_matrix_coefficients(rng):
    # |rho(hg)_{ij}|^2 has degree 2d, so order > 2d integrates it exactly
    d = 3
    elements, w = groups.haar_quadrature(SU2, 2 * d + 1)
    h = groups.quaternion_to_matrix(groups.random_su2(rng))

    def avg(shift):
        tot = np.zeros((d + 1, d + 1))
        for q, wq in zip(elements, w):
            U = groups.quaternion_to_matrix(q)
            tot += wq * np.abs(groups.sym_power_matrix(shift @ U, d)) ** 2
        return tot

    np.testing.assert_allclose(avg(np.eye(2)), avg(h), atol=1e-12)
    # Schur orthogonality for the unitary frame: mean of |matrix coefficient|^2 in the
    # monomial basis is C(d,j)/C(d,i)/(d+1)
    i, j = np.ogrid[: d + 1, : d + 1]
    comb = np.vectorize(math.comb)
    np.testing.assert_allclose(avg(np.eye(2)), comb(d, i) / comb(d, j) / (d + 1), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(g=quaternions(), h=quaternions(), d=st.integers(0, 6))
def test_sym_power_is_homomorphism(g, h, d):
    U, V = groups.quaternion_to_matrix(g), groups.quaternion_to_matrix(h)
    np.testing.assert_allclose(groups.sym_power_matrix(U @ V, d),
                               groups.sym_power_matrix(U, d) @ groups.sym_power_matrix(V, d), atol=1e-10)


def test_sym_power_diagonal_weights():
    t, d = 0.4, 5
    R = groups.sym_power_matrix(groups.quaternion_to_matrix(diag_element(t)), d)
    np.testing.assert_allclose(R, np.diag(np.exp(1j * (d - 2 * np.arange(d + 1)) * t)), atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(q=quaternions(), z=st.tuples(unit, unit, unit, unit))
def test_so3_rotation_intertwines_hopf(q, z):
    from ebk.models import hopf

    z = np.array([complex(z[0], z[1]), complex(z[2], z[3])])
    R = groups.so3_rotation(q)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1)
    np.testing.assert_allclose(hopf(groups.quaternion_to_matrix(q) @ z), R @ hopf(z), atol=1e-12)


def _cg_by_weights(a, b):
    # multiplicity of Sym^m = #weights m minus #weights m+2 in Sym^a (x) Sym^b
    w = [a - 2 * i + b - 2 * j for i in range(a + 1) for j in range(b + 1)]
    return {m: w.count(m) - w.count(m + 2) for m in range(a + b + 1) if w.count(m) - w.count(m + 2)}


@settings(max_examples=50, deadline=None)
@given(a=st.integers(0, 10), b=st.integers(0, 10))
def test_clebsch_gordan_against_weight_count(a, b):
    got = {m: groups.clebsch_gordan_mult(a, b, m) for m in range(a + b + 2) if groups.clebsch_gordan_mult(a, b, m)}
    assert got == _cg_by_weights(a, b)
    assert sum(c * (m + 1) for m, c in got.items()) == (a + 1) * (b + 1)


@pytest.mark.parametrize("size", range(1, 9))
def test_symmetric_hermitian_pair_shape(rng, size):
    C, H = groups.random_symmetric_hermitian_pair(rng, size)
    np.testing.assert_allclose(C, C.T)
    assert np.all(np.linalg.eigvalsh(C.real) > 0)
    np.testing.assert_allclose(H, H.conj().T)
    assert np.all(np.linalg.eigvalsh(H) > -1e-9)
    assert groups.nonsingularity_margin(C, H) > 1e-12


def test_nonsingularity_margin_detects_singular():
    C = np.zeros((2, 2), dtype=complex)
    H = np.diag([1.0, 0.0]).astype(complex)
    assert groups.nonsingularity_margin(C, H) == 0.0


def test_weight_vector():
    np.testing.assert_array_equal(groups.weight_vector(SU2, 3), [0, 0, 3])
    np.testing.assert_array_equal(groups.weight_vector(GroupSpec.torus(2), (1, -1)), [1, -1])
