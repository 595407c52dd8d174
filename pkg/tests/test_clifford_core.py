import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffvcs.clifford_core import (
    Algebra,
    AlgebraElement,
    RepMatrix,
    apply_phase,
    cd_multiply,
    conjugate,
    k8_metric,
    link_metric,
    norm_residual,
    oct_left_matrix,
    oct_right_matrix,
    quat_to_matrix,
)
from cliffvcs.errors import AlgebraTagError

from _strategies import oct_coeffs, quat_coeffs

Q, O = Algebra.QUATERNION, Algebra.OCTONION

# Hamilton's table written out by hand: (row * col) -> (sign, index) over (1, i, j, k).
HAMILTON = {
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def unit(alg, idx):
    return AlgebraElement.unit(alg, idx)


def test_element_validates_length():
    with pytest.raises(AlgebraTagError):
        AlgebraElement(Q, [1, 2, 3])
    with pytest.raises(AlgebraTagError):
        AlgebraElement.octonion(1, 2, 3, 4)


def test_element_norm():
    assert AlgebraElement.quaternion(1, 1, 1, 1).norm() == 2.0
    assert AlgebraElement.quaternion(0, 0, 0, 0).norm() == 0.0
    assert AlgebraElement.octonion(np.arange(8.0)).norm() == pytest.approx(np.sqrt(140.0))


def test_quat_identity_element():
    assert np.array_equal(quat_to_matrix(unit(Q, 0)).entries, np.eye(4))


def test_quat_matrix_is_real_with_zero_phase():
    m = quat_to_matrix(AlgebraElement.quaternion(0.3, -1.2, 2.0, 0.7))
    assert m.phase == 0.0
    assert np.all(m.entries.imag == 0)


def test_quat_ij_equals_k():
    i, j, k = (quat_to_matrix(unit(Q, idx)).entries for idx in (1, 2, 3))
    assert np.array_equal(i @ j, k)


@pytest.mark.parametrize("pair", sorted(HAMILTON))
def test_cd_matches_hamilton_table(pair):
    sign, idx = HAMILTON[pair]
    prod = cd_multiply(unit(Q, pair[0]), unit(Q, pair[1]))
    expected = np.zeros(4)
    expected[idx] = sign
    assert np.array_equal(prod.coeffs, expected)


def test_quat_norm_identity_for_ones():
    m = quat_to_matrix(AlgebraElement.quaternion(1, 1, 1, 1)).entries.real
    assert np.array_equal(m @ m.T, 4.0 * np.eye(4))


def test_wrong_tag_rejected():
    with pytest.raises(AlgebraTagError):
        quat_to_matrix(unit(O, 0))
    with pytest.raises(AlgebraTagError):
        oct_left_matrix(unit(Q, 0))
    with pytest.raises(AlgebraTagError):
        oct_right_matrix(unit(Q, 0))
    with pytest.raises(AlgebraTagError):
        cd_multiply(unit(Q, 1), unit(O, 1))


def test_octonion_identity_element():
    assert np.array_equal(oct_left_matrix(unit(O, 0)).entries, np.eye(8))
    assert np.array_equal(oct_right_matrix(unit(O, 0)).entries, np.eye(8))


def test_omega_e1_orthogonal():
    w = oct_left_matrix(unit(O, 1)).entries.real
    assert np.array_equal(w @ w.T, np.eye(8))


def test_omega_and_nu_on_e1_e2():
    e1, e2 = unit(O, 1), unit(O, 2)
    assert np.array_equal(oct_left_matrix(e1).entries.real @ e2.coeffs, cd_multiply(e1, e2).coeffs)
    assert np.array_equal(oct_right_matrix(e1).entries.real @ e2.coeffs, cd_multiply(e2, e1).coeffs)


def test_all_unit_pairs_left_and_right():
    for a, b in itertools.product(range(8), repeat=2):
        ea, eb = unit(O, a), unit(O, b)
        ab = cd_multiply(ea, eb).coeffs
        assert np.abs(oct_left_matrix(ea).entries.real @ eb.coeffs - ab).max() <= 1e-13
        assert np.abs(oct_right_matrix(eb).entries.real @ ea.coeffs - ab).max() <= 1e-13


def test_k8_entries():
    k = k8_metric().entries.real
    assert k[0, 0] == 1 and k[1, 1] == -1 and k[4, 4] == 1
    assert np.array_equal(k @ k, np.eye(8))
    assert np.array_equal(k @ k.T, np.eye(8))
    assert np.linalg.det(k) == pytest.approx(-1.0)


def test_k8_link_holds_on_quaternion_subalgebra_only():
    k = k8_metric().entries.real
    for idx in range(4):
        e = unit(O, idx)
        assert np.array_equal(oct_right_matrix(e).entries.real,
                              k @ oct_left_matrix(e).entries.real.T @ k)
    e4 = unit(O, 4)
    gap = oct_right_matrix(e4).entries.real - k @ oct_left_matrix(e4).entries.real.T @ k
    assert np.abs(gap).max() == 2.0


@given(oct_coeffs)
def test_link_metric_relation(c):
    a = AlgebraElement(O, c)
    k = link_metric().entries.real
    w = oct_left_matrix(a).entries.real
    assert np.abs(oct_right_matrix(a).entries.real - k @ w.T @ k).max() <= 1e-13


def test_link_metric_is_orthogonal_with_det_minus_one():
    k = link_metric().entries.real
    assert np.array_equal(k @ k.T, np.eye(8))
    assert np.linalg.det(k) == pytest.approx(-1.0)


def test_apply_phase_zero_is_identity():
    m = quat_to_matrix(AlgebraElement.quaternion(1, 2, 3, 4))
    assert apply_phase(m, 0.0) is m


def test_apply_phase_pi():
    out = apply_phase(RepMatrix(np.eye(4)), np.pi)
    assert np.allclose(out.entries, -np.eye(4), atol=1e-15)
    assert out.phase == pytest.approx(np.pi)


def test_apply_phase_wraps():
    out = apply_phase(RepMatrix(np.eye(2)), 5 * np.pi / 2)
    assert out.phase == pytest.approx(np.pi / 2)
    with pytest.raises(ValueError):
        apply_phase(RepMatrix(np.eye(2)), np.inf)


@given(quat_coeffs, st.floats(-10, 10))
def test_phase_preserves_norm_property(c, theta):
    q = AlgebraElement(Q, c)
    m = quat_to_matrix(q)
    z = apply_phase(m, theta)
    gram = z.entries.conj().T @ z.entries
    assert np.abs(gram - m.entries.real.T @ m.entries.real).max() <= 1e-12
    assert norm_residual(z, q.norm() ** 2) <= 1e-12


def test_cd_ijk():
    i, j, k = unit(Q, 1), unit(Q, 2), unit(Q, 3)
    assert np.array_equal(cd_multiply(cd_multiply(i, j), k).coeffs, [-1, 0, 0, 0])


def test_cd_identity_left():
    b = AlgebraElement.octonion(np.arange(1.0, 9.0))
    assert cd_multiply(unit(O, 0), b) == b


def test_octonion_units_anticommute():
    for a, b in itertools.combinations(range(1, 8), 2):
        ab = cd_multiply(unit(O, a), unit(O, b)).coeffs
        ba = cd_multiply(unit(O, b), unit(O, a)).coeffs
        assert np.array_equal(ab, -ba)


def test_conjugate():
    a = AlgebraElement.quaternion(1, 2, 3, 4)
    assert np.array_equal(conjugate(a).coeffs, [1, -2, -3, -4])
    assert conjugate(conjugate(a)) == a


@given(oct_coeffs)
def test_conjugate_product_is_norm(c):
    a = AlgebraElement(O, c)
    prod = cd_multiply(a, conjugate(a)).coeffs
    assert prod[0] == pytest.approx(a.norm() ** 2, rel=1e-12, abs=1e-12)
    assert np.abs(prod[1:]).max() <= 1e-12


@given(oct_coeffs)
def test_omega_of_conjugate_is_transpose(c):
    a = AlgebraElement(O, c)
    assert np.array_equal(oct_left_matrix(conjugate(a)).entries, oct_left_matrix(a).entries.T)


@given(quat_coeffs, quat_coeffs)
def test_quaternion_representation_property(c1, c2):
    a, b = AlgebraElement(Q, c1), AlgebraElement(Q, c2)
    ab = cd_multiply(a, b)
    assert np.abs(quat_to_matrix(a).entries.real @ b.coeffs - ab.coeffs).max() <= 1e-13 * max(1, a.norm() * b.norm())
    hom = quat_to_matrix(ab).entries - quat_to_matrix(a).entries @ quat_to_matrix(b).entries
    assert np.abs(hom).max() <= 1e-12 * max(1, a.norm() * b.norm())


@given(oct_coeffs, oct_coeffs)
def test_octonion_representation_property(c1, c2):
    a, b = AlgebraElement(O, c1), AlgebraElement(O, c2)
    scale = max(1.0, a.norm() * b.norm())
    assert np.abs(oct_left_matrix(a).entries.real @ b.coeffs - cd_multiply(a, b).coeffs).max() <= 1e-13 * scale
    assert np.abs(oct_right_matrix(a).entries.real @ b.coeffs - cd_multiply(b, a).coeffs).max() <= 1e-13 * scale
    assert cd_multiply(a, b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-12, abs=1e-12)


@given(oct_coeffs)
def test_octonion_norm_property(c):
    a = AlgebraElement(O, c)
    assert norm_residual(oct_left_matrix(a), a.norm() ** 2) <= 1e-12
    assert norm_residual(oct_right_matrix(a), a.norm() ** 2) <= 1e-12


def test_norm_property_thousand_random(rng):
    worst = 0.0
    for c4, c8 in zip(rng.normal(size=(1000, 4)), rng.normal(size=(1000, 8))):
        q, a = AlgebraElement(Q, c4), AlgebraElement(O, c8)
        worst = max(worst, norm_residual(quat_to_matrix(q), q.norm() ** 2),
                    norm_residual(oct_left_matrix(a), a.norm() ** 2),
                    norm_residual(oct_right_matrix(a), a.norm() ** 2))
    assert worst <= 1e-12


def test_octonion_left_representation_not_multiplicative():
    e1, e2, e4 = unit(O, 1), unit(O, 2), unit(O, 4)
    lhs = oct_left_matrix(cd_multiply(e1, e2)).entries
    rhs = oct_left_matrix(e1).entries @ oct_left_matrix(e2).entries
    assert np.abs((lhs - rhs) @ e4.coeffs).max() == 2.0


def test_zero_element_norm_property():
    z = AlgebraElement.octonion(np.zeros(8))
    assert norm_residual(oct_left_matrix(z), 0.0) == 0.0
