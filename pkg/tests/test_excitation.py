import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import kron_label
from tritonsim.excitation import (ExcitationCoefficients, ExcitationError, annihilation_operators,
                                  antisymmetric_z_form, coefficients_from_angle, excitation_operator,
                                  jordan_wigner_two_mode, leakage, register_mapping, restrict_to_subspace,
                                  single_z_form, subspace_matrix)
from tritonsim.pauli import PauliSum, PauliTerm, to_dense

GROUND, EXCITED = 1, 2  # |q0=1,q1=0> and |q0=0,q1=1>


def random_hermitian(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return (a + a.conj().T) / 2


def test_fermion_algebra():
    c = annihilation_operators(2)
    for p in range(2):
        for q in range(2):
            anti = c[p] @ c[q].conj().T + c[q].conj().T @ c[p]
            assert np.allclose(anti, np.eye(4) * (p == q))
            assert np.allclose(c[p] @ c[q] + c[q] @ c[p], 0)
    # occupied mode p means qubit p is |1>
    n0 = c[0].conj().T @ c[0]
    assert np.allclose(np.diag(n0).real, [0, 1, 0, 1])


def test_identity():
    op = jordan_wigner_two_mode(np.eye(2))
    r = restrict_to_subspace(op)
    assert np.allclose(r.matrix, np.eye(2))
    assert r.pauli.identity_offset == 1.0 and not r.pauli.terms


def test_diagonal_has_no_hopping():
    a, g = 0.7, -0.4
    op = jordan_wigner_two_mode(np.diag([a + g, a - g]))
    assert {t.axes for t in op.terms} <= {"ZI", "IZ"}
    assert np.allclose(subspace_matrix(op), np.diag([a + g, a - g]))


def test_pure_x():
    op = jordan_wigner_two_mode(np.array([[0, 1], [1, 0]]))
    assert op.identity_offset == 0
    assert sorted((t.axes, t.coefficient) for t in op.terms) == [("XX", 0.5), ("YY", 0.5)]
    assert np.allclose(subspace_matrix(op), [[0, 1], [1, 0]])


def test_pure_y_image_derived_not_assumed():
    op = jordan_wigner_two_mode(np.array([[0, -1j], [1j, 0]]))
    coeffs = {t.axes: t.coefficient for t in op.terms}
    assert set(coeffs) == {"XY", "YX"}
    assert coeffs["XY"] == pytest.approx(-coeffs["YX"])
    assert abs(coeffs["XY"]) == pytest.approx(0.5)
    # dense check of the sign on the subspace
    m = to_dense(op)
    assert m[EXCITED, GROUND] == pytest.approx(1j)


def test_non_hermitian_rejected():
    with pytest.raises(ExcitationError):
        jordan_wigner_two_mode(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ExcitationError):
        jordan_wigner_two_mode(np.eye(3))


def test_restrict_rejects_leakage():
    with pytest.raises(ExcitationError):
        restrict_to_subspace(PauliSum(2, (PauliTerm(1.0, "XI"),)))
    with pytest.raises(ExcitationError):
        restrict_to_subspace(PauliSum(3, (), 1.0))


def test_alpha_only_unchanged():
    r = restrict_to_subspace(PauliSum(2, (), 2.5))
    assert r.pauli.identity_offset == 2.5 and not r.pauli.terms


@pytest.mark.parametrize("alpha,beta,gamma", [(1.0, 0.5, 0.3), (-2.0, 1.5, 4.0), (0.0, 1.0, -1.0)])
def test_printed_forms_agree_on_subspace_only(alpha, beta, gamma):
    a = to_dense(single_z_form(alpha, beta, gamma))
    b = to_dense(antisymmetric_z_form(alpha, beta, gamma))
    basis = [GROUND, EXCITED]
    assert np.allclose(a[np.ix_(basis, basis)], b[np.ix_(basis, basis)], atol=1e-12)
    if gamma:
        assert not np.allclose(a, b)
    # on the subspace both read alpha - gamma on the ground level
    assert a[GROUND, GROUND].real == pytest.approx(alpha - gamma)
    r = restrict_to_subspace(single_z_form(alpha, beta, gamma))
    assert np.allclose(subspace_matrix(r.pauli), b[np.ix_(basis, basis)], atol=1e-12)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_property(seed):
    h = random_hermitian(np.random.default_rng(seed))
    op = jordan_wigner_two_mode(h)
    r = restrict_to_subspace(op)
    assert np.max(np.abs(r.matrix - h)) <= 1e-12
    assert np.max(np.abs(subspace_matrix(r.pauli) - h)) <= 1e-12
    assert leakage(op) <= 1e-12 and leakage(r.pauli) <= 1e-12
    dense = to_dense(r.pauli)
    assert np.allclose(dense, dense.conj().T, atol=1e-12)
    assert {t.axes for t in r.pauli.terms} <= {"ZI", "IZ", "XX", "YY", "XY", "YX"}


def test_restricted_form_by_independent_kron():
    rng = np.random.default_rng(9)
    h = random_hermitian(rng)
    r = restrict_to_subspace(jordan_wigner_two_mode(h))
    dense = r.pauli.identity_offset * np.eye(4) + sum(t.coefficient * kron_label(t.axes) for t in r.pauli.terms)
    basis = [GROUND, EXCITED]
    assert np.allclose(dense[np.ix_(basis, basis)], h, atol=1e-12)


def test_mapping_examples():
    c = coefficients_from_angle(0.0, 0.0)
    assert (c.alpha, c.beta, c.gamma, c.delta) == (1.0, 0.0, 1.0, 0.0)
    c = coefficients_from_angle(np.pi / 2, 0.0)
    assert np.allclose([c.alpha, c.beta, c.gamma, c.delta], [1, 1, 0, 0], atol=1e-15)
    c = coefficients_from_angle(0.8, 1.1, alpha0=3.0)
    assert c.alpha == 3.0 and c.delta == pytest.approx(np.sin(0.8) * np.sin(1.1))
    assert c.mapping == "dipole-axis"


def test_deuteron_mapping():
    for theta in np.linspace(0, np.pi, 7):
        c = coefficients_from_angle(theta, mapping="deuteron", alpha0=1.3)
        assert c.gamma == -c.alpha


def test_unknown_mapping_and_registration():
    with pytest.raises(ExcitationError):
        coefficients_from_angle(0.1, mapping="nope")
    register_mapping("flat", lambda th, ph, a0: (a0, 0.0, 0.0, 0.0))
    assert coefficients_from_angle(1.0, mapping="flat").alpha == 1.0


def test_excitation_operator_matches_first_quantised_matrix():
    c = ExcitationCoefficients(0.3, -1.2, 0.8, 0.5)
    assert np.allclose(excitation_operator(c).matrix, c.matrix(), atol=1e-12)
    assert c.one_norm == pytest.approx(2.8)
