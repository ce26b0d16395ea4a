import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_unitary
from tenfold.errors import (
    BadSpinAlgebraError,
    NotChargeConservingError,
    NotInnerRelatedError,
    NotQuaternionicError,
    StructuralFailureError,
)
from tenfold.linalg import SIGMA_X, SIGMA_Y, AntiLinearOp, conjugate_by
from tenfold.nambu import BdGHamiltonian, NambuSpace
from tenfold.symmetry import (
    QUATERNIONIC_T,
    charge_reduce,
    check_spin_algebra,
    find_inner_generator,
    lift_phs,
    lift_trs,
    make_spin_generators,
    quaternionic_factor,
    relative_signs,
    spin_factorization,
    spin_matrices,
    standard_trs,
)


def test_trs_must_be_quaternionic():
    N = NambuSpace(2)
    with pytest.raises(NotQuaternionicError):
        lift_trs(N, AntiLinearOp(np.eye(2)))
    assert lift_trs(N, QUATERNIONIC_T).is_quaternionic()


def test_phs_lift_is_real_structure():
    N = NambuSpace(2)
    L = lift_phs(N, np.diag([1, -1]))
    assert L.is_real_structure()
    with pytest.raises(StructuralFailureError):
        lift_phs(N, 1j * np.eye(2))


def test_odd_trs_sign():
    N = NambuSpace(2)
    T = lift_trs(N, standard_trs(1))
    assert relative_signs(T, N.gamma).eta1 == -1


@given(st.integers(0, 10**6))
def test_sign_is_independent_of_generator_phase(seed):
    # rescaling the operator defining r by a phase leaves Ad_r and the sign unchanged
    rng = np.random.default_rng(seed)
    N = NambuSpace(2)
    T = lift_trs(N, standard_trs(1))
    phase = np.exp(2j * np.pi * rng.uniform())
    assert relative_signs(AntiLinearOp(phase * T.mat), N.gamma).eta1 == -1


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_inner_generator_reproduces_composite(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_unitary(rng, n), random_unitary(rng, n)
    u = find_inner_generator(AntiLinearOp(a), AntiLinearOp(b))
    x = rng.normal(size=(n, n))
    target = conjugate_by(AntiLinearOp(b), conjugate_by(AntiLinearOp(a), x))
    assert np.allclose(u @ x @ u.conj().T, target)


def test_mixed_kinds_are_not_inner_related():
    with pytest.raises(NotInnerRelatedError):
        find_inner_generator(np.eye(2), AntiLinearOp(np.eye(2)))


def test_spin_algebra():
    js = spin_matrices(4)
    check_spin_algebra(js)
    with pytest.raises(BadSpinAlgebraError):
        check_spin_algebra([js[1], js[0], js[2]])


@pytest.mark.parametrize("cells", [1, 2, 3])
def test_factorization_images(cells):
    N = NambuSpace(2 * cells)
    js = [o.lifted for o in make_spin_generators(N)]
    sf = spin_factorization(js)
    one = np.eye(sf.half_dim)
    assert np.allclose(sf.chi(js[0]), sf.tensor(one, 1j * SIGMA_Y), atol=1e-10)
    assert np.allclose(sf.chi(js[1]), sf.tensor(one, 1j * SIGMA_X), atol=1e-10)


def test_gamma_plus_is_quaternionic():
    qf = quaternionic_factor(NambuSpace(2), make_spin_generators(NambuSpace(2)))
    assert qf.gamma_plus_square == -1
    f = qf.spin.chi_antilinear(NambuSpace(2).gamma)
    assert np.allclose(f.mat, np.kron(QUATERNIONIC_T.mat, qf.gamma_plus.mat))


def test_reduce_rejects_non_commuting():
    js = spin_matrices(2)
    sf = spin_factorization(js)
    with pytest.raises(StructuralFailureError):
        sf.reduce(np.diag([1.0, -1.0]))


def test_charge_reduce():
    B = BdGHamiltonian(np.diag([1.0, -1.0]), np.zeros((2, 2)))
    assert np.allclose(charge_reduce(B), np.diag([1.0, -1.0]))
    with pytest.raises(NotChargeConservingError):
        charge_reduce(BdGHamiltonian(np.eye(2), np.array([[0, 1], [-1, 0]])))
