import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_antisymmetric, random_hermitian
from tenfold.errors import (
    GaplessError,
    NotAntisymmetricError,
    NotFreeFermionError,
    NotImaginaryError,
    NotSelfAdjointError,
)
from tenfold.fock import FockSpace, build_quadratic_hamiltonian
from tenfold.linalg import conjugate_by
from tenfold.nambu import BdGHamiltonian, NambuSpace, eta, extract_bdg, flatten_bdg, is_gapped, q_form


def test_single_mode_convention():
    # H = eps N - eps/2 has BdG matrix diag(eps, -eps)
    F, N = FockSpace(1), NambuSpace(1)
    H = build_quadratic_hamiltonian(F, [[2.0]], [[0.0]])
    assert np.allclose(H, np.diag([-1.0, 1.0]))
    B = extract_bdg(N, F, H)
    assert np.allclose(B.full, np.diag([2.0, -2.0]))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_extraction_recovers_coefficients(n, seed):
    # pinned convention: P = Theta, Delta = Xi
    rng = np.random.default_rng(seed)
    theta, xi = random_hermitian(rng, n), random_antisymmetric(rng, n)
    F, N = FockSpace(n), NambuSpace(n)
    B = extract_bdg(N, F, build_quadratic_hamiltonian(F, theta, xi))
    assert np.allclose(B.P, theta, atol=1e-10)
    assert np.allclose(B.Delta, xi, atol=1e-10)


@given(st.integers(1, 3), st.integers(0, 10**6))
def test_bdg_matrix_generates_commutators(n, seed):
    rng = np.random.default_rng(seed)
    theta, xi = random_hermitian(rng, n), random_antisymmetric(rng, n)
    F, N = FockSpace(n), NambuSpace(n)
    H = build_quadratic_hamiltonian(F, theta, xi)
    B = extract_bdg(N, F, H)
    w = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
    hw = B.full @ w
    field = eta(N, F, w[:n], w[n:])
    assert np.allclose(H @ field - field @ H, eta(N, F, hw[:n], hw[n:]), atol=1e-9)


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_car_with_q_form(n, seed):
    rng = np.random.default_rng(seed)
    N, F = NambuSpace(n), FockSpace(n)
    w1 = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
    w2 = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
    a, b = eta(N, F, w1[:n], w1[n:]), eta(N, F, w2[:n], w2[n:])
    assert np.allclose(a @ b + b @ a, q_form(N, w1, w2) * np.eye(F.dim), atol=1e-10)
    # eta(gamma w) = eta(w)^dagger
    gw = N.gamma(w1)
    assert np.allclose(eta(N, F, gw[:n], gw[n:]), a.conj().T)


def test_quartic_hamiltonian_is_rejected():
    F, N = FockSpace(2), NambuSpace(2)
    c0, c1 = F.mode_creators
    n0, n1 = c0 @ c0.T, c1 @ c1.T
    with pytest.raises(NotFreeFermionError):
        extract_bdg(N, F, n0 @ n1)


def test_bdg_validation_errors():
    with pytest.raises(NotSelfAdjointError):
        BdGHamiltonian([[0, 1], [0, 0]], np.zeros((2, 2)))
    with pytest.raises(NotAntisymmetricError):
        BdGHamiltonian(np.eye(2), np.ones((2, 2)))
    with pytest.raises(NotImaginaryError):
        BdGHamiltonian.from_full(np.eye(2))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_full_matrix_is_imaginary_and_flattens(n, seed):
    rng = np.random.default_rng(seed)
    B = BdGHamiltonian(random_hermitian(rng, n), random_antisymmetric(rng, n))
    N = NambuSpace(n)
    assert np.allclose(conjugate_by(N.gamma, B.full), -B.full)
    Bf = flatten_bdg(B)
    assert np.allclose(Bf.full @ Bf.full, np.eye(2 * n), atol=1e-9)


def test_gapless_flattening_fails():
    B = BdGHamiltonian(np.zeros((1, 1)), np.zeros((1, 1)))
    assert not is_gapped(B)
    with pytest.raises(GaplessError):
        flatten_bdg(B)


def test_lifts():
    N = NambuSpace(2)
    x = np.array([[1, 1j], [0, 2]])
    assert np.allclose(N.lift_linear(x), np.block([[x, 0 * x], [0 * x, x.conj()]]))
    assert np.allclose(N.charge, np.diag([1, 1, -1, -1]))
