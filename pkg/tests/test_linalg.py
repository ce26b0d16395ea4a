
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_antisymmetric, random_hermitian, random_unitary
from tenfold.errors import GaplessError, NotAntisymmetricError, NotSelfAdjointError, OddDimensionError
from tenfold.linalg import (
    AntiLinearOp,
    compose,
    conjugate_by,
    eigenspace,
    pfaffian,
    real_basis,
    scalar_value,
    spectral_sign,
)


def pfaffian_by_expansion(a):
    """Expansion along the first row: Pf(A) = sum_j (-1)^(j+1) a_0j Pf(A without 0, j)."""
    n = a.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    for j in range(1, n):
        keep = [k for k in range(n) if k not in (0, j)]
        total += (-1) ** (j + 1) * a[0, j] * pfaffian_by_expansion(a[np.ix_(keep, keep)])
    return total


def test_pfaffian_of_standard_block():
    assert pfaffian(np.array([[0, 1], [-1, 0]])) == 1


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_pfaffian_matches_expansion_oracle(half, seed):
    a = random_antisymmetric(np.random.default_rng(seed), 2 * half)
    assert abs(pfaffian(a) - pfaffian_by_expansion(a)) < 1e-9 * max(1, abs(pfaffian_by_expansion(a)))


@given(st.integers(1, 5), st.integers(0, 10**6))
def test_pfaffian_squares_to_determinant(half, seed):
    a = random_antisymmetric(np.random.default_rng(seed), 2 * half)
    assert abs(pfaffian(a) ** 2 - np.linalg.det(a)) < 1e-8 * max(1, abs(np.linalg.det(a)))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_pfaffian_congruence(half, seed):
    rng = np.random.default_rng(seed)
    a = random_antisymmetric(rng, 2 * half)
    b = rng.normal(size=a.shape) + 1j * rng.normal(size=a.shape)
    lhs = pfaffian(b @ a @ b.T)
    assert abs(lhs - np.linalg.det(b) * pfaffian(a)) < 1e-8 * max(1, abs(lhs))


def test_pfaffian_errors():
    with pytest.raises(OddDimensionError):
        pfaffian(np.zeros((3, 3)))
    with pytest.raises(NotAntisymmetricError):
        pfaffian(np.eye(2))


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_spectral_sign_is_selfadjoint_unitary(n, seed):
    h = random_hermitian(np.random.default_rng(seed), n)
    s = spectral_sign(h)
    assert np.allclose(s @ s, np.eye(n), atol=1e-10)
    assert np.allclose(s, s.conj().T, atol=1e-10)
    assert np.allclose(s @ h, h @ s, atol=1e-8)
    assert np.allclose(spectral_sign(s), s, atol=1e-10)


def test_spectral_sign_errors():
    with pytest.raises(GaplessError):
        spectral_sign(np.diag([1.0, 0.0]))
    with pytest.raises(NotSelfAdjointError):
        spectral_sign(np.array([[0, 1], [0, 0]]))


def test_antilinear_composition():
    t = AntiLinearOp(np.array([[0, 1], [-1, 0]]))
    assert t.is_quaternionic()
    assert np.allclose(compose(t, t), -np.eye(2))
    v = np.array([1j, 2.0])
    assert np.allclose(t(t(v)), -v)
    assert isinstance(compose(t, np.eye(2)), AntiLinearOp)
    assert np.allclose(t.inverse()(t(v)), v)


@given(st.integers(1, 5), st.integers(0, 10**6))
def test_conjugation_by_antilinear_matches_action(n, seed):
    rng = np.random.default_rng(seed)
    a = AntiLinearOp(random_unitary(rng, n))
    x = random_hermitian(rng, n)
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    # Ad_a(x) a(v) = a(x v)
    assert np.allclose(conjugate_by(a, x) @ a(v), a(x @ v))


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_real_basis_diagonalizes_real_structure(n, seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, n)
    r = AntiLinearOp(u @ u.T)
    b = real_basis(r)
    assert np.allclose(b.conj().T @ b, np.eye(n), atol=1e-9)
    for k in range(n):
        assert np.allclose(r(b[:, k]), b[:, k], atol=1e-8)


def test_eigenspace_and_scalar():
    x = np.diag([1j, -1j, 1j])
    assert eigenspace(x, 1j).shape == (3, 2)
    assert scalar_value(2 * np.eye(3)) == 2
    assert scalar_value(np.diag([1, 2])) is None
