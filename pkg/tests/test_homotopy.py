import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_hermitian, random_unitary
from tenfold.classify import BY_CARTAN, invariant_value, reduce_pipeline
from tenfold.errors import GradingMismatchError
from tenfold.homotopy import (
    Connected,
    FElement,
    GradedMatrixAlgebra,
    NotFound,
    check_path,
    class_a_index,
    canonical_reference,
    clifford_one_algebra,
    clifford_one_embed,
    direct_sum,
    f_membership,
    homotopy_oracle,
    project,
    project_and_flatten,
)
from tenfold.instances import random_instance, standard_operators
from tenfold.linalg import SIGMA_X, SIGMA_Z, block_diag


def flat_with_rank(rng, k, neg):
    u = random_unitary(rng, k)
    return u @ np.diag([-1.0] * neg + [1.0] * (k - neg)) @ u.conj().T


def test_trivial_grading_has_no_odd_elements():
    alg = GradedMatrixAlgebra(2)
    ok, why = f_membership(alg, SIGMA_X)
    assert not ok and "odd" in why


def test_inner_grading_membership():
    alg = GradedMatrixAlgebra(2, SIGMA_Z)
    assert f_membership(alg, SIGMA_X) == (True, "ok")
    ok, why = f_membership(alg, random_hermitian(np.random.default_rng(0), 2))
    assert not ok and why == "not unitary"
    ok, why = f_membership(alg, np.eye(3))
    assert not ok and "dimension" in why


def test_grading_must_be_involution():
    with pytest.raises(GradingMismatchError):
        GradedMatrixAlgebra(2, 2 * SIGMA_Z)


def test_direct_sum_is_block_diagonal():
    alg = GradedMatrixAlgebra(2, SIGMA_Z)
    x = FElement(SIGMA_X, alg)
    s = direct_sum(x, x)
    assert np.allclose(s.a, block_diag(SIGMA_X, SIGMA_X))
    assert f_membership(s.algebra, s.a)[0]


def test_direct_sum_rejects_mismatched_structures():
    from tenfold.linalg import AntiLinearOp

    x = FElement(SIGMA_X, GradedMatrixAlgebra(2, SIGMA_Z))
    y = FElement(SIGMA_X, GradedMatrixAlgebra(2, SIGMA_Z, AntiLinearOp(np.eye(2))))
    with pytest.raises(GradingMismatchError):
        direct_sum(x, y)


@pytest.mark.parametrize("cartan", list(BY_CARTAN))
def test_projection_is_idempotent_on_members(cartan):
    N, ops = standard_operators(cartan)
    red = reduce_pipeline(N, random_instance(N, ops, np.random.default_rng(2)), ops)
    assert f_membership(red.relations, red.element)[0]
    assert np.allclose(project(red.relations, red.element), red.element, atol=1e-10)
    assert np.allclose(project_and_flatten(red.relations, red.element), red.element, atol=1e-10)


def test_canonical_reference_over_complex_numbers():
    e = canonical_reference(GradedMatrixAlgebra(1))
    f = np.array([[0, 1], [1, 0]])
    assert np.allclose(e.a, block_diag(f, -f))
    g = e.algebra.grading
    assert np.allclose(g @ g, np.eye(4))
    assert np.allclose(e.a @ e.a, np.eye(4))
    res = homotopy_oracle(e, FElement(-e.a, e.algebra))
    assert isinstance(res, Connected)
    assert check_path(e.algebra, res.path)[0]


def test_rotation_between_e_plus_minus_e():
    e = canonical_reference(GradedMatrixAlgebra(1))
    doubled = direct_sum(e, FElement(-e.a, e.algebra))
    swap = np.kron(SIGMA_X, e.a)
    for t in np.linspace(0, np.pi, 33):
        a = np.cos(t) * doubled.a + np.sin(t) * swap
        assert f_membership(doubled.algebra, a)[0]
    assert np.allclose(np.cos(np.pi) * doubled.a, block_diag(-e.a, e.a))


def test_identical_endpoints():
    x = FElement(SIGMA_X, GradedMatrixAlgebra(2, SIGMA_Z))
    res = homotopy_oracle(x, x)
    assert isinstance(res, Connected) and len(res.path) == 1


def test_class_a_different_ranks_not_connected():
    N, ops = standard_operators("A", 3)
    red = reduce_pipeline(N, random_instance(N, ops, np.random.default_rng(0)), ops)
    rng = np.random.default_rng(1)
    x, y = flat_with_rank(rng, 3, 1), flat_with_rank(rng, 3, 2)
    assert invariant_value(red.with_element(x)) != invariant_value(red.with_element(y))
    assert isinstance(homotopy_oracle(x, y, red.relations, budget=5), NotFound)


@given(st.integers(0, 3), st.integers(0, 10**6))
def test_class_a_equal_ranks_connected(neg, seed):
    N, ops = standard_operators("A", 3)
    red = reduce_pipeline(N, random_instance(N, ops, np.random.default_rng(0)), ops)
    rng = np.random.default_rng(seed)
    x, y = flat_with_rank(rng, 3, neg), flat_with_rank(rng, 3, neg)
    res = homotopy_oracle(x, y, red.relations, seed=seed)
    assert isinstance(res, Connected)
    ok, _ = check_path(red.relations, res.path)
    assert ok
    # soundness: the invariant is constant along the witness path
    values = {invariant_value(red.with_element(p)) for p in res.path}
    assert len(values) == 1


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_class_a_neutrality_of_reference(k, seed):
    rng = np.random.default_rng(seed)
    h = flat_with_rank(rng, k, int(rng.integers(0, k + 1)))
    x, x0 = clifford_one_embed(h), clifford_one_embed(np.eye(k))
    e = canonical_reference(clifford_one_algebra(k))
    base = class_a_index(x, x0, k)
    assert base == int(np.sum(np.linalg.eigvalsh(h) < 0))
    assert class_a_index(direct_sum(x, e), direct_sum(x0, e), k) == base


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_class_a_additivity(k1, k2, seed):
    rng = np.random.default_rng(seed)
    h1 = flat_with_rank(rng, k1, int(rng.integers(0, k1 + 1)))
    h2 = flat_with_rank(rng, k2, int(rng.integers(0, k2 + 1)))
    N, ops = standard_operators("A", k1 + k2)
    red = reduce_pipeline(N, random_instance(N, ops, rng), ops)
    total = invariant_value(red.with_element(block_diag(h1, h2))).value
    assert total == int(np.sum(np.linalg.eigvalsh(h1) < 0)) + int(np.sum(np.linalg.eigvalsh(h2) < 0))


def test_oracle_rejects_non_members():
    alg = GradedMatrixAlgebra(2, SIGMA_Z)
    with pytest.raises(GradingMismatchError):
        homotopy_oracle(SIGMA_X, SIGMA_Z, alg)
