import numpy as np
import pytest
from hypothesis import given, strategies as st

from tenfold.classify import (
    BY_CARTAN,
    TABLE,
    InvariantValue,
    ReducedSystem,
    bdi_reference,
    SymmetrySet,
    classify_set,
    derive_label_from_operators,
    invariant_value,
    majorana_form,
    majorana_matrix,
    pfaffian_sign,
    reduce_pipeline,
    shift_by_quaternions,
    translate_abstract,
)
from tenfold.errors import (
    InadmissibleSetError,
    KramersViolationError,
    NotFlattenedError,
    SymmetryViolatedError,
)
from tenfold.fock import FockSpace, build_quadratic_hamiltonian
from tenfold.homotopy import RelationSet
from tenfold.instances import perturb, random_instance, standard_operators
from tenfold.linalg import block_diag, pfaffian
from tenfold.nambu import BdGHamiltonian, NambuSpace

CLASSES = list(BY_CARTAN)


@pytest.mark.parametrize("flags, expected", [
    ((), (0, "D", "KO", 2, None, 1)),
    (("TRS",), (1, "DIII", "KO", 3, -1, 1)),
    (("SRS", "TRS", "Q"), (6, "AI", "KO", 0, 1, None)),
    (("Q",), (0, "A", "KU", 0, None, None)),
])
def test_classify_examples(flags, expected):
    lab = classify_set(flags)
    got = (lab.s, lab.cartan, lab.series, lab.index, lab.abstract_view.trs_sign, lab.abstract_view.phs_sign)
    assert got == expected


@pytest.mark.parametrize("flags", [("PHS",), ("SRS", "Q"), ("TRS", "PHS"), ("FOO",)])
def test_inadmissible_sets(flags):
    with pytest.raises(InadmissibleSetError):
        classify_set(flags)


def test_parse_symmetry_set():
    assert SymmetrySet.parse("trs, q").flags == {"TRS", "Q"}
    assert SymmetrySet.parse("none").flags == frozenset()
    assert SymmetrySet.parse("SRS+TRS").flags == {"SRS", "TRS"}


def test_translate_abstract_examples():
    d = translate_abstract({"TRS", "Q", "PHS"})
    assert d.real_structures == (("TRS", -1), ("PHS", -1)) and d.grading == "real-inner"
    d = translate_abstract({"SRS", "TRS"})
    assert d.real_structures == (("TRS", 1), ("PHS", -1))
    d = translate_abstract({"Q", "PHS"})
    assert d.real_structures == () and d.grading == "inner" and d.k_group == "KU_1"


@pytest.mark.parametrize("row", TABLE, ids=lambda r: r.cartan)
def test_table_closure(row):
    assert translate_abstract(row.flags).k_group == row.k_group
    if "SRS" not in row.flags and row.real:
        partner = classify_set(row.flags | {"SRS"})
        assert partner.index == shift_by_quaternions(row.index)


def test_shift_examples():
    assert [shift_by_quaternions(i) for i in (2, 3, 0)] == [6, 7, 4]


@pytest.mark.parametrize("cartan", CLASSES)
def test_random_instances_validate(cartan):
    N, ops = standard_operators(cartan)
    rng = np.random.default_rng(hash(cartan) % 2**32)
    for _ in range(50):
        B = random_instance(N, ops, rng)
        label, report = derive_label_from_operators(N, B, ops)
        assert label is BY_CARTAN[cartan]
        assert all(r < 1e-8 for r in report.residuals.values())


def test_diii_sign_recomputed():
    N, ops = standard_operators("DIII", 1)
    B = random_instance(N, ops, np.random.default_rng(0))
    _, report = derive_label_from_operators(N, B, ops)
    assert report.signs["TRS"].eta1 == -1
    assert report.chiral == "imag-inner"


def test_symmetric_pairing_is_rejected():
    N, ops = standard_operators("D", 2)
    B = random_instance(N, ops, np.random.default_rng(0))
    sym = np.array([[0.0, 0.4], [0.4, 0.0]])
    h = B.full + np.block([[0 * sym, sym], [sym, 0 * sym]])
    with pytest.raises(SymmetryViolatedError, match="gamma"):
        derive_label_from_operators(N, h, ops)


def test_broken_time_reversal_is_rejected():
    N, ops = standard_operators("DIII", 1)
    B = random_instance(N, ops, np.random.default_rng(0))
    broken = BdGHamiltonian(B.P + np.diag([0.3, -0.3]), B.Delta)
    with pytest.raises(SymmetryViolatedError, match="TRS"):
        derive_label_from_operators(N, broken, ops)


@pytest.mark.parametrize("cartan", CLASSES)
def test_flattening_commutes_with_classification(cartan):
    N, ops = standard_operators(cartan)
    B = random_instance(N, ops, np.random.default_rng(3))
    scaled = BdGHamiltonian(2.5 * B.P, 2.5 * B.Delta)
    assert derive_label_from_operators(N, scaled, ops)[0] is derive_label_from_operators(N, B, ops)[0]


@pytest.mark.parametrize("cartan, space, relations", [
    ("A", "V", []),
    ("C", "W+", ["gamma+"]),
    ("AI", "V+", ["TRS"]),
    ("BDI", "V+", ["TRS", "chiral"]),
    ("D", "W", ["gamma"]),
])
def test_reduce_pipeline_shapes(cartan, space, relations):
    N, ops = standard_operators(cartan)
    B = random_instance(N, ops, np.random.default_rng(0))
    red = reduce_pipeline(N, B, ops)
    assert red.space == space
    assert [r.name for r in red.relations.relations] == relations
    for r in red.relations.relations:
        assert r.residual(red.element) < 1e-8


def _class_a(p):
    return ReducedSystem(BY_CARTAN["A"], np.asarray(p, dtype=complex), RelationSet(len(p)), "V")


def test_class_a_counts_negative_eigenvalues():
    assert invariant_value(_class_a(np.diag([1, -1, -1]))) == InvariantValue("Z", 2)


def test_class_aii_fully_occupied_kramers_pair():
    N, ops = standard_operators("AII", 1)
    B = BdGHamiltonian(-np.eye(2), np.zeros((2, 2)))
    derive_label_from_operators(N, B, ops)
    assert invariant_value(reduce_pipeline(N, B, ops)) == InvariantValue("Z", 1)


def test_kramers_violation():
    N, ops = standard_operators("AII", 1)
    red = reduce_pipeline(N, BdGHamiltonian(-np.eye(2), np.zeros((2, 2))), ops)
    with pytest.raises(KramersViolationError):
        invariant_value(red.with_element(np.diag([1.0, -1.0])))


def test_not_flattened():
    with pytest.raises(NotFlattenedError):
        invariant_value(_class_a(np.diag([2.0, -1.0])))


def test_majorana_transform_is_pinned():
    om = majorana_matrix(1)
    assert np.allclose(om, np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2))
    # (x, conj x) goes to sqrt2 (Re x, Im x)
    x = 0.3 + 0.7j
    assert np.allclose(om @ np.array([x, np.conj(x)]), np.sqrt(2) * np.array([x.real, x.imag]))
    a = majorana_form(np.diag([1.0, -1.0]))
    assert np.allclose(a, -a.T) and np.isrealobj(a)


@pytest.mark.parametrize("eps, parity", [(1.0, 0), (-1.0, 1)])
def test_class_d_minimal(eps, parity):
    N, ops = standard_operators("D", 1)
    B = BdGHamiltonian([[eps]], [[0.0]])
    red = reduce_pipeline(N, B, ops)
    assert invariant_value(red).value == parity
    # parity bit from the Pfaffian sign relative to the empty state
    rel = pfaffian(majorana_form(B.full)) * pfaffian(majorana_form(np.diag([1.0, -1.0])))
    assert (rel.real < 0) == bool(parity)


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_class_d_parity_matches_ground_state(n, seed):
    N, ops = standard_operators("D", n)
    B = random_instance(N, ops, np.random.default_rng(seed))
    F = FockSpace(n)
    w, v = np.linalg.eigh(build_quadratic_hamiltonian(F, B.P, B.Delta))
    parity = np.vdot(v[:, 0], F.parity_operator @ v[:, 0]).real
    assert invariant_value(reduce_pipeline(N, B, ops)).value == (0 if parity > 0 else 1)


@pytest.mark.parametrize("cartan", CLASSES)
def test_invariant_stable_under_perturbation(cartan):
    N, ops = standard_operators(cartan)
    rng = np.random.default_rng(5)
    B = random_instance(N, ops, rng)
    v0 = invariant_value(reduce_pipeline(N, B, ops))
    for _ in range(20):
        assert invariant_value(reduce_pipeline(N, perturb(N, ops, B, rng, 0.9), ops)) == v0


@pytest.mark.parametrize("cartan", ["A", "AI", "AII", "D", "BDI"])
def test_direct_sum_additivity(cartan):
    N, ops = standard_operators(cartan)
    rng = np.random.default_rng(11)
    r1 = reduce_pipeline(N, random_instance(N, ops, rng), ops)
    r2 = reduce_pipeline(N, random_instance(N, ops, rng), ops)
    big = RelationSet(r1.relations.dim, r1.relations.relations).direct_sum(r2.relations)
    summed = ReducedSystem(r1.label, block_diag(r1.element, r2.element), big, r1.space)
    if cartan == "D":
        # reorder into the (particle, hole) layout of the doubled Nambu space
        p = np.eye(8)[[0, 1, 4, 5, 2, 3, 6, 7]]
        summed = ReducedSystem(r1.label, p @ summed.element @ p.T, big, r1.space)
        ref = None
    elif cartan == "BDI":
        ref = block_diag(bdi_reference(r1), bdi_reference(r2))
    else:
        ref = None
    assert invariant_value(summed, ref) == invariant_value(r1) + invariant_value(r2)
