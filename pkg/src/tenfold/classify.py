"""Tenfold-way classification of zero-dimensional free-fermion systems.

Maps symmetry sets to Cartan labels, translates them to graded real
structures with relative signs, recomputes those signs from concrete
operators, reduces Hamiltonians and evaluates local invariants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    InadmissibleSetError,
    KramersViolationError,
    NotFlattenedError,
    SignMismatchError,
    StructuralFailureError,
    SymmetryViolatedError,
)
from .homotopy import Relation, RelationSet
from .linalg import AntiLinearOp, adjoint, compose, conjugate_by, pfaffian, real_basis
from .nambu import BdGHamiltonian, NambuSpace
from .symmetry import (
    KINDS,
    QUATERNIONIC_T,
    SymmetryOperator,
    charge_reduce,
    quaternionic_factor,
    relative_signs,
    spin_factorization,
)

# groups KO_i(R), i = 0..7, and KU_i(C), i = 0, 1
KO_GROUPS = ("Z", "Z2", "Z2", "0", "Z", "0", "0", "0")
KU_GROUPS = ("Z", "0")

CHIRAL_TYPES = ("none", "real-inner", "imag-inner", "inner")


@dataclass(frozen=True)
class AbstractView:
    trs_sign: Optional[int] = None
    phs_sign: Optional[int] = None
    chiral: str = "none"

    @property
    def symmetries(self):
        names = [n for n, s in (("TRS", self.trs_sign), ("PHS", self.phs_sign)) if s is not None]
        if names:
            return "+".join(names)
        return "chiral" if self.chiral != "none" else "none"


@dataclass(frozen=True)
class ClassLabel:
    s: int
    cartan: str
    series: str
    index: int
    abstract_view: AbstractView
    flags: frozenset = field(default_factory=frozenset)

    @property
    def k_group(self):
        return f"{self.series}_{self.index}"

    @property
    def group_kind(self):
        return (KO_GROUPS if self.series == "KO" else KU_GROUPS)[self.index]

    @property
    def real(self):
        return self.series == "KO"

    def __str__(self):
        return f"{self.cartan} / {self.k_group}"


def _row(s, cartan, flags, series, index, trs=None, phs=None, chiral="none"):
    return ClassLabel(s, cartan, series, index, AbstractView(trs, phs, chiral), frozenset(flags))


TABLE = (
    _row(0, "D", (), "KO", 2, phs=1),
    _row(1, "DIII", ("TRS",), "KO", 3, trs=-1, phs=1, chiral="imag-inner"),
    _row(2, "AII", ("TRS", "Q"), "KO", 4, trs=-1),
    _row(3, "CII", ("TRS", "Q", "PHS"), "KO", 5, trs=-1, phs=-1, chiral="real-inner"),
    _row(4, "C", ("SRS",), "KO", 6, phs=-1),
    _row(5, "CI", ("SRS", "TRS"), "KO", 7, trs=1, phs=-1, chiral="imag-inner"),
    _row(6, "AI", ("SRS", "TRS", "Q"), "KO", 0, trs=1),
    _row(7, "BDI", ("SRS", "TRS", "Q", "PHS"), "KO", 1, trs=1, phs=1, chiral="real-inner"),
    _row(0, "A", ("Q",), "KU", 0),
    _row(1, "AIII", ("Q", "PHS"), "KU", 1, chiral="inner"),
)
BY_CARTAN = {row.cartan: row for row in TABLE}
QUATERNIONIC_PAIRS = (("D", "C"), ("DIII", "CI"), ("AII", "AI"), ("CII", "BDI"))


def format_flags(flags) -> str:
    ordered = [k for k in ("SRS", "TRS", "Q", "PHS") if k in flags]
    return "+".join(ordered) if ordered else "none"


@dataclass(frozen=True)
class SymmetrySet:
    flags: frozenset

    def __post_init__(self):
        flags = frozenset(self.flags)
        unknown = flags - set(KINDS)
        if unknown:
            raise InadmissibleSetError(f"unknown symmetry names: {', '.join(sorted(unknown))}")
        if not any(row.flags == flags for row in TABLE):
            raise InadmissibleSetError(f"{format_flags(flags)} is not one of the ten admissible sets")
        object.__setattr__(self, "flags", flags)

    @classmethod
    def parse(cls, text: str) -> "SymmetrySet":
        text = text.strip()
        if text.lower() in ("", "none", "{}"):
            return cls(frozenset())
        return cls(frozenset(t.strip().upper() for t in text.replace("+", ",").split(",") if t.strip()))

    def __str__(self):
        return format_flags(self.flags)


def _as_set(x) -> SymmetrySet:
    return x if isinstance(x, SymmetrySet) else SymmetrySet(frozenset(x))


def classify_set(symmetries) -> ClassLabel:
    flags = _as_set(symmetries).flags
    return next(row for row in TABLE if row.flags == flags)


def shift_by_quaternions(index: int) -> int:
    """Index shift from tensoring with the quaternions."""
    return (index + 4) % 8


# --- abstract side ----------------------------------------------------------


@dataclass(frozen=True)
class AbstractDescriptor:
    reference: str
    real_structures: tuple
    grading: str
    series: str
    index: int

    @property
    def k_group(self):
        return f"{self.series}_{self.index}"


def index_from_signs(view: AbstractView, real: bool = True):
    """K-group index from the signs relative to the reference real structure."""
    if not real:
        return "KU", (1 if view.chiral != "none" else 0)
    trs, phs, chiral = view.trs_sign, view.phs_sign, view.chiral
    if trs is not None and phs is not None:
        if chiral == "real-inner":
            return "KO", 1 if trs == 1 else 5
        if chiral == "imag-inner":
            return "KO", 7 if trs == 1 else 3
        raise StructuralFailureError("TRS with PHS needs a real or imaginary chiral grading")
    if trs is not None:
        return "KO", 0 if trs == 1 else 4
    if phs is not None:
        return "KO", 2 if phs == 1 else 6
    raise StructuralFailureError("real class without a real structure")


def translate_abstract(symmetries) -> AbstractDescriptor:
    flags = _as_set(symmetries).flags
    row = classify_set(flags)
    v = row.abstract_view
    real = row.real
    reals = []
    if v.trs_sign is not None:
        reals.append(("TRS", v.trs_sign))
    if v.phs_sign is not None:
        reals.append(("PHS", v.phs_sign))
    series, index = index_from_signs(v, real)
    return AbstractDescriptor("Ad_gamma" if real else "none", tuple(reals), v.chiral, series, index)


# --- concrete side ----------------------------------------------------------


@dataclass
class ValidationReport:
    """Residual norms per declared relation and the recomputed signs."""

    residuals: dict = field(default_factory=dict)
    signs: dict = field(default_factory=dict)
    chiral: str = "none"


def _group_ops(ops):
    by = {}
    for op in ops:
        if op.kind not in KINDS:
            raise StructuralFailureError(f"unknown symmetry kind {op.kind!r}")
        if op.kind == "SRS":
            by.setdefault("SRS", []).append(op)
        elif op.kind in by:
            raise StructuralFailureError(f"{op.kind} declared twice")
        else:
            by[op.kind] = op
    if "SRS" in by:
        srs = sorted(by["SRS"], key=lambda o: o.mu or 0)
        if [o.mu for o in srs] != [1, 2, 3]:
            raise StructuralFailureError("spin rotations need exactly j1, j2, j3")
        by["SRS"] = srs
    return by


def _check_structure(N: NambuSpace, by, tol=1e-8):
    """Declared lifts commute with each other and with gamma as automorphisms."""
    rng = np.random.default_rng(12345)
    x = rng.normal(size=(N.dim, N.dim)) + 1j * rng.normal(size=(N.dim, N.dim))
    lifts = [("gamma", N.gamma)]
    for k in ("TRS", "Q", "PHS"):
        if k in by:
            lifts.append((k, by[k].lifted))
    for o in by.get("SRS", []):
        lifts.append((o.name, o.lifted))
    for name, op in lifts:
        dim = op.dim if isinstance(op, AntiLinearOp) else np.asarray(op).shape[0]
        if dim != N.dim:
            raise StructuralFailureError(f"{name} acts on dimension {dim}, W has {N.dim}")
    for i, (na, a) in enumerate(lifts):
        for nb, b in lifts[i + 1:]:
            if na.startswith("SRS") and nb.startswith("SRS"):
                continue
            lhs = conjugate_by(a, conjugate_by(b, x))
            rhs = conjugate_by(b, conjugate_by(a, x))
            if np.linalg.norm(lhs - rhs) > tol * np.linalg.norm(x):
                raise StructuralFailureError(f"{na} and {nb} do not commute")


def _residual(op, h, sign=1):
    return float(np.linalg.norm(sign * conjugate_by(op, h) - h))


def _is_real_grading(r, g, tol=1e-8):
    rg = conjugate_by(r, g)
    if np.linalg.norm(rg - g) < tol:
        return "real-inner"
    if np.linalg.norm(rg + g) < tol:
        return "imag-inner"
    raise StructuralFailureError("chiral grading is neither real nor imaginary")


def _antilinear_product(a: AntiLinearOp, x) -> AntiLinearOp:
    """``a o x`` for anti-linear ``a`` and linear ``x``."""
    return AntiLinearOp(a.mat @ np.conj(np.asarray(x)))


def _linear_times(x, a: AntiLinearOp) -> AntiLinearOp:
    return AntiLinearOp(np.asarray(x) @ a.mat)


def _quaternionic_data(N, by):
    qf = quaternionic_factor(N, [o.lifted for o in by["SRS"]])
    f = qf.spin.chi_antilinear(N.gamma)
    expected = np.kron(QUATERNIONIC_T.mat, qf.gamma_plus.mat)
    if np.linalg.norm(f.mat - expected) > 1e-8:
        raise StructuralFailureError("gamma does not factor as gamma+ (x) t")
    p = AntiLinearOp(np.kron(np.eye(2), qf.gamma_plus.mat))
    return qf, p, f


def computed_view(N: NambuSpace, by, cartan: str, report: Optional[ValidationReport] = None):
    """Recompute the abstract signs of a concrete operator set."""
    rep = report if report is not None else ValidationReport()
    gamma = N.gamma
    if cartan == "A":
        return AbstractView(), rep
    if cartan == "AIII":
        rep.chiral = "inner"
        return AbstractView(chiral="inner"), rep
    if cartan == "D":
        rep.signs["PHS"] = relative_signs(gamma, gamma)
        return AbstractView(phs_sign=rep.signs["PHS"].eta1), rep
    if cartan in ("DIII", "AII", "CII"):
        T = by["TRS"].lifted
        if cartan == "DIII":
            g = 1j * compose(gamma, T)
            rep.signs["TRS"] = relative_signs(T, gamma, g)
            rep.signs["PHS"] = relative_signs(gamma, gamma)
            rep.chiral = _is_real_grading(T, g)
            return AbstractView(rep.signs["TRS"].eta1, rep.signs["PHS"].eta1, rep.chiral), rep
        rep.signs["TRS"] = relative_signs(T, gamma)
        if cartan == "AII":
            return AbstractView(trs_sign=rep.signs["TRS"].eta1), rep
        s_lift = N.lift_linear(by["PHS"].op)
        rep.signs["PHS"] = relative_signs(_antilinear_product(T, s_lift), gamma)
        rep.chiral = _is_real_grading(T, s_lift)
        return AbstractView(rep.signs["TRS"].eta1, rep.signs["PHS"].eta1, rep.chiral), rep
    if cartan in ("C", "CI"):
        qf, p, f = _quaternionic_data(N, by)
        rep.signs["PHS"] = relative_signs(p, f)
        if cartan == "C":
            return AbstractView(phs_sign=rep.signs["PHS"].eta1), rep
        g = 1j * compose(gamma, by["TRS"].lifted)
        xi = qf.spin.reduce(g)
        r = AntiLinearOp(np.kron(np.eye(2), qf.gamma_plus.mat @ np.conj(xi)))
        grading = np.kron(np.eye(2), xi)
        rep.signs["TRS"] = relative_signs(r, f, grading)
        rep.chiral = _is_real_grading(r, grading)
        return AbstractView(rep.signs["TRS"].eta1, rep.signs["PHS"].eta1, rep.chiral), rep
    if cartan in ("AI", "BDI"):
        j1 = by["SRS"][0].lifted
        r = _linear_times(-j1, by["TRS"].lifted)
        rep.signs["TRS"] = relative_signs(r, gamma)
        if cartan == "AI":
            return AbstractView(trs_sign=rep.signs["TRS"].eta1), rep
        s_lift = N.lift_linear(by["PHS"].op)
        rep.signs["PHS"] = relative_signs(_antilinear_product(r, s_lift), gamma)
        rep.chiral = _is_real_grading(r, s_lift)
        return AbstractView(rep.signs["TRS"].eta1, rep.signs["PHS"].eta1, rep.chiral), rep
    raise StructuralFailureError(f"unknown class {cartan}")


def hamiltonian_relations(N: NambuSpace, ops) -> RelationSet:
    """Relations on W satisfied by a BdG Hamiltonian with the given symmetries."""
    rels = [Relation(N.gamma, -1, "gamma")]
    for op in ops:
        rels.append(Relation(op.lifted, op.relation_sign, op.name))
    return RelationSet(N.dim, tuple(rels))


def derive_label_from_operators(N: NambuSpace, B, ops, tol=1e-8):
    """Validate ``B`` against ``ops`` and recompute its label from the operators.

    ``B`` is a ``BdGHamiltonian`` or a raw self-adjoint matrix on W (which is
    then also checked against ``-Ad_gamma``). Returns ``(ClassLabel, ValidationReport)``.
    """
    by = _group_ops(ops)
    label = classify_set(frozenset(by))
    h = B.full if isinstance(B, BdGHamiltonian) else np.asarray(B, dtype=complex)
    if h.shape != (N.dim, N.dim):
        raise StructuralFailureError(f"Hamiltonian of shape {h.shape} on a Nambu space of dimension {N.dim}")
    _check_structure(N, by)
    P = h[: N.n, : N.n]
    scale = max(1.0, np.linalg.norm(h))
    report = ValidationReport()
    for rel in hamiltonian_relations(N, ops).relations:
        res = rel.residual(h)
        report.residuals[rel.name] = res
        if res > tol * scale:
            raise SymmetryViolatedError(f"{rel.name} violated (residual {res:.3e})")
    if "PHS" in by and "Q" in by:
        # chiral: S anticommutes with the particle block
        s = by["PHS"].op
        res = float(np.linalg.norm(s @ P @ adjoint(s) + P))
        report.residuals["chiral"] = res
        if res > tol * scale:
            raise SymmetryViolatedError(f"chiral symmetry violated (residual {res:.3e})")
    view, report = computed_view(N, by, label.cartan, report)
    if view != label.abstract_view:
        raise SignMismatchError(f"computed signs {view} differ from the table entry {label.abstract_view}")
    series, index = index_from_signs(view, label.real)
    if (series, index) != (label.series, label.index):
        raise SignMismatchError(f"computed K-group {series}_{index} differs from {label.k_group}")
    return label, report


# --- reduction and invariants -----------------------------------------------


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """Reduced self-adjoint element with the relations it still satisfies."""

    label: ClassLabel
    element: np.ndarray
    relations: RelationSet
    space: str
    factorization: object = None

    def with_element(self, element) -> "ReducedSystem":
        return ReducedSystem(self.label, np.asarray(element, dtype=complex), self.relations, self.space, self.factorization)


def reduce_pipeline(N: NambuSpace, B: BdGHamiltonian, ops) -> ReducedSystem:
    by = _group_ops(ops)
    label = classify_set(frozenset(by))
    h = B.full
    rels = []
    if "Q" in by:
        h = charge_reduce(B, tol=1e-8)
        space = "V"
        trs = by["TRS"].op if "TRS" in by else None
        chiral = by["PHS"].op if "PHS" in by else None
        if "SRS" in by:
            spin = spin_factorization([o.op for o in by["SRS"]])
            h = spin.reduce(h)
            space = "V+"
            trs = spin.restrict_antilinear(trs) if trs is not None else None
            chiral = spin.restrict_linear(chiral) if chiral is not None else None
        else:
            spin = None
        if trs is not None:
            rels.append(Relation(trs, 1, "TRS"))
        if chiral is not None:
            rels.append(Relation(chiral, -1, "chiral"))
        return ReducedSystem(label, h, RelationSet(h.shape[0], tuple(rels)), space, spin)
    if "SRS" in by:
        qf = quaternionic_factor(N, [o.lifted for o in by["SRS"]])
        z = qf.reduce(h)
        rels.append(Relation(qf.gamma_plus, -1, "gamma+"))
        if "TRS" in by:
            rels.append(Relation(qf.spin.restrict_antilinear(by["TRS"].lifted), 1, "TRS"))
        return ReducedSystem(label, z, RelationSet(z.shape[0], tuple(rels)), "W+", qf)
    rels.append(Relation(N.gamma, -1, "gamma"))
    if "TRS" in by:
        rels.append(Relation(by["TRS"].lifted, 1, "TRS"))
    return ReducedSystem(label, h, RelationSet(h.shape[0], tuple(rels)), "W")


@dataclass(frozen=True)
class InvariantValue:
    group_kind: str
    value: int

    def __post_init__(self):
        if self.group_kind not in ("Z", "Z2", "0"):
            raise ValueError(f"unknown group kind {self.group_kind!r}")
        if self.group_kind == "Z2" and self.value not in (0, 1):
            raise ValueError("Z2 value must be 0 or 1")
        if self.group_kind == "0" and self.value != 0:
            raise ValueError("trivial group has only the value 0")

    def __add__(self, other: "InvariantValue") -> "InvariantValue":
        if self.group_kind != other.group_kind:
            raise ValueError("cannot add invariants of different groups")
        v = self.value + other.value
        return InvariantValue(self.group_kind, v % 2 if self.group_kind == "Z2" else v)

    def __str__(self):
        return f"{self.value} in {self.group_kind}"


# Majorana coordinates: w -> ((x + conj y)/sqrt2, (x - conj y)/(i sqrt2)) on real vectors
def majorana_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    return np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2)


def majorana_form(h) -> np.ndarray:
    """Real antisymmetric ``Omega (i h) Omega^dag`` of an imaginary BdG matrix."""
    h = np.asarray(h, dtype=complex)
    om = majorana_matrix(h.shape[0] // 2)
    a = om @ (1j * h) @ adjoint(om)
    if np.linalg.norm(a.imag) > 1e-8 * max(1.0, np.linalg.norm(a)):
        raise StructuralFailureError("Majorana form is not real")
    return a.real


def pfaffian_sign(h) -> int:
    pf = pfaffian(majorana_form(h))
    return 1 if pf.real > 0 else -1


def _neg_count(h):
    return int(np.sum(np.linalg.eigvalsh(0.5 * (h + adjoint(h))) < 0))


def _check_flat(h, tol=1e-8):
    h = np.asarray(h)
    if np.linalg.norm(h @ h - np.eye(h.shape[0])) > tol or np.linalg.norm(h - adjoint(h)) > tol:
        raise NotFlattenedError("element must be a self-adjoint unitary (flatten first)")


def _relation(red: ReducedSystem, name):
    return next(r for r in red.relations.relations if r.name == name)


def _bdi_blocks(red: ReducedSystem):
    """Real orthogonal chiral block of a BDI element in a canonical real basis."""
    t = _relation(red, "TRS").op
    s = _relation(red, "chiral").op
    u = real_basis(t)
    s_real = adjoint(u) @ s @ u
    if np.linalg.norm(s_real.imag) > 1e-8:
        raise StructuralFailureError("chiral operator is not real in the real basis")
    w, o = np.linalg.eigh(s_real.real)
    if np.any(np.abs(np.abs(w) - 1) > 1e-8) or np.sum(w > 0) != np.sum(w < 0):
        raise StructuralFailureError("chiral operator is not a balanced involution")
    k = len(w) // 2
    basis = u @ o
    z = adjoint(basis) @ red.element @ basis
    if np.linalg.norm(z.imag) > 1e-8 or np.linalg.norm(z[:k, :k]) > 1e-8:
        raise StructuralFailureError("element is not real and chiral in the canonical basis")
    return z.real[:k, k:]


def bdi_reference(red: ReducedSystem) -> np.ndarray:
    """Reference element with chiral block ``Q = 1`` in the canonical basis."""
    t = _relation(red, "TRS").op
    s = _relation(red, "chiral").op
    u = real_basis(t)
    w, o = np.linalg.eigh((adjoint(u) @ s @ u).real)
    k = len(w) // 2
    basis = u @ o
    ref = np.block([[np.zeros((k, k)), np.eye(k)], [np.eye(k), np.zeros((k, k))]])
    return basis @ ref @ adjoint(basis)


def vacuum_reference(n: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(n), -np.ones(n)]).astype(complex)


def invariant_value(red: ReducedSystem, reference=None) -> InvariantValue:
    """Zero-dimensional invariant of a reduced flattened element.

    Z2 values are relative to ``reference`` (an element of the same system);
    the default reference is the vacuum for class D and the ``Q = 1`` element
    of the canonical basis for class BDI.
    """
    h = np.asarray(red.element, dtype=complex)
    _check_flat(h)
    cartan = red.label.cartan
    kind = red.label.group_kind
    ref = reference.element if isinstance(reference, ReducedSystem) else reference
    if cartan == "A":
        return InvariantValue("Z", _neg_count(h))
    if cartan == "AII":
        neg = _neg_count(h)
        if neg % 2:
            raise KramersViolationError(f"odd number ({neg}) of negative eigenvalues")
        return InvariantValue("Z", (neg - (h.shape[0] - neg)) // 2)
    if cartan == "AI":
        u = real_basis(_relation(red, "TRS").op)
        z = adjoint(u) @ h @ u
        if np.linalg.norm(z.imag) > 1e-8:
            raise StructuralFailureError("element is not real in the real basis")
        neg = _neg_count(z.real)
        return InvariantValue("Z", neg - (h.shape[0] - neg))
    if cartan == "D":
        ref = vacuum_reference(h.shape[0] // 2) if ref is None else ref
        _check_flat(ref)
        return InvariantValue("Z2", 0 if pfaffian_sign(h) == pfaffian_sign(ref) else 1)
    if cartan == "BDI":
        ref = bdi_reference(red) if ref is None else ref
        _check_flat(ref)
        d = np.linalg.det(_bdi_blocks(red))
        d_ref = np.linalg.det(_bdi_blocks(red.with_element(ref)))
        return InvariantValue("Z2", 0 if np.sign(d) == np.sign(d_ref) else 1)
    return InvariantValue(kind, 0)


def label_of(N: NambuSpace, B: BdGHamiltonian, ops) -> ClassLabel:
    return derive_label_from_operators(N, B, ops)[0]
