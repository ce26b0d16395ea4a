"""End-to-end acceptance checks, one function per criterion.

Each check returns a ``CheckResult`` with a pass flag, a one-line detail
and its runtime; ``run_all`` runs them in order.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .classify import (
    BY_CARTAN,
    QUATERNIONIC_PAIRS,
    TABLE,
    classify_set,
    derive_label_from_operators,
    format_flags,
    invariant_value,
    reduce_pipeline,
    shift_by_quaternions,
    translate_abstract,
)
from .clifford import witness_iso_cl1, witness_iso_cl2
from .errors import TenfoldError
from .fock import FockSpace, build_quadratic_hamiltonian
from .homotopy import Relation, RelationSet, check_path, homotopy_oracle, project
from .instances import perturb, random_instance, standard_operators
from .linalg import SIGMA_X, SIGMA_Y, AntiLinearOp, conjugate_by
from .nambu import NambuSpace, eta, extract_bdg, q_form
from .symmetry import make_spin_generators, make_trs, relative_signs, spin_factorization, standard_trs

# (s, class, symmetries, K-group, TRS sign, PHS sign) of the tenfold table
EXPECTED_TABLE = (
    (0, "D", "none", "KO_2", None, 1),
    (1, "DIII", "TRS", "KO_3", -1, 1),
    (2, "AII", "TRS+Q", "KO_4", -1, None),
    (3, "CII", "TRS+Q+PHS", "KO_5", -1, -1),
    (4, "C", "SRS", "KO_6", None, -1),
    (5, "CI", "SRS+TRS", "KO_7", 1, -1),
    (6, "AI", "SRS+TRS+Q", "KO_0", 1, None),
    (7, "BDI", "SRS+TRS+Q+PHS", "KO_1", 1, 1),
    (0, "A", "Q", "KU_0", None, None),
    (1, "AIII", "Q+PHS", "KU_1", None, None),
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def in_time(self):
        return self.seconds < self.limit

    def line(self):
        status = "PASS" if self.passed and self.in_time else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f}s, limit {self.limit:g}s)"


def _timed(number, name, limit):
    def wrap(fn):
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                passed, detail = fn(*args, **kwargs)
            except TenfoldError as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            return CheckResult(number, name, passed, detail, time.perf_counter() - t0, limit)

        run.number = number
        return run

    return wrap


def table_rows():
    return tuple(
        (r.s, r.cartan, format_flags(r.flags), r.k_group, r.abstract_view.trs_sign, r.abstract_view.phs_sign)
        for r in TABLE
    )


@_timed(1, "table reproduction", 1.0)
def check_table():
    rows = table_rows()
    bad = [exp for exp in EXPECTED_TABLE if exp not in rows]
    for r in TABLE:
        d = translate_abstract(r.flags)
        if d.k_group != r.k_group:
            bad.append((r.cartan, "abstract index", d.k_group))
        if classify_set(r.flags) is not r:
            bad.append((r.cartan, "lookup"))
    ok = not bad and len(rows) == len(EXPECTED_TABLE) == 10
    return ok, "10/10 rows exact" if ok else f"mismatched rows: {bad}"


@_timed(2, "CAR relations", 30.0)
def check_car(modes=range(1, 7), pairs=100, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in modes:
        N, F = NambuSpace(n), FockSpace(n)
        eye = np.eye(F.dim)
        for _ in range(pairs):
            w1 = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
            w2 = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
            a = eta(N, F, w1[:n], w1[n:])
            b = eta(N, F, w2[:n], w2[n:])
            worst = max(worst, np.linalg.norm(a @ b + b @ a - q_form(N, w1, w2) * eye))
    return worst < 1e-10, f"max anticommutator residual {worst:.2e} over n={min(modes)}..{max(modes)}"


@_timed(3, "BdG structure", 60.0)
def check_bdg(count=200, max_modes=4, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(count):
        n = 1 + k % max_modes
        N, F = NambuSpace(n), FockSpace(n)
        theta = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        theta = theta + theta.conj().T
        xi = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        xi = xi - xi.T
        B = extract_bdg(N, F, build_quadratic_hamiltonian(F, theta, xi))
        h = B.full
        worst = max(
            worst,
            np.linalg.norm(h - h.conj().T),
            np.linalg.norm(conjugate_by(N.gamma, h) + h),
            np.linalg.norm(B.P - B.P.conj().T),
            np.linalg.norm(B.Delta + B.Delta.T),
        )
    return worst < 1e-10, f"{count} Hamiltonians, max structural residual {worst:.2e}"


@_timed(4, "Clifford witnesses", 60.0)
def check_clifford(max_total=6):
    count = 0
    for r, s, r2, s2 in itertools.product(range(max_total + 1), repeat=4):
        if r + s + r2 + s2 <= max_total:
            witness_iso_cl1(r, s, r2, s2)
            count += 1
    w = witness_iso_cl2()
    return w.ok, f"{count} Cl1 witnesses and the quaternionic Cl2 witness verified"


@_timed(5, "relative signs", 5.0)
def check_signs():
    got = []
    # odd TRS: Ad_T~ against Ad_gamma, dim V = 2
    N2 = NambuSpace(2)
    T = make_trs(N2, standard_trs(1)).lifted
    got.append(("Ad_T~ vs Ad_gamma", relative_signs(T, N2.gamma).eta1, -1))
    # SRS-reduced TRS extension: Ad_{-j1~ T~} against Ad_gamma, dim V = 2 and 4
    for cells in (1, 2):
        N = NambuSpace(2 * cells)
        j1 = make_spin_generators(N)[0].lifted
        T = make_trs(N, standard_trs(cells)).lifted
        r = AntiLinearOp(-j1 @ T.mat)
        got.append((f"Ad_(-j1~T~) vs Ad_gamma (dim V={2 * cells})", relative_signs(r, N.gamma).eta1, 1))
    # p = Ad_{T~ S~} against Ad_gamma, dim V = 4
    N4 = NambuSpace(4)
    _, ops = standard_operators("CII", 2)
    T = next(o for o in ops if o.kind == "TRS").lifted
    s = N4.lift_linear(next(o for o in ops if o.kind == "PHS").op)
    got.append(("Ad_(T~S~) vs Ad_gamma", relative_signs(AntiLinearOp(T.mat @ np.conj(s)), N4.gamma).eta1, -1))
    bad = [g for g in got if g[1] != g[2]]
    detail = ", ".join(f"{name} = {val:+d}" for name, val, _ in got)
    return not bad, detail


@_timed(6, "spin factorization", 10.0)
def check_factorization(samples=50, seed=0):
    rng = np.random.default_rng(seed)
    worst_gen, worst_off = 0.0, 0.0
    for cells in (1, 2):
        N = NambuSpace(2 * cells)
        js = [o.lifted for o in make_spin_generators(N)]
        sf = spin_factorization(js)
        one = np.eye(sf.half_dim)
        worst_gen = max(
            worst_gen,
            np.linalg.norm(sf.chi(js[0]) - sf.tensor(one, 1j * SIGMA_Y)),
            np.linalg.norm(sf.chi(js[1]) - sf.tensor(one, 1j * SIGMA_X)),
        )
        rels = RelationSet(N.dim, tuple(Relation(j, 1) for j in js))
        for _ in range(samples):
            x = rng.normal(size=(N.dim, N.dim)) + 1j * rng.normal(size=(N.dim, N.dim))
            # commutant of the spin generators (not only its self-adjoint part)
            y = project(rels, x) + 1j * project(rels, -1j * x)
            c = sf.chi(y)
            k = sf.half_dim
            off = np.linalg.norm(c[:k, k:]) + np.linalg.norm(c[k:, :k]) + np.linalg.norm(c[:k, :k] - c[k:, k:])
            worst_off = max(worst_off, off)
    ok = worst_gen < 1e-10 and worst_off < 1e-10
    return ok, f"generator images residual {worst_gen:.2e}, commutant off-block residual {worst_off:.2e}"


def oracle_consistency(cartan, pairs=25, seed=0, m=None):
    """Compare oracle outcomes with invariants on random pairs of one class."""
    N, ops = standard_operators(cartan, m)
    rng = np.random.default_rng(seed)
    stats = {"equal": 0, "connected": 0, "different": 0, "wrongly_connected": 0, "unsound_paths": 0}
    for k in range(pairs):
        r1 = reduce_pipeline(N, random_instance(N, ops, rng), ops)
        r2 = reduce_pipeline(N, random_instance(N, ops, rng), ops)
        same = invariant_value(r1) == invariant_value(r2)
        res = homotopy_oracle(r1.element, r2.element, r1.relations, seed=seed * 1000 + k)
        if res and not res.stabilized:
            ok, _ = check_path(r1.relations, res.path)
            ends = invariant_value(r1.with_element(res.path[0])) == invariant_value(r1.with_element(res.path[-1]))
            stats["unsound_paths"] += (not ok) or (not ends)
        if same:
            stats["equal"] += 1
            stats["connected"] += bool(res)
        else:
            stats["different"] += 1
            stats["wrongly_connected"] += bool(res)
    return stats


@_timed(7, "invariant/homotopy consistency", 240.0)
def check_oracle(pairs=25, seed=0):
    parts, ok = [], True
    for cartan in BY_CARTAN:
        st = oracle_consistency(cartan, pairs, seed)
        rate = st["connected"] / st["equal"] if st["equal"] else 1.0
        good = st["wrongly_connected"] == 0 and st["unsound_paths"] == 0 and rate >= 0.9
        if cartan == "A":
            good = good and st["connected"] == st["equal"]
        ok = ok and good
        parts.append(f"{cartan} {st['connected']}/{st['equal']} eq, {st['wrongly_connected']}/{st['different']} diff")
    return ok, "; ".join(parts)


@_timed(8, "quaternionic shift", 1.0)
def check_shift():
    bad = []
    for plain, quat in QUATERNIONIC_PAIRS:
        a, b = BY_CARTAN[plain], BY_CARTAN[quat]
        if b.flags != a.flags | {"SRS"} or (b.index - a.index) % 8 != 4 or shift_by_quaternions(a.index) != b.index:
            bad.append((plain, quat))
    return not bad, "4 pairs differ by 4 mod 8" if not bad else f"failing pairs {bad}"


@_timed(9, "homotopy invariance of invariants", 60.0)
def check_invariance(instances=5, perturbations=20, seed=0):
    rng = np.random.default_rng(seed)
    changed, total = 0, 0
    for cartan in BY_CARTAN:
        N, ops = standard_operators(cartan)
        for _ in range(instances):
            B = random_instance(N, ops, rng)
            derive_label_from_operators(N, B, ops)
            v0 = invariant_value(reduce_pipeline(N, B, ops))
            for _ in range(perturbations):
                B2 = perturb(N, ops, B, rng, size=rng.uniform(0.1, 0.9))
                total += 1
                changed += invariant_value(reduce_pipeline(N, B2, ops)) != v0
    return changed == 0, f"{total} perturbations, {changed} invariant changes"


CHECKS = (
    check_table,
    check_car,
    check_bdg,
    check_clifford,
    check_signs,
    check_factorization,
    check_oracle,
    check_shift,
    check_invariance,
)


def run_all(verbose=True):
    results = []
    for check in CHECKS:
        res = check()
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    return results
