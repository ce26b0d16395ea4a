"""Van Daele F-sets in matrix algebras and a numerical homotopy oracle.

An F-set is described by relations ``(op, sign)``: ``a`` belongs when it is
a self-adjoint unitary with ``sign * Ad_op(a) = a`` for every relation. A
grading contributes ``(Gamma, -1)``, a real structure ``(R, +1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, GaplessError, GradingMismatchError
from .linalg import TOL, AntiLinearOp, adjoint, block_diag, conjugate_by, gap, spectral_sign

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class Relation:
    """``a -> sign * Ad_op(a)``; members are its fixed points."""

    op: object
    sign: int = 1
    name: str = ""

    @property
    def antilinear(self):
        return isinstance(self.op, AntiLinearOp)

    @property
    def dim(self):
        return self.op.dim if self.antilinear else np.asarray(self.op).shape[0]

    def apply(self, a):
        return self.sign * conjugate_by(self.op, a)

    def residual(self, a):
        return float(np.linalg.norm(self.apply(a) - a))

    def direct_sum(self, other: "Relation") -> "Relation":
        if self.sign != other.sign or self.antilinear != other.antilinear:
            raise GradingMismatchError(f"cannot combine relations {self.name or '?'} and {other.name or '?'}")
        if self.antilinear:
            op = AntiLinearOp(block_diag(self.op.mat, other.op.mat))
        else:
            op = block_diag(self.op, other.op)
        return Relation(op, self.sign, self.name or other.name)

    def amplify(self, m: int) -> "Relation":
        """Entrywise action on ``M_m`` of the algebra."""
        if self.antilinear:
            return Relation(AntiLinearOp(np.kron(np.eye(m), self.op.mat)), self.sign, self.name)
        return Relation(np.kron(np.eye(m), self.op), self.sign, self.name)


@dataclass(frozen=True, eq=False)
class RelationSet:
    dim: int
    relations: tuple = ()

    def __post_init__(self):
        for r in self.relations:
            if r.dim != self.dim:
                raise DimensionMismatchError(f"relation {r.name!r} acts on dimension {r.dim}, not {self.dim}")

    @property
    def relation_set(self):
        return self

    def direct_sum(self, other: "RelationSet") -> "RelationSet":
        if len(self.relations) != len(other.relations):
            raise GradingMismatchError("relation sets of different shapes")
        rels = tuple(a.direct_sum(b) for a, b in zip(self.relations, other.relations))
        return RelationSet(self.dim + other.dim, rels)


@dataclass(frozen=True, eq=False)
class GradedMatrixAlgebra:
    """A sub-algebra of ``M_dim`` with a grading and an optional real structure.

    ``grading=None`` is the trivial grading. ``constraints`` are extra
    relations cutting out the sub-algebra (for instance block diagonality).
    """

    dim: int
    grading: Optional[np.ndarray] = None
    real_structure: Optional[AntiLinearOp] = None
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.grading is not None:
            g = np.asarray(self.grading, dtype=complex)
            if g.shape != (self.dim, self.dim):
                raise DimensionMismatchError("grading operator has the wrong shape")
            if np.linalg.norm(g @ g - np.eye(self.dim)) > TOL or np.linalg.norm(g - adjoint(g)) > TOL:
                raise GradingMismatchError("grading operator must be a self-adjoint unitary involution")
            object.__setattr__(self, "grading", g)
        if self.real_structure is not None:
            r = self.real_structure
            if r.dim != self.dim:
                raise DimensionMismatchError("real structure has the wrong dimension")
            g = self.grading_operator
            if np.linalg.norm(conjugate_by(r, g) - g) > 1e-8 and np.linalg.norm(conjugate_by(r, g) + g) > 1e-8:
                raise GradingMismatchError("real structure does not commute with the grading")

    @property
    def grading_operator(self):
        return np.eye(self.dim, dtype=complex) if self.grading is None else self.grading

    def grade(self, a):
        return conjugate_by(self.grading_operator, a)

    @property
    def relation_set(self) -> RelationSet:
        rels = list(self.constraints)
        rels.append(Relation(self.grading_operator, -1, "grading"))
        if self.real_structure is not None:
            rels.append(Relation(self.real_structure, 1, "real structure"))
        return RelationSet(self.dim, tuple(rels))

    def direct_sum(self, other: "GradedMatrixAlgebra") -> "GradedMatrixAlgebra":
        if (self.real_structure is None) != (other.real_structure is None):
            raise GradingMismatchError("only one summand carries a real structure")
        if len(self.constraints) != len(other.constraints):
            raise GradingMismatchError("summands carry different constraint sets")
        real = None
        if self.real_structure is not None:
            real = AntiLinearOp(block_diag(self.real_structure.mat, other.real_structure.mat))
        cons = tuple(a.direct_sum(b) for a, b in zip(self.constraints, other.constraints))
        return GradedMatrixAlgebra(
            self.dim + other.dim,
            block_diag(self.grading_operator, other.grading_operator),
            real,
            cons,
        )

    def amplify(self, m: int, outer_grading=None) -> "GradedMatrixAlgebra":
        """``M_m`` of the algebra, graded entrywise (optionally twisted by an outer grading)."""
        outer = np.eye(m) if outer_grading is None else np.asarray(outer_grading)
        real = None if self.real_structure is None else AntiLinearOp(np.kron(np.eye(m), self.real_structure.mat))
        return GradedMatrixAlgebra(
            m * self.dim,
            np.kron(outer, self.grading_operator),
            real,
            tuple(c.amplify(m) for c in self.constraints),
        )


@dataclass(frozen=True, eq=False)
class FElement:
    a: np.ndarray
    algebra: object

    def __post_init__(self):
        ok, why = f_membership(self.algebra, self.a)
        if not ok:
            raise GradingMismatchError(f"not an F-set element: {why}")
        object.__setattr__(self, "a", np.asarray(self.a, dtype=complex))


def f_membership(algebra, a, tol=1e-8):
    """Check ``a`` is a self-adjoint unitary fixed by every relation.

    Returns ``(ok, diagnostic)`` where the diagnostic names the first failure.
    """
    rs = algebra.relation_set
    a = np.asarray(a, dtype=complex)
    if a.shape != (rs.dim, rs.dim):
        return False, f"dimension {a.shape} does not match algebra dimension {rs.dim}"
    if np.linalg.norm(a - adjoint(a)) > tol:
        return False, "not self-adjoint"
    if np.linalg.norm(a @ a - np.eye(rs.dim)) > tol:
        return False, "not unitary"
    for r in rs.relations:
        res = r.residual(a)
        if res > tol:
            what = "odd" if r.name == "grading" else f"fixed by {r.name or 'relation'}"
            return False, f"not {what} (residual {res:.2e})"
    return True, "ok"


def direct_sum(x: FElement, y: FElement) -> FElement:
    alg = x.algebra.direct_sum(y.algebra)
    return FElement(block_diag(x.a, y.a), alg)


def project(algebra, a, sweeps=50, tol=1e-13):
    """Project onto the self-adjoint fixed points of all relations (no flattening)."""
    rs = algebra.relation_set
    x = 0.5 * (a + adjoint(a))
    for _ in range(sweeps):
        prev = x
        for r in rs.relations:
            x = 0.5 * (x + r.apply(x))
        x = 0.5 * (x + adjoint(x))
        if np.linalg.norm(x - prev) <= tol * max(1.0, np.linalg.norm(x)):
            break
    return x


def project_and_flatten(algebra, a, gap_tol=1e-6):
    x = project(algebra, a)
    if gap(x) <= gap_tol:
        raise GaplessError("projected element is not invertible")
    return spectral_sign(x, tol=gap_tol)


def random_member(algebra, rng, tries=100):
    rs = algebra.relation_set
    for _ in range(tries):
        h = rng.normal(size=(rs.dim, rs.dim)) + 1j * rng.normal(size=(rs.dim, rs.dim))
        try:
            return project_and_flatten(algebra, h, gap_tol=1e-3)
        except GaplessError:
            continue
    raise GaplessError("could not sample a gapped element of the F-set")


def canonical_reference(algebra: GradedMatrixAlgebra) -> FElement:
    """Reference ``e = diag(f, -f)``, ``f = [[0, 1], [1, 0]]``, in ``M_4`` of the algebra.

    ``M_4 = M_2(M_2(A))`` is graded entrywise by ``g'(a b; c d) = (a(a) -a(b); -a(c) a(d))``,
    which is ``Ad`` of ``1 (x) sigma_z (x) Gamma``.
    """
    big = algebra.amplify(4, outer_grading=np.kron(np.eye(2), SIGMA_Z))
    e = np.kron(np.kron(SIGMA_Z, SIGMA_X), np.eye(algebra.dim))
    return FElement(e, big)


def clifford_one_algebra(k: int, real_structure: Optional[AntiLinearOp] = None) -> GradedMatrixAlgebra:
    """``M_k (x) Cl_1`` with ``Cl_1 = C + C`` as ``diag(a, b)`` and the flip grading."""
    cons = (Relation(np.kron(SIGMA_Z, np.eye(k)), 1, "block diagonal"),)
    real = None
    if real_structure is not None:
        real = AntiLinearOp(np.kron(np.eye(2), real_structure.mat))
    return GradedMatrixAlgebra(2 * k, np.kron(SIGMA_X, np.eye(k)), real, cons)


def clifford_one_embed(h) -> FElement:
    """Class-A element ``h`` as the odd element ``diag(h, -h)``."""
    h = np.asarray(h, dtype=complex)
    return FElement(block_diag(h, -h), clifford_one_algebra(h.shape[0]))


def clifford_one_part(a, k: int):
    """First ``C + C`` component of an element of ``M_m(M_k (x) Cl_1)``."""
    a = np.asarray(a)
    m = a.shape[0] // (2 * k)
    t = a.reshape(m, 2, k, m, 2, k)
    return t[:, 0, :, :, 0, :].reshape(m * k, m * k)


def class_a_index(x, reference, k: int) -> int:
    """Negative-eigenvalue count of ``x`` relative to ``reference`` (same size)."""
    hx = clifford_one_part(x.a if isinstance(x, FElement) else x, k)
    hr = clifford_one_part(reference.a if isinstance(reference, FElement) else reference, k)
    if hx.shape != hr.shape:
        raise DimensionMismatchError("element and reference differ in size")
    neg = lambda h: int(np.sum(np.linalg.eigvalsh(0.5 * (h + adjoint(h))) < 0))
    return neg(hx) - neg(hr)


# --- oracle -------------------------------------------------------------------


@dataclass
class Connected:
    path: list
    stabilized: bool = False
    midpoints: int = 0

    def __bool__(self):
        return True


@dataclass
class NotFound:
    attempts: int
    reason: str = ""

    def __bool__(self):
        return False


@dataclass(frozen=True)
class OracleConfig:
    waypoints: tuple = (16, 32, 64, 128)
    max_step: float = 0.2
    gap_tol: float = 1e-6
    member_tol: float = 1e-8
    budget: int = 20
    depth: int = 2
    stabilize: bool = True


def _direct_path(algebra, a, b, cfg):
    for count in cfg.waypoints:
        path = [a]
        ok = True
        for t in np.linspace(0, 1, count + 1)[1:-1]:
            try:
                p = project_and_flatten(algebra, (1 - t) * a + t * b, cfg.gap_tol)
            except GaplessError:
                ok = False
                break
            if np.linalg.norm(p - path[-1], 2) > cfg.max_step:
                ok = False
                break
            path.append(p)
        if ok and np.linalg.norm(b - path[-1], 2) <= cfg.max_step:
            path.append(b)
            return path
    return None


def _connect(algebra, a, b, cfg, rng, state, depth):
    path = _direct_path(algebra, a, b, cfg)
    if path is not None or depth == 0:
        return path
    while state["left"] > 0:
        state["left"] -= 1
        dim = a.shape[0]
        noise = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        # alternate between noisy bisectors and unrelated random members
        try:
            if state["left"] % 2:
                m = project_and_flatten(algebra, a + b + rng.uniform(0.1, 1.0) * noise, 1e-3)
            else:
                m = project_and_flatten(algebra, noise, 1e-3)
        except GaplessError:
            continue
        first = _connect(algebra, a, m, cfg, rng, state, depth - 1)
        if first is None:
            continue
        second = _connect(algebra, m, b, cfg, rng, state, depth - 1)
        if second is not None:
            state["used"] += 1
            return first + second[1:]
    return None


def check_path(algebra, path, cfg=OracleConfig()):
    """Every waypoint in the F-set and consecutive steps at most ``max_step``."""
    for p in path:
        ok, why = f_membership(algebra, p, cfg.member_tol)
        if not ok:
            return False, why
    for p, q in zip(path, path[1:]):
        if np.linalg.norm(q - p, 2) > cfg.max_step + 1e-12:
            return False, "step too large"
    return True, "ok"


def homotopy_oracle(x, y, algebra=None, budget=None, seed=0, config=OracleConfig(), reference=None):
    """Search for a path from ``x`` to ``y`` inside the F-set.

    Returns ``Connected(path)`` or ``NotFound``. Failure is not a proof of
    disconnection.
    """
    if isinstance(x, FElement):
        algebra = algebra or x.algebra
        x = x.a
    if isinstance(y, FElement):
        y = y.a
    if budget is not None:
        config = OracleConfig(**{**config.__dict__, "budget": budget})
    for a in (x, y):
        ok, why = f_membership(algebra, a, config.member_tol)
        if not ok:
            raise GradingMismatchError(f"endpoint outside the F-set: {why}")
    if np.linalg.norm(x - y) < TOL:
        return Connected([x])
    rng = np.random.default_rng(seed)
    state = {"left": config.budget, "used": 0}
    path = _connect(algebra, x, y, config, rng, state, config.depth)
    if path is not None:
        return Connected(path, midpoints=state["used"])
    if config.stabilize:
        e = reference.a if isinstance(reference, FElement) else reference
        if e is None:
            e = random_member(algebra, rng)
        big = algebra.relation_set.direct_sum(algebra.relation_set)
        state = {"left": config.budget, "used": 0}
        path = _connect(big, block_diag(x, e), block_diag(y, e), config, rng, state, config.depth)
        if path is not None:
            return Connected(path, stabilized=True, midpoints=state["used"])
    return NotFound(config.budget, "no path within budget")
