"""Symmetry operators, their Nambu lifts, relative signs and reductions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    BadSpinAlgebraError,
    DimensionMismatchError,
    NotChargeConservingError,
    NotInnerRelatedError,
    NotQuaternionicError,
    NotScalarError,
    NotUnitaryError,
    OddDimensionError,
    StructuralFailureError,
)
from .linalg import (
    PAULI,
    TOL,
    AntiLinearOp,
    adjoint,
    block_diag,
    canonical_phases,
    compose,
    conjugate_by,
    eigenspace,
    is_unitary,
    scalar_value,
)
from .nambu import BdGHamiltonian, NambuSpace

KINDS = ("TRS", "SRS", "Q", "PHS")

# t = i sigma_y o conj, the quaternionic structure on C^2
QUATERNIONIC_T = AntiLinearOp(np.array([[0, 1], [-1, 0]], dtype=complex))
# the reduced algebra carries its spin factor in the outer (block) index
SPIN_EIGENVALUE = -1j


@dataclass(frozen=True, eq=False)
class SymmetryOperator:
    """A symmetry on V together with its lift to the Nambu space W.

    ``relation_sign`` is +1 for operators commuting with the BdG Hamiltonian.
    """

    kind: str
    op: object
    lifted: object
    relation_sign: int = 1
    mu: Optional[int] = None

    @property
    def antilinear(self):
        return isinstance(self.lifted, AntiLinearOp)

    @property
    def name(self):
        return f"SRS{self.mu}" if self.kind == "SRS" else self.kind

    def __repr__(self):
        return f"SymmetryOperator({self.name})"


@dataclass(frozen=True)
class SignPair:
    eta1: int
    eta2: Optional[int] = None

    def __post_init__(self):
        if self.eta1 not in (1, -1) or self.eta2 not in (None, 1, -1):
            raise NotScalarError(f"signs must be +1 or -1, got {self.eta1}, {self.eta2}")


def _as_antilinear(t):
    return t if isinstance(t, AntiLinearOp) else AntiLinearOp(t)


def lift_trs(N: NambuSpace, T) -> AntiLinearOp:
    """Lift ``T~ = diag(T, rho T rho^-1)`` of an odd time-reversal ``T`` on V."""
    T = _as_antilinear(T)
    if T.dim != N.n:
        raise DimensionMismatchError(f"T acts on dimension {T.dim}, V has {N.n}")
    if not is_unitary(T.mat):
        raise NotUnitaryError("time reversal must be anti-unitary")
    if not T.is_quaternionic():
        raise NotQuaternionicError("time reversal must square to -1")
    return N.lift_antilinear(T)


def make_trs(N: NambuSpace, T) -> SymmetryOperator:
    T = _as_antilinear(T)
    return SymmetryOperator("TRS", T, lift_trs(N, T))


def standard_trs(n_cells: int) -> AntiLinearOp:
    """``Id (x) i sigma_y o conj`` on ``C^{n_cells} (x) C^2`` (spin index fastest)."""
    return AntiLinearOp(np.kron(np.eye(n_cells), QUATERNIONIC_T.mat))


def spin_matrices(dim_v: int, basis=None):
    """``j_mu = i (Id (x) sigma_mu)`` in the basis given by the columns of ``basis``."""
    if dim_v % 2:
        raise OddDimensionError(f"spin rotations need even dim V, got {dim_v}")
    js = [np.kron(np.eye(dim_v // 2), 1j * s) for s in PAULI]
    if basis is not None:
        basis = np.asarray(basis, dtype=complex)
        if basis.shape != (dim_v, dim_v) or not is_unitary(basis):
            raise DimensionMismatchError("spin factorization must be a unitary change of basis")
        js = [basis @ j @ adjoint(basis) for j in js]
    return js


def check_spin_algebra(js, tol=TOL):
    """Raise unless ``j_mu`` are skew-adjoint unitaries with ``[j2, j1] = 2 j3`` and cyclic."""
    j1, j2, j3 = js
    for k, j in enumerate(js, 1):
        if np.linalg.norm(j + adjoint(j)) > tol or np.linalg.norm(j @ j + np.eye(j.shape[0])) > tol:
            raise BadSpinAlgebraError(f"j{k} must be skew-adjoint with j{k}^2 = -1")
    for a, b, c, name in ((j2, j1, j3, "[j2,j1]=2j3"), (j3, j2, j1, "[j3,j2]=2j1"), (j1, j3, j2, "[j1,j3]=2j2")):
        if np.linalg.norm(a @ b - b @ a - 2 * c) > tol:
            raise BadSpinAlgebraError(f"spin relation {name} fails")


def make_spin_generators(N: NambuSpace, basis=None):
    js = spin_matrices(N.n, basis)
    check_spin_algebra(js)
    return tuple(SymmetryOperator("SRS", j, N.lift_linear(j), mu=mu) for mu, j in enumerate(js, 1))


def make_charge(N: NambuSpace) -> SymmetryOperator:
    return SymmetryOperator("Q", N.charge, N.charge)


def lift_phs(N: NambuSpace, S) -> AntiLinearOp:
    """``L = [[0, S rho^-1], [rho S, 0]]``, i.e. ``(x, y) -> (S conj y, conj(S x))``."""
    S = np.asarray(S, dtype=complex)
    n = N.n
    if S.shape != (n, n):
        raise DimensionMismatchError(f"S has shape {S.shape}, V has dimension {n}")
    if not is_unitary(S):
        raise NotUnitaryError("particle-hole operator S must be unitary")
    if np.linalg.norm(S @ S - np.eye(n)) > TOL:
        raise StructuralFailureError("particle-hole operator S must square to 1")
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    m[:n, n:] = S
    m[n:, :n] = np.conj(S)
    return AntiLinearOp(m)


def make_phs(N: NambuSpace, S) -> SymmetryOperator:
    return SymmetryOperator("PHS", np.asarray(S, dtype=complex), lift_phs(N, S))


# --- inner generators and relative signs ------------------------------------


def _ad(op, x):
    return conjugate_by(op, x)


def find_inner_generator(r, f, tol=1e-9):
    """Unitary ``u`` with ``Ad_u = Ad_f o Ad_r``.

    ``r`` and ``f`` are linear matrices or ``AntiLinearOp``s (both of the same
    kind so that the composite is linear). Solves ``(f o r)(E) u = u E`` over
    the matrix units ``E_0j, E_j0``, which generate the full matrix algebra.
    """
    if isinstance(r, AntiLinearOp) != isinstance(f, AntiLinearOp):
        raise NotInnerRelatedError("composite of a linear and an anti-linear automorphism is not inner")
    n = (r.dim if isinstance(r, AntiLinearOp) else np.asarray(r).shape[0])
    fn = (f.dim if isinstance(f, AntiLinearOp) else np.asarray(f).shape[0])
    if n != fn:
        raise DimensionMismatchError(f"automorphisms act on dimensions {n} and {fn}")
    ident = np.eye(n)
    gram = np.zeros((n * n, n * n), dtype=complex)
    units = [(0, j) for j in range(n)] + [(j, 0) for j in range(1, n)]
    for i, j in units:
        e = np.zeros((n, n), dtype=complex)
        e[i, j] = 1.0
        phi_e = _ad(f, _ad(r, e))
        # vec (column-major): vec(A u - u E) = (I (x) A - E^T (x) I) vec(u)
        m = np.kron(ident, phi_e) - np.kron(e.T, ident)
        gram += adjoint(m) @ m
    w, v = np.linalg.eigh(gram)
    if w[0] > tol or (n > 1 and w[1] < tol):
        raise NotInnerRelatedError(
            f"intertwiner space has dimension {int(np.sum(w < tol))}, expected 1"
        )
    u = v[:, 0].reshape(n, n, order="F")
    u *= np.sqrt(n) / np.linalg.norm(u)
    if not is_unitary(u, 1e-8):
        raise NotInnerRelatedError("intertwiner is not proportional to a unitary")
    flat = u.reshape(-1)
    k = int(np.argmax(np.abs(flat) - 1e-9 * np.arange(flat.size)))
    u = u * (abs(flat[k]) / flat[k])
    x = np.random.default_rng(0).normal(size=(n, n))
    if np.linalg.norm(u @ x @ adjoint(u) - _ad(f, _ad(r, x))) > 1e-8 * n:
        raise NotInnerRelatedError("generator does not reproduce the composite automorphism")
    return u


def _sign_of(x, what):
    c = scalar_value(x, 1e-8)
    if c is None:
        raise NotScalarError(f"{what} is not a multiple of the identity")
    if abs(c - 1) < 1e-8:
        return 1
    if abs(c + 1) < 1e-8:
        return -1
    raise NotScalarError(f"{what} = {c:.6g} * Id is not +-Id")


def relative_signs(r, f, grading_gen=None) -> SignPair:
    """Relative signs ``(u r(u), u alpha(u)^*)`` with ``Ad_u = f o r``.

    ``r`` and ``f`` are the operators whose inner automorphisms are the two
    real structures; ``grading_gen`` is the self-adjoint unitary generating
    the grading ``alpha``, when there is one.
    """
    u = find_inner_generator(r, f)
    eta1 = _sign_of(u @ _ad(r, u), "u r(u)")
    eta2 = None
    if grading_gen is not None:
        g = np.asarray(grading_gen, dtype=complex)
        eta2 = _sign_of(u @ adjoint(g @ u @ adjoint(g)), "u alpha(u)*")
    return SignPair(eta1, eta2)


# --- spin factorization -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpinFactorization:
    """Splitting ``X = X+ (+) X-`` along the eigenspaces of ``j3`` and the map
    ``phi = diag(1, -j1|X+): X+ (+) X+ -> X+ (+) X-``.

    In the coordinates of ``phi`` an operator is a 2x2 block matrix over
    ``L(X+)``; ``tensor(z, q)`` builds ``z (x) q`` with ``q`` in the block index.
    """

    js: tuple
    basis_plus: np.ndarray
    phi: np.ndarray

    @property
    def half_dim(self):
        return self.basis_plus.shape[1]

    def chi(self, x):
        return adjoint(self.phi) @ np.asarray(x) @ self.phi

    def chi_inverse(self, y):
        return self.phi @ np.asarray(y) @ adjoint(self.phi)

    def chi_antilinear(self, a: AntiLinearOp) -> AntiLinearOp:
        return AntiLinearOp(adjoint(self.phi) @ a.mat @ np.conj(self.phi))

    def tensor(self, z, q):
        return np.kron(np.asarray(q), np.asarray(z))

    def restrict_antilinear(self, a: AntiLinearOp) -> AntiLinearOp:
        """``-j1 A`` restricted to X+ (for ``A`` anti-linear commuting with the j's)."""
        b = self.basis_plus
        m = -adjoint(b) @ self.js[0] @ a.mat @ np.conj(b)
        return AntiLinearOp(m)

    def restrict_linear(self, x):
        b = self.basis_plus
        return adjoint(b) @ np.asarray(x) @ b

    def reduce(self, h, tol=1e-8):
        """``z`` with ``chi(h) = z (x) 1``; raises if ``h`` is not of that form."""
        y = self.chi(h)
        k = self.half_dim
        z = y[:k, :k]
        resid = np.linalg.norm(y - self.tensor(z, np.eye(2)))
        if resid > tol * max(1.0, np.linalg.norm(h)):
            raise StructuralFailureError(f"operator does not commute with the spin generators (residual {resid:.2e})")
        return z


def spin_factorization(js) -> SpinFactorization:
    js = tuple(np.asarray(j, dtype=complex) for j in js)
    check_spin_algebra(js)
    dim = js[0].shape[0]
    b = eigenspace(js[2], SPIN_EIGENVALUE)
    if 2 * b.shape[1] != dim:
        raise BadSpinAlgebraError(f"j3 eigenspace has dimension {b.shape[1]}, expected {dim // 2}")
    phi = np.hstack([b, -js[0] @ b])
    if not is_unitary(phi, 1e-8):
        raise BadSpinAlgebraError("spin factorization map is not unitary")
    return SpinFactorization(js, b, phi)


@dataclass(frozen=True, eq=False)
class QuaternionicFactorization:
    spin: SpinFactorization
    gamma_plus: AntiLinearOp
    gamma_plus_square: int

    def chi(self, x):
        return self.spin.chi(x)

    def reduce(self, h):
        return self.spin.reduce(h)


def quaternionic_factor(N: NambuSpace, j_tilde) -> QuaternionicFactorization:
    """Factor ``(L(W), Ad_gamma)`` as ``(L(W+) (x) M_2, Ad_{gamma+ (x) t})``."""
    mats = [j.lifted if isinstance(j, SymmetryOperator) else j for j in j_tilde]
    spin = spin_factorization(mats)
    gamma = N.gamma
    for k, j in enumerate(mats, 1):
        if np.linalg.norm(conjugate_by(gamma, j) - j) > TOL:
            raise BadSpinAlgebraError(f"lifted j{k} is not real")
    gp = spin.restrict_antilinear(gamma)
    sq = _sign_of(gp.square(), "gamma+ squared")
    return QuaternionicFactorization(spin, gp, sq)


def charge_reduce(B: BdGHamiltonian, tol=TOL):
    """The particle block ``P`` of a charge-conserving BdG Hamiltonian."""
    if np.linalg.norm(B.Delta) > tol * max(1.0, np.linalg.norm(B.full)):
        raise NotChargeConservingError("pairing block is non-zero")
    return B.P.copy()


def embed_charge(P):
    P = np.asarray(P, dtype=complex)
    return block_diag(P, -np.conj(P))


__all__ = [
    "KINDS",
    "QUATERNIONIC_T",
    "SymmetryOperator",
    "SignPair",
    "lift_trs",
    "make_trs",
    "standard_trs",
    "spin_matrices",
    "check_spin_algebra",
    "make_spin_generators",
    "make_charge",
    "lift_phs",
    "make_phs",
    "find_inner_generator",
    "relative_signs",
    "SpinFactorization",
    "spin_factorization",
    "QuaternionicFactorization",
    "quaternionic_factor",
    "charge_reduce",
    "embed_charge",
    "compose",
    "canonical_phases",
]
