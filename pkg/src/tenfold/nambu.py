"""Nambu space W = V + V*, field operators and BdG extraction.

Covectors are stored through the linear identification ``m: V -> V*`` (the
identity on coordinates), so a Nambu vector is a pair ``(x, y)`` of
coordinate vectors and ``eta(x, y) = sum x_i c^dag_i + y_i c_i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    GaplessError,
    NotAntisymmetricError,
    NotFreeFermionError,
    NotImaginaryError,
    NotSelfAdjointError,
)
from .fock import FockSpace, annihilator, creator
from .linalg import TOL, AntiLinearOp, adjoint, block_diag, conjugate_by, spectral_sign

# Pinned by the commutator oracle: build_quadratic_hamiltonian(Theta, Xi)
# extracts to P = PARTICLE_FACTOR * Theta, Delta = PAIRING_FACTOR * Xi.
PARTICLE_FACTOR = 1.0
PAIRING_FACTOR = 1.0


@dataclass(frozen=True)
class NambuSpace:
    n: int

    @property
    def dim(self):
        return 2 * self.n

    @property
    def gamma(self) -> AntiLinearOp:
        """Canonical real structure ``(x, y) -> (conj y, conj x)``."""
        n = self.n
        swap = np.zeros((2 * n, 2 * n), dtype=complex)
        swap[:n, n:] = np.eye(n)
        swap[n:, :n] = np.eye(n)
        return AntiLinearOp(swap)

    @property
    def charge(self):
        """Charge operator ``Q = diag(1, -1)``."""
        return block_diag(np.eye(self.n), -np.eye(self.n))

    def split(self, w):
        w = np.asarray(w, dtype=complex).reshape(-1)
        if w.size != 2 * self.n:
            raise DimensionMismatchError(f"Nambu vector of length {w.size}, expected {2 * self.n}")
        return w[: self.n], w[self.n:]

    def inner(self, w, w2):
        return complex(np.vdot(w, w2))

    def lift_linear(self, x):
        """Natural extension ``diag(X, rho X rho^-1)`` of a linear map on V."""
        x = np.asarray(x, dtype=complex)
        self._check_op(x)
        return block_diag(x, np.conj(x))

    def lift_antilinear(self, t: AntiLinearOp) -> AntiLinearOp:
        """Natural extension ``diag(T, rho T rho^-1)`` of an anti-linear map on V."""
        self._check_op(t.mat)
        return AntiLinearOp(block_diag(t.mat, np.conj(t.mat)))

    def _check_op(self, m):
        if m.shape != (self.n, self.n):
            raise DimensionMismatchError(f"operator of shape {m.shape} on V of dimension {self.n}")


def q_form(N: NambuSpace, w, w2) -> complex:
    """Symmetric bilinear form ``q(x+phi, x'+phi') = phi(x') + phi'(x)``."""
    x, y = N.split(w)
    x2, y2 = N.split(w2)
    return complex(y @ x2 + y2 @ x)


def eta(N: NambuSpace, F: FockSpace, x, phi) -> np.ndarray:
    """Field operator ``c^dag_x + c_{rho^-1 phi}`` (linear in ``(x, phi)``)."""
    if F.n != N.n:
        raise DimensionMismatchError("Fock and Nambu spaces have different mode counts")
    # rho^-1 is conjugation on coordinates, and c is anti-linear
    return creator(F, x) + annihilator(F, np.conj(np.asarray(phi, dtype=complex)))


def eta_vector(N: NambuSpace, F: FockSpace, w) -> np.ndarray:
    x, y = N.split(w)
    return eta(N, F, x, y)


@dataclass(frozen=True, eq=False)
class BdGHamiltonian:
    """BdG matrix ``[[P, Delta], [Delta^dag, -P^T]]`` on W."""

    P: np.ndarray
    Delta: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.P, dtype=complex)
        d = np.asarray(self.Delta, dtype=complex)
        if p.ndim != 2 or p.shape != d.shape or p.shape[0] != p.shape[1]:
            raise DimensionMismatchError(f"P {p.shape} and Delta {d.shape} must be equal square shapes")
        scale = max(1.0, np.abs(p).max(initial=0.0), np.abs(d).max(initial=0.0))
        if np.linalg.norm(p - adjoint(p)) >= TOL * scale:
            raise NotSelfAdjointError("P is not self-adjoint")
        if np.linalg.norm(d + d.T) >= TOL * scale:
            raise NotAntisymmetricError("Delta is not antisymmetric")
        object.__setattr__(self, "P", p)
        object.__setattr__(self, "Delta", d)

    @property
    def n(self):
        return self.P.shape[0]

    @property
    def full(self):
        return np.block([[self.P, self.Delta], [adjoint(self.Delta), -self.P.T]])

    @classmethod
    def from_full(cls, m, tol=TOL):
        """Split a 2n x 2n matrix, checking self-adjointness and imaginarity."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise DimensionMismatchError(f"BdG matrix must be square of even size, got {m.shape}")
        n = m.shape[0] // 2
        scale = max(1.0, np.abs(m).max(initial=0.0))
        if np.linalg.norm(m - adjoint(m)) >= tol * scale:
            raise NotSelfAdjointError("BdG matrix is not self-adjoint")
        gamma = NambuSpace(n).gamma
        if np.linalg.norm(conjugate_by(gamma, m) + m) >= tol * scale:
            raise NotImaginaryError("BdG matrix is not imaginary with respect to gamma")
        m = 0.5 * (m + adjoint(m))
        return cls(m[:n, :n], 0.5 * (m[:n, n:] - m[:n, n:].T))

    def __repr__(self):
        return f"BdGHamiltonian(n={self.n})"


def extract_bdg(N: NambuSpace, F: FockSpace, H, tol=TOL) -> BdGHamiltonian:
    """Matrix of ``w -> eta^-1 [H, eta(w)]`` in the basis ``(e_i, 0), (0, m e_i)``."""
    H = np.asarray(H, dtype=complex)
    if H.shape != (F.dim, F.dim) or F.n != N.n:
        raise DimensionMismatchError("Hamiltonian does not act on the given Fock space")
    scale = max(1.0, np.linalg.norm(H))
    if np.linalg.norm(H - adjoint(H)) >= tol * scale:
        raise NotSelfAdjointError("Hamiltonian is not self-adjoint")
    basis = np.eye(N.dim)
    fields = [eta_vector(N, F, basis[:, k]) for k in range(N.dim)]
    stack = np.array([f.reshape(-1) for f in fields]).T
    # field operators are Hilbert-Schmidt orthogonal with norm^2 = 2^(n-1)
    norms = np.real(np.sum(np.conj(stack) * stack, axis=0))
    m = np.zeros((N.dim, N.dim), dtype=complex)
    for k, f in enumerate(fields):
        comm = (H @ f - f @ H).reshape(-1)
        coeffs = (adjoint(stack) @ comm) / norms
        resid = np.linalg.norm(stack @ coeffs - comm)
        if resid >= tol * scale * np.sqrt(F.dim):
            raise NotFreeFermionError(f"[H, eta(w_{k})] leaves the field operators (residual {resid:.2e})")
        m[:, k] = coeffs
    return BdGHamiltonian.from_full(m, tol=max(tol, 1e-12 * scale) * 10)


def is_gapped(B: BdGHamiltonian, tol=TOL) -> bool:
    return bool(np.min(np.abs(np.linalg.eigvalsh(B.full))) > tol)


def flatten_bdg(B: BdGHamiltonian) -> BdGHamiltonian:
    if not is_gapped(B):
        raise GaplessError("BdG Hamiltonian is not gapped")
    return BdGHamiltonian.from_full(spectral_sign(B.full))
