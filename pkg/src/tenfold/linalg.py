"""Dense complex linear algebra: anti-linear operators, Pfaffians, flattening.

Anti-linear operators are stored in the standard basis as a matrix ``M``
acting by ``v -> M @ conj(v)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    GaplessError,
    NotAntisymmetricError,
    NotSelfAdjointError,
    OddDimensionError,
)

TOL = 1e-10
DET_TOL = 1e-8

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True, eq=False)
class AntiLinearOp:
    """Anti-linear map ``v -> mat @ conj(v)``."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"anti-linear operator needs a square matrix, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self):
        return self.mat.shape[0]

    def __call__(self, v):
        return self.mat @ np.conj(v)

    def inverse(self):
        # M conj(M') = I  =>  M' = conj(M^-1)
        return AntiLinearOp(np.conj(np.linalg.inv(self.mat)))

    def square(self):
        return compose_antilinear(self, self)

    def is_real_structure(self, tol=TOL):
        return np.linalg.norm(self.square() - np.eye(self.dim)) < tol

    def is_quaternionic(self, tol=TOL):
        return np.linalg.norm(self.square() + np.eye(self.dim)) < tol

    def is_antiunitary(self, tol=TOL):
        return is_unitary(self.mat, tol)

    def __repr__(self):
        return f"AntiLinearOp(dim={self.dim})"


def compose_antilinear(a: AntiLinearOp, b: AntiLinearOp) -> np.ndarray:
    """Matrix of the linear map ``a o b``."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot compose dimensions {a.dim} and {b.dim}")
    return a.mat @ np.conj(b.mat)


def compose(*ops):
    """Compose linear matrices and anti-linear ops from left to right.

    Returns an ndarray when the composite is linear and an ``AntiLinearOp``
    otherwise.
    """
    mat = None
    anti = False
    for op in ops:
        if isinstance(op, AntiLinearOp):
            m, a = op.mat, True
        else:
            m, a = np.asarray(op, dtype=complex), False
        if mat is None:
            mat, anti = m, a
            continue
        if mat.shape[1] != m.shape[0]:
            raise DimensionMismatchError(f"cannot compose shapes {mat.shape} and {m.shape}")
        mat = mat @ (np.conj(m) if anti else m)
        anti = anti ^ a
    return AntiLinearOp(mat) if anti else mat


def conjugate_by(op, x):
    """Inner automorphism ``Ad_op(x) = op x op^-1`` for linear or anti-linear ``op``."""
    if isinstance(op, AntiLinearOp):
        return op.mat @ np.conj(x) @ np.linalg.inv(op.mat)
    op = np.asarray(op)
    return op @ x @ np.linalg.inv(op)


def adjoint(x):
    return np.conj(np.asarray(x)).T


def is_self_adjoint(x, tol=TOL):
    x = np.asarray(x)
    return x.shape[0] == x.shape[1] and np.linalg.norm(x - adjoint(x)) < tol


def is_unitary(x, tol=TOL):
    x = np.asarray(x)
    return x.shape[0] == x.shape[1] and np.linalg.norm(x @ adjoint(x) - np.eye(x.shape[0])) < tol


def is_antisymmetric(x, tol=TOL):
    x = np.asarray(x)
    return x.shape[0] == x.shape[1] and np.linalg.norm(x + x.T) < tol


def scalar_value(x, tol=TOL):
    """Return ``c`` if ``x == c * I`` within tolerance, else ``None``."""
    x = np.asarray(x)
    c = np.trace(x) / x.shape[0]
    if np.linalg.norm(x - c * np.eye(x.shape[0])) < tol * max(1.0, abs(c)):
        return c
    return None


def block_diag(*blocks):
    blocks = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def pfaffian(a) -> complex:
    """Pfaffian of an antisymmetric matrix by Parlett-Reid tridiagonalization.

    Gaussian elimination with pivoting on the sub-diagonal column, applied as
    congruences so the running matrix stays antisymmetric.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"Pfaffian needs a square matrix, got {a.shape}")
    n = a.shape[0]
    if n % 2:
        raise OddDimensionError(f"Pfaffian of odd dimension {n} vanishes identically")
    scale = max(1.0, np.abs(a).max(initial=0.0))
    if np.linalg.norm(a + a.T) >= TOL * scale:
        raise NotAntisymmetricError("matrix is not antisymmetric")
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0:
            return 0j
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def spectral_sign(h, tol=TOL) -> np.ndarray:
    """Spectral flattening ``h |h|^-1`` of a gapped self-adjoint matrix."""
    h = np.asarray(h, dtype=complex)
    if not is_self_adjoint(h, tol * max(1.0, np.linalg.norm(h))):
        raise NotSelfAdjointError("spectral flattening needs a self-adjoint matrix")
    h = 0.5 * (h + adjoint(h))
    w, v = np.linalg.eigh(h)
    if np.min(np.abs(w)) <= tol:
        raise GaplessError(f"eigenvalue {w[np.argmin(np.abs(w))]:.3e} within {tol} of zero")
    return (v * np.sign(w)) @ adjoint(v)


def gap(h) -> float:
    """Smallest absolute eigenvalue of a self-adjoint matrix."""
    h = np.asarray(h, dtype=complex)
    return float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (h + adjoint(h))))))


def null_space(a, tol=TOL):
    """Orthonormal basis (columns) of the kernel of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    _, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol * scale))
    return np.conj(vh[rank:]).T


def eigenspace(x, value, tol=1e-8):
    """Orthonormal basis of ``ker(x - value)`` for a normal matrix ``x``."""
    x = np.asarray(x, dtype=complex)
    basis = null_space(x - value * np.eye(x.shape[0]), tol)
    return canonical_phases(basis)


def canonical_phases(basis):
    """Fix each column's phase so its largest-modulus entry is positive real."""
    basis = np.array(basis, dtype=complex)
    for j in range(basis.shape[1]):
        col = basis[:, j]
        k = int(np.argmax(np.abs(col) - 1e-9 * np.arange(col.size)))
        basis[:, j] = col * (abs(col[k]) / col[k])
    return basis


def real_basis(op: AntiLinearOp, tol=TOL):
    """Unitary ``U`` whose columns are fixed by the real structure ``op``.

    In these coordinates ``op`` becomes plain complex conjugation.
    """
    m = op.mat
    n = op.dim
    if not op.is_real_structure(tol * 10) or not is_unitary(m, tol * 10):
        raise NotSelfAdjointError("real basis needs a unitary real structure")
    # a unitary M with M conj(M) = 1 is symmetric; Re M and Im M commute
    re, im = m.real, m.imag
    mix = re + np.pi / 7 * im
    _, o = np.linalg.eigh(0.5 * (mix + mix.T))
    phases = np.angle(np.diag(o.T @ m @ o))
    u = o * np.exp(0.5j * phases)
    if np.linalg.norm(u @ u.T - m) > 1e-8 * max(1, n):
        # degenerate mixing; fall back to a randomized split
        rng = np.random.default_rng(0)
        mix = re + rng.normal() * im
        _, o = np.linalg.eigh(0.5 * (mix + mix.T))
        phases = np.angle(np.diag(o.T @ m @ o))
        u = o * np.exp(0.5j * phases)
    return u
