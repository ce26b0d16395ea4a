"""Fermionic Fock space over C^n in the occupation-number basis.

Basis state ``m`` (an integer bit mask) is the wedge word
``e_{i1} ^ ... ^ e_{ik}`` with ``i1 < ... < ik`` the set bits of ``m``;
mode ``i`` is bit ``1 << i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, NotAntisymmetricError, NotSelfAdjointError, TooLargeError
from .linalg import TOL, adjoint

MAX_MODES = 12


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass(frozen=True)
class FockSpace:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DimensionMismatchError("number of modes must be non-negative")
        if self.n > MAX_MODES:
            raise TooLargeError(f"Fock space capped at {MAX_MODES} modes")

    @property
    def dim(self) -> int:
        return 1 << self.n

    def vacuum(self):
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    @cached_property
    def mode_creators(self):
        """Real matrices of ``c^dagger_{e_i}`` for each mode ``i``."""
        ops = []
        for i in range(self.n):
            bit = 1 << i
            c = np.zeros((self.dim, self.dim))
            for m in range(self.dim):
                if m & bit:
                    continue
                # e_i moves past the occupied modes below it
                sign = -1.0 if _popcount(m & (bit - 1)) % 2 else 1.0
                c[m | bit, m] = sign
            ops.append(c)
        return ops

    @cached_property
    def number_operator(self):
        return np.diag([float(_popcount(m)) for m in range(self.dim)]).astype(complex)

    @cached_property
    def parity_operator(self):
        return np.diag([(-1.0) ** _popcount(m) for m in range(self.dim)]).astype(complex)

    def _check(self, x):
        x = np.asarray(x, dtype=complex).reshape(-1)
        if x.size != self.n:
            raise DimensionMismatchError(f"vector of length {x.size} in a space of {self.n} modes")
        return x


def creator(F: FockSpace, x) -> np.ndarray:
    """Matrix of ``c^dagger_x``, linear in ``x``."""
    x = F._check(x)
    out = np.zeros((F.dim, F.dim), dtype=complex)
    for xi, c in zip(x, F.mode_creators):
        if xi != 0:
            out += xi * c
    return out


def annihilator(F: FockSpace, x) -> np.ndarray:
    """Matrix of ``c_x``, the adjoint of ``c^dagger_x`` (anti-linear in ``x``)."""
    x = F._check(x)
    out = np.zeros((F.dim, F.dim), dtype=complex)
    for xi, c in zip(x, F.mode_creators):
        if xi != 0:
            out += np.conj(xi) * c.T
    return out


def wedge(F: FockSpace, xs) -> np.ndarray:
    """Fock vector of ``x1 ^ x2 ^ ... ^ xk``."""
    v = F.vacuum()
    for x in reversed(list(xs)):
        v = creator(F, x) @ v
    return v


def wedge_inner_product(xs, ys) -> complex:
    """``<x1^...^xk, y1^...^yl>``: Gram determinant, zero when k != l."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        return 0j
    if not xs:
        return 1 + 0j
    gram = np.array([[np.vdot(x, y) for y in ys] for x in xs], dtype=complex)
    return complex(np.linalg.det(gram))


def build_quadratic_hamiltonian(F: FockSpace, theta, xi) -> np.ndarray:
    """Second-quantized quadratic Hamiltonian.

    ``H = 1/2 sum (c^dag_l Theta_lm c_m + c^dag_l Xi_lm c^dag_m
    + c_l Xi~_lm c_m + c_l Gamma_lm c^dag_m)`` with ``Gamma = -Theta^T`` and
    ``Xi~ = -conj(Xi)``, so that ``H = sum Theta_lm c^dag_l c_m - tr(Theta)/2 + pairing``.

    Parameters
    ----------
    F : FockSpace
    theta : (n, n) self-adjoint matrix
    xi : (n, n) antisymmetric matrix

    Returns
    -------
    (2^n, 2^n) self-adjoint matrix
    """
    theta = np.asarray(theta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    n = F.n
    if theta.shape != (n, n) or xi.shape != (n, n):
        raise DimensionMismatchError(f"coefficient matrices must be {n}x{n}")
    scale = max(1.0, np.abs(theta).max(initial=0.0), np.abs(xi).max(initial=0.0))
    if np.linalg.norm(theta - adjoint(theta)) >= TOL * scale:
        raise NotSelfAdjointError("Theta must be self-adjoint")
    if np.linalg.norm(xi + xi.T) >= TOL * scale:
        raise NotAntisymmetricError("Xi must be antisymmetric")
    gamma = -theta.T
    xi_t = -np.conj(xi)
    cd = [c.astype(complex) for c in F.mode_creators]
    c = [m.T for m in cd]
    h = np.zeros((F.dim, F.dim), dtype=complex)
    for l in range(n):
        for m in range(n):
            if theta[l, m] != 0:
                h += theta[l, m] * (cd[l] @ c[m])
            if gamma[l, m] != 0:
                h += gamma[l, m] * (c[l] @ cd[m])
            if xi[l, m] != 0:
                h += xi[l, m] * (cd[l] @ cd[m])
            if xi_t[l, m] != 0:
                h += xi_t[l, m] * (c[l] @ c[m])
    return 0.5 * h
