"""Standard symmetry operators per class and random symmetric instances."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import BY_CARTAN, hamiltonian_relations
from .errors import GaplessError, OddDimensionError
from .homotopy import project
from .linalg import gap, spectral_sign
from .nambu import BdGHamiltonian, NambuSpace
from .symmetry import make_charge, make_phs, make_spin_generators, make_trs, standard_trs

# smallest sizes with a nontrivial reduced algebra, used by the acceptance run
DEFAULT_SIZES = {"D": 2, "DIII": 1, "AII": 2, "CII": 2, "C": 1, "CI": 1, "AI": 2, "BDI": 2, "A": 3, "AIII": 2}


@dataclass(frozen=True)
class InstanceConfig:
    min_gap: float = 1e-3
    max_tries: int = 200


def balanced_involution(k: int) -> np.ndarray:
    if k % 2:
        raise OddDimensionError(f"balanced involution needs even size, got {k}")
    return np.diag(np.r_[np.ones(k // 2), -np.ones(k // 2)]).astype(complex)


def standard_operators(cartan: str, m: int = None):
    """Nambu space and operators for a class.

    ``m`` counts spin-1/2 cells when the class has TRS or SRS (dim V = 2m)
    and single modes otherwise.
    """
    row = BY_CARTAN[cartan]
    m = DEFAULT_SIZES[cartan] if m is None else m
    flags = row.flags
    spinful = "TRS" in flags or "SRS" in flags
    n = 2 * m if spinful else m
    N = NambuSpace(n)
    ops = []
    if "SRS" in flags:
        ops.extend(make_spin_generators(N))
    if "TRS" in flags:
        ops.append(make_trs(N, standard_trs(m)))
    if "Q" in flags:
        ops.append(make_charge(N))
    if "PHS" in flags:
        # commutes with spin and with the standard time reversal
        s = np.kron(balanced_involution(m), np.eye(2)) if spinful else balanced_involution(m)
        ops.append(make_phs(N, s))
    return N, tuple(ops)


def random_instance(N: NambuSpace, ops, rng, config=InstanceConfig()) -> BdGHamiltonian:
    """Random flattened BdG Hamiltonian with the given symmetries.

    A Gaussian Hermitian matrix is projected onto the fixed points of every
    relation; gapless draws are rejected.
    """
    rels = hamiltonian_relations(N, ops)
    for _ in range(config.max_tries):
        x = rng.normal(size=(N.dim, N.dim)) + 1j * rng.normal(size=(N.dim, N.dim))
        h = project(rels, x)
        if gap(h) > config.min_gap:
            return BdGHamiltonian.from_full(spectral_sign(h), tol=1e-8)
    raise GaplessError("no gapped instance found")


def symmetric_perturbation(N: NambuSpace, ops, rng, size=0.5) -> np.ndarray:
    """Random symmetric self-adjoint matrix of spectral norm ``size``."""
    rels = hamiltonian_relations(N, ops)
    x = rng.normal(size=(N.dim, N.dim)) + 1j * rng.normal(size=(N.dim, N.dim))
    h = project(rels, x)
    return size * h / np.linalg.norm(h, 2)


def perturb(N: NambuSpace, ops, B: BdGHamiltonian, rng, size=0.5) -> BdGHamiltonian:
    """Perturb within the commutant and re-flatten (gap stays open for size < 1)."""
    h = B.full + symmetric_perturbation(N, ops, rng, size)
    return BdGHamiltonian.from_full(spectral_sign(h), tol=1e-8)
