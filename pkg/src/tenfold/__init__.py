"""Tenfold-way classification of zero-dimensional free-fermion systems."""
from .classify import (
    TABLE,
    ClassLabel,
    InvariantValue,
    SymmetrySet,
    classify_set,
    derive_label_from_operators,
    invariant_value,
    reduce_pipeline,
    shift_by_quaternions,
    translate_abstract,
)
from .fock import FockSpace, build_quadratic_hamiltonian
from .linalg import AntiLinearOp, pfaffian, spectral_sign
from .nambu import BdGHamiltonian, NambuSpace, extract_bdg, flatten_bdg

__version__ = "0.1.0"
