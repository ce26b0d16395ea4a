"""Cross-check the class D Pfaffian invariant against many-body ground-state parity."""
import argparse

import numpy as np

from tenfold.classify import invariant_value, reduce_pipeline
from tenfold.fock import FockSpace, build_quadratic_hamiltonian
from tenfold.instances import random_instance, standard_operators


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=40)
    ap.add_argument("--max-modes", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for n in range(1, args.max_modes + 1):
        N, ops = standard_operators("D", n)
        F = FockSpace(n)
        mismatches = 0
        for _ in range(args.instances):
            B = random_instance(N, ops, rng)
            _, v = np.linalg.eigh(build_quadratic_hamiltonian(F, B.P, B.Delta))
            odd = np.vdot(v[:, 0], F.parity_operator @ v[:, 0]).real < 0
            mismatches += invariant_value(reduce_pipeline(N, B, ops)).value != int(odd)
        print(f"n={n}: {mismatches}/{args.instances} mismatches")


if __name__ == "__main__":
    main()
