"""Regenerate the bundled example inputs in src/tenfold/data."""
import argparse
from pathlib import Path

import numpy as np

from tenfold.cli import InputDocument, SymmetryEntry
from tenfold.instances import random_instance, standard_operators

OUT = Path(__file__).resolve().parents[1] / "src" / "tenfold" / "data"

# name -> (class, size, seed)
FIXTURES = {
    "class_D_minimal": ("D", 1, 4),
    "class_D_pair": ("D", 2, 3),
    "class_DIII_kramers": ("DIII", 1, 0),
    "class_AII_kramers": ("AII", 1, 0),
    "class_AI_kramers": ("AI", 2, 2),
    "class_BDI_chain": ("BDI", 2, 2),
    "class_A_three_modes": ("A", 3, 0),
}


def document(cartan, size, seed):
    N, ops = standard_operators(cartan, size)
    B = random_instance(N, ops, np.random.default_rng(seed))
    syms, seen_srs = [], False
    for op in ops:
        if op.kind == "SRS":
            if not seen_srs:
                syms.append(SymmetryEntry("SRS"))
                seen_srs = True
        elif op.kind == "TRS":
            syms.append(SymmetryEntry("TRS", op.op.mat, antilinear=True))
        elif op.kind == "PHS":
            syms.append(SymmetryEntry("PHS", op.op))
        else:
            syms.append(SymmetryEntry("Q"))
    # round to keep the files readable; the instances stay exactly symmetric
    return InputDocument(N.n, P=np.round(B.P, 12), Delta=np.round(B.Delta, 12), symmetries=syms, seed=seed)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=OUT)
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, params in FIXTURES.items():
        (args.out / f"{name}.json").write_text(document(*params).to_json() + "\n")
        print("wrote", name)


if __name__ == "__main__":
    main()
