"""Compare homotopy-oracle outcomes with invariants on random pairs for every class."""
import argparse
import time

from tenfold.acceptance import oracle_consistency
from tenfold.classify import BY_CARTAN


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--classes", nargs="*", default=list(BY_CARTAN))
    args = ap.parse_args()
    for cartan in args.classes:
        t0 = time.perf_counter()
        st = oracle_consistency(cartan, args.pairs, args.seed)
        print(
            f"{cartan:5s} connected {st['connected']}/{st['equal']} equal-invariant pairs, "
            f"wrongly connected {st['wrongly_connected']}/{st['different']}, "
            f"unsound paths {st['unsound_paths']} ({time.perf_counter() - t0:.1f}s)"
        )


if __name__ == "__main__":
    main()
