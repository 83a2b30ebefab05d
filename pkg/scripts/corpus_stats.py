"""Corpus size per sign count, codec round-trip timing and matcher hit counts."""
import argparse
import time
from collections import Counter

from psystem.codec import decode, encode
from psystem.corpus import formulas_of_size
from psystem.kernel import AXIOM_II, match_axiom_II
from psystem.syntax import Or, free_variables


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-signs", type=int, default=14)
    args = ap.parse_args()

    print(f"{'size':>4} {'count':>7} {'with |':>7} {'closed':>7} {'II hits':>7} {'rt ms':>8}")
    total = 0
    for n in range(1, args.max_signs + 1):
        fs = formulas_of_size(n)
        if not fs:
            continue
        t0 = time.perf_counter()
        for f in fs:
            assert decode(encode(f), "formula") == f
        rt = (time.perf_counter() - t0) * 1000
        kinds = Counter(isinstance(f, Or) for f in fs)
        closed = sum(1 for f in fs if not free_variables(f))
        hits = sum(1 for f in fs for k in AXIOM_II if match_axiom_II(k, f) is not None)
        total += len(fs)
        print(f"{n:>4} {len(fs):>7} {kinds[True]:>7} {closed:>7} {hits:>7} {rt:>8.1f}")
    print(f"total {total}")


if __name__ == "__main__":
    main()
