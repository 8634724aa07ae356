#!/usr/bin/env python3
"""Compare the Newton-polyhedron oracle with certificate search and arc refutation
on random monomial ideals."""

import argparse
import random
import time

from lipsat.arcs import TruncationInsufficient
from lipsat.closure import (Proved, Refuted, SearchBounds, arc_refute, certificate_search,
                            monomial_arc_family, newton_member)
from lipsat.ideal import Ideal
from lipsat.poly import Polynomial


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20240607)
    ap.add_argument("--max-exponent", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--d-max", type=int, default=8)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bounds = SearchBounds(args.n_max, args.d_max)
    families = {n: monomial_arc_family(n) for n in (1, 2, 3)}
    tally = {"agree": 0, "contradiction": 0, "unknown": 0}
    t0 = time.perf_counter()
    for _ in range(args.count):
        n = rng.randint(1, 3)
        gens = ("x", "y", "z")[:n]
        exps = {tuple(rng.randint(0, args.max_exponent) for _ in range(n)) for _ in range(rng.randint(1, 3))}
        exps = sorted(e for e in exps if any(e)) or [(1,) * n]
        z = Polynomial.monomial(gens, tuple(rng.randint(0, args.max_exponent) for _ in range(n)))
        ideal = Ideal([Polynomial.monomial(gens, e) for e in exps], gens)
        oracle = newton_member(z, ideal)
        proved = isinstance(certificate_search(z, ideal, None, bounds), Proved)
        try:
            refuted = isinstance(arc_refute(z, ideal, None, families[n]), Refuted)
        except TruncationInsufficient:
            refuted = False
        if (proved and not oracle) or (refuted and oracle):
            key = "contradiction"
        elif proved or refuted:
            key = "agree"
        else:
            key = "unknown"
        tally[key] += 1
        if args.verbose:
            print(f"{exps} {z}: newton={oracle} proved={proved} refuted={refuted} -> {key}")
    print(f"{args.count} instances in {time.perf_counter() - t0:.1f}s: {tally}")


if __name__ == "__main__":
    main()
