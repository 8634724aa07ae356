#!/usr/bin/env python3
"""Numeric Lipschitz ratios for the corpus, as a table or CSV."""

import argparse

from lipsat.corpus import BUILDERS
from lipsat.sampler import DegenerateSample, EpsilonLadder, sample_lipschitz_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=64)
    ap.add_argument("--csv", action="store_true", help="one row per scale instead of a summary")
    args = ap.parse_args()
    ladder = EpsilonLadder(samples_per_scale=args.samples, seed=args.seed)
    if args.csv:
        print("example,element,scale,max_ratio")
    for name, build in BUILDERS.items():
        ex = build()
        for elem in ex.elements:
            try:
                r = sample_lipschitz_ratio(ex.query(elem), ladder=ladder)
            except DegenerateSample as e:
                print(f"{name} {elem}: degenerate ({e})")
                continue
            if args.csv:
                for s, m in zip(r.scales, r.maxima):
                    print(f"{name},{elem},{s:g},{m:.6g}")
            else:
                print(f"{name:<20} {elem:<6} {r.verdict_hint:<13} exponent {r.growth_exponent_estimate:6.2f} "
                      f"max {max(r.maxima):.3g} skipped {r.skipped} mismatches {r.fiber_mismatches}")


if __name__ == "__main__":
    main()
