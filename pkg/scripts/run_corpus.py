#!/usr/bin/env python3
"""Chain report for every element of the worked-example corpus."""

import argparse
import time

from lipsat.corpus import BUILDERS
from lipsat.saturation import chain_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("examples", nargs="*", help=f"restrict to some of: {', '.join(BUILDERS)}")
    args = ap.parse_args()
    unknown = set(args.examples) - set(BUILDERS)
    if unknown:
        ap.error(f"unknown example(s): {', '.join(sorted(unknown))}")
    names = args.examples or list(BUILDERS)
    print(f"{'example':<20} {'element':<8} {'in A':<6} {'lipschitz':<10} {'saturation':<11} {'integral':<9} seconds")
    for name in names:
        ex = BUILDERS[name]()
        for elem in ex.elements:
            t0 = time.perf_counter()
            r = chain_report(ex.query(elem))
            dt = time.perf_counter() - t0
            print(f"{name:<20} {elem:<8} {str(r.in_A):<6} {r.in_lipschitz.status:<10} "
                  f"{str(r.in_saturation):<11} {r.integral_over_A.status:<9} {dt:.2f}")


if __name__ == "__main__":
    main()
