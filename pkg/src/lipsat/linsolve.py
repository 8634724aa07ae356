"""Sparse exact linear systems, eliminated over the integers.

Columns are given as sparse maps row-key -> rational.  Each equation is
scaled to integers and eliminated fraction-free (cross-multiplication
followed by content removal); only back substitution divides.  The pivot of
every new row is its smallest surviving column index, and free variables are
set to zero, so the returned solution is deterministic and prefers early
columns.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Hashable, List, Optional, Sequence


def _integer_row(row: Dict[int, Fraction], rhs: Fraction):
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    den = lcm(den, rhs.denominator)
    irow = {c: int(v * den) for c, v in row.items()}
    return irow, int(rhs * den)


def _content(row: Dict[int, int], rhs: int) -> int:
    g = abs(rhs)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def solve_sparse(columns: Sequence[Dict[Hashable, Fraction]], rhs: Dict[Hashable, Fraction],
                 row_order=None) -> Optional[List[Fraction]]:
    """Return x with sum_j x[j] * columns[j] == rhs, or None if inconsistent."""
    rows: Dict[Hashable, Dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for r, v in col.items():
            if v:
                rows.setdefault(r, {})[j] = v
    keys = set(rows) | {r for r, v in rhs.items() if v}
    keys = sorted(keys, key=row_order, reverse=True) if row_order else sorted(keys, key=repr)

    pivots: List[int] = []
    prow: Dict[int, Dict[int, int]] = {}
    prhs: Dict[int, int] = {}
    for key in keys:
        row, b = _integer_row(rows.get(key, {}), Fraction(rhs.get(key, 0)))
        for pc in pivots:
            a = row.get(pc)
            if not a:
                continue
            p = prow[pc][pc]
            # row <- p*row - a*pivot_row
            new = {c: p * v for c, v in row.items()}
            for c, v in prow[pc].items():
                w = new.get(c, 0) - a * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            b = p * b - a * prhs[pc]
            row = new
            g = _content(row, b)
            if g > 1:
                row = {c: v // g for c, v in row.items()}
                b //= g
        if not row:
            if b:
                return None
            continue
        pc = min(row)
        if row[pc] < 0:
            row = {c: -v for c, v in row.items()}
            b = -b
        pivots.append(pc)
        prow[pc] = row
        prhs[pc] = b

    x = [Fraction(0)] * len(columns)
    for pc in reversed(pivots):
        row = prow[pc]
        s = Fraction(prhs[pc])
        for c, v in row.items():
            if c != pc:
                s -= v * x[c]
        x[pc] = s / row[pc]
    return x
