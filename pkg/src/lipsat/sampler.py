"""Floating point ratio-versus-scale checks along declared branches.

Nothing here feeds a symbolic verdict.  The reports are hints: a bounded
ratio suggests a local constant C exists, a ratio growing like scale^-k
suggests an order deficit of k along the sampled branches.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .arcs import Branch
from .poly import Polynomial

DEFAULT_SCALES = tuple(Fraction(1, 10**k) for k in range(1, 7))


class DegenerateSample(ValueError):
    """Every sampled point had a vanishing denominator."""

    def __init__(self, msg, skipped: int = 0, fiber_mismatches: int = 0):
        super().__init__(msg)
        self.skipped = skipped
        self.fiber_mismatches = fiber_mismatches


@dataclass(frozen=True)
class EpsilonLadder:
    scales: Tuple[Fraction, ...] = DEFAULT_SCALES
    samples_per_scale: int = 64
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(Fraction(s) for s in self.scales))
        if not self.scales or any(s <= 0 for s in self.scales):
            raise ValueError("scales must be positive")
        if any(a <= b for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly decreasing")
        if self.samples_per_scale < 1:
            raise ValueError("samples_per_scale must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


DEFAULT_LADDER = EpsilonLadder()


@dataclass
class RatioReport:
    scales: List[float]
    maxima: List[float]
    verdict_hint: str
    growth_exponent_estimate: float
    skipped: int = 0
    fiber_mismatches: int = 0
    samples: List[Tuple[float, complex, complex, float]] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "scales": self.scales,
            "maxima": self.maxima,
            "verdict_hint": self.verdict_hint,
            "growth_exponent_estimate": self.growth_exponent_estimate,
            "skipped": self.skipped,
            "fiber_mismatches": self.fiber_mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        lines = [f"{'scale':>10}  {'max ratio':>14}"]
        for s, m in zip(self.scales, self.maxima):
            lines.append(f"{s:>10.1e}  {m:>14.6e}")
        lines.append(f"hint: {self.verdict_hint}, growth exponent ~ {self.growth_exponent_estimate:.3f}")
        return "\n".join(lines)

    def csv(self) -> str:
        """Raw samples: scale, t1, t2, ratio."""
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["scale", "t1_re", "t1_im", "t2_re", "t2_im", "ratio"])
        for s, t1, t2, r in self.samples:
            w.writerow([s, t1.real, t1.imag, t2.real, t2.imag, r])
        return buf.getvalue()


def growth_exponent(scales: Sequence[float], maxima: Sequence[float]) -> float:
    """Least-squares slope of log(max) against log(1/scale)."""
    pts = [(math.log10(1 / s), math.log10(m)) for s, m in zip(scales, maxima) if m > 0 and math.isfinite(m)]
    if len(pts) < 2:
        return 0.0
    xs, ys = np.array(pts).T
    return float(np.polyfit(xs, ys, 1)[0])


def classify(maxima: Sequence[float], exponent: float, factor: float = 10.0, window: int = 3) -> str:
    # diverging: some run of `window` consecutive scales increases and gains >= factor overall
    for k in range(len(maxima) - window + 1):
        run = maxima[k:k + window]
        if all(a < b for a, b in zip(run, run[1:])) and run[-1] >= factor * run[0] > 0:
            return "diverging"
    if exponent < 0.5:
        return "bounded"
    return "inconclusive"


def _branch_values(branch: Branch, t: complex) -> List[complex]:
    out = []
    for s in branch.components:
        v = 0j
        for k, c in s.coeffs.items():
            v += float(c) * t**k
        out.append(v)
    return out


def _annulus(rng: np.random.Generator, scale: float, n: int) -> np.ndarray:
    r = rng.uniform(scale / 2, scale, n)
    theta = rng.uniform(0.0, 2 * math.pi, n)
    return r * np.exp(1j * theta)


def _report(scales, maxima, skipped, mismatches, samples, what) -> RatioReport:
    if all(m is None for m in maxima):
        raise DegenerateSample(f"{what}: every sample had a vanishing denominator", skipped, mismatches)
    # a scale with no usable sample inherits nothing; report 0 so maxima stay finite
    clean = [m if m is not None else 0.0 for m in maxima]
    exp = growth_exponent(scales, clean)
    return RatioReport(scales, clean, classify(clean, exp), exp, skipped, mismatches, samples)


def sample_ideal_ratio(p: Polynomial, gens: Sequence[Polynomial], branches: Sequence[Branch],
                       ladder: EpsilonLadder = DEFAULT_LADDER, keep_samples: bool = False) -> RatioReport:
    """max |p| / sup_i |p_i| over points of each branch with |t| in [scale/2, scale]."""
    rng = np.random.default_rng(ladder.seed)
    scales = [float(s) for s in ladder.scales]
    maxima: List[Optional[float]] = []
    skipped = 0
    samples = []
    for s in scales:
        best = None
        for br in branches:
            for t in _annulus(rng, s, ladder.samples_per_scale):
                pt = _branch_values(br, complex(t))
                den = max((abs(g.evaluate_complex(pt)) for g in gens), default=0.0)
                if den == 0.0:
                    skipped += 1
                    continue
                r = abs(p.evaluate_complex(pt)) / den
                if keep_samples:
                    samples.append((s, complex(t), 0j, r))
                best = r if best is None else max(best, r)
        maxima.append(best)
    return _report(scales, maxima, skipped, 0, samples, "sample_ideal_ratio")


def sample_lipschitz_ratio(q, branches: Sequence[Branch] = (), ladder: EpsilonLadder = DEFAULT_LADDER,
                           keep_samples: bool = False, fiber_tol: float = 1e-9) -> RatioReport:
    """max |f(y1) - f(y2)| / ||pi(y1) - pi(y2)||_inf over ordered branch pairs."""
    branches = list(branches) or list(q.branches)
    if not branches:
        raise ValueError("sample_lipschitz_ratio needs at least one branch")
    m = q.morphism
    f = q.element
    images = m.images
    rng = np.random.default_rng(ladder.seed)
    scales = [float(s) for s in ladder.scales]
    maxima: List[Optional[float]] = []
    skipped = mismatches = 0
    samples = []
    for s in scales:
        best = None
        for b1 in branches:
            for b2 in branches:
                t1s = _annulus(rng, s, ladder.samples_per_scale)
                t2s = _annulus(rng, s, ladder.samples_per_scale)
                for t1, t2 in zip(t1s, t2s):
                    y1 = _branch_values(b1, complex(t1))
                    y2 = _branch_values(b2, complex(t2))
                    num = abs(f.evaluate_complex(y1) - f.evaluate_complex(y2))
                    den = max((abs(im.evaluate_complex(y1) - im.evaluate_complex(y2)) for im in images),
                              default=0.0)
                    if den == 0.0:
                        skipped += 1
                        if num > fiber_tol:
                            mismatches += 1
                        continue
                    r = num / den
                    if keep_samples:
                        samples.append((s, complex(t1), complex(t2), r))
                    best = r if best is None else max(best, r)
        maxima.append(best)
    return _report(scales, maxima, skipped, mismatches, samples, "sample_lipschitz_ratio")
