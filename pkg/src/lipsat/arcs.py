"""Truncated power series, curve branches and arcs on the tensor square.

A ``Series`` knows its coefficients only below ``trunc``; arithmetic
propagates that horizon so an order query never mistakes truncation for a
vanishing coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .ideal import GroebnerBasis
from .poly import Polynomial, Scalar

DEFAULT_TRUNC = 32


class ArcOffVariety(ValueError):
    pass


class TruncationInsufficient(RuntimeError):
    pass


@dataclass(frozen=True)
class AtLeastTruncation:
    """All known coefficients vanish; the true order is >= ``bound``."""

    bound: int

    def __str__(self):
        return f">={self.bound}"


Order = Union[int, float, AtLeastTruncation]  # float only for math.inf (exactly zero)


class Series:
    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs: Dict[int, Scalar] | None = None, trunc: int = DEFAULT_TRUNC):
        self.trunc = int(trunc)
        self.coeffs = {
            int(k): Fraction(v) for k, v in (coeffs or {}).items() if v and 0 <= k < self.trunc
        }
        if any(k < 0 for k in (coeffs or {})):
            raise ValueError("negative exponents are not supported")

    @classmethod
    def t(cls, power: int = 1, coef: Scalar = 1, trunc: int = DEFAULT_TRUNC) -> "Series":
        return cls({power: coef}, trunc)

    @classmethod
    def constant(cls, value: Scalar, trunc: int = DEFAULT_TRUNC) -> "Series":
        return cls({0: value}, trunc)

    @classmethod
    def from_poly(cls, p: Polynomial, trunc: int = DEFAULT_TRUNC) -> "Series":
        """A univariate polynomial (one ambient variable, or a constant) as a series."""
        if len(p.gens) > 1 and len(p.used_variables()) > 1:
            raise ValueError("series must be univariate")
        idx = 0
        if p.used_variables():
            idx = p.gens.index(next(iter(p.used_variables())))
        return cls({e[idx] if e else 0: c for e, c in p.terms.items()}, trunc)

    def order(self) -> Union[int, AtLeastTruncation]:
        if not self.coeffs:
            return AtLeastTruncation(self.trunc)
        return min(self.coeffs)

    def _val(self) -> int:
        return min(self.coeffs) if self.coeffs else self.trunc

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.trunc)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Series(out, min(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return Series({k: -v for k, v in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Series) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            c = Fraction(other)
            return Series({k: v * c for k, v in self.coeffs.items()}, self.trunc)
        trunc = min(self.trunc + other._val(), other.trunc + self._val())
        out: Dict[int, Fraction] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                if k < trunc:
                    out[k] = out.get(k, 0) + v1 * v2
        return Series(out, trunc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n == 0:
            return Series.constant(1, self.trunc)
        result, base = None, self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "Series":
        """1/s for a unit series (nonzero constant term)."""
        c0 = self.coeffs.get(0, 0)
        if not c0:
            raise ZeroDivisionError("series is not a unit")
        inv = [Fraction(1) / c0]
        for k in range(1, self.trunc):
            s = sum(self.coeffs.get(j, 0) * inv[k - j] for j in range(1, k + 1))
            inv.append(-s / c0)
        return Series(dict(enumerate(inv)), self.trunc)

    def compose(self, inner: "Series") -> "Series":
        """self(inner(t)); ``inner`` must have zero constant term."""
        if inner.coeffs.get(0):
            raise ValueError("substitution must have zero constant term")
        return series_compose_univariate(self, inner)

    def is_zero_known(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Series) and self.coeffs == other.coeffs and self.trunc == other.trunc

    def __repr__(self):
        if not self.coeffs:
            return f"O(t^{self.trunc})"
        body = " + ".join(
            f"{v}" if k == 0 else (f"{v}*t^{k}" if v != 1 else f"t^{k}") for k, v in sorted(self.coeffs.items())
        )
        return f"{body} + O(t^{self.trunc})"


def series_compose_univariate(outer: Series, inner: Series) -> Series:
    v = inner._val()
    # outer's unknown tail starts at inner^trunc; inner's own tail enters linearly
    trunc = min(outer.trunc * v, inner.trunc)
    acc = Series({}, trunc)
    power = Series.constant(1, trunc)
    for k in range(0, max(outer.coeffs, default=-1) + 1):
        if k:
            power = power * inner
        c = outer.coeffs.get(k)
        if c:
            acc = acc + power * c
    return Series(acc.coeffs, trunc)


def series_compose(f: Polynomial, values: Sequence[Series]) -> Series:
    """f(values) expanded up to the propagated truncation."""
    if len(values) != len(f.gens):
        raise ValueError(f"{len(values)} series for {len(f.gens)} variables")
    trunc = max((s.trunc for s in values), default=DEFAULT_TRUNC)
    powers: Dict[Tuple[int, int], Series] = {}

    def power(i, k):
        if (i, k) not in powers:
            powers[(i, k)] = values[i] if k == 1 else power(i, k - 1) * values[i]
        return powers[(i, k)]

    acc: Optional[Series] = None
    for e, c in f.terms.items():
        term: Optional[Series] = None
        for i, k in enumerate(e):
            if k:
                term = power(i, k) if term is None else term * power(i, k)
        term = Series.constant(c, trunc) if term is None else term * c
        acc = term if acc is None else acc + term
    if acc is None:
        acc = Series({}, trunc)
    return acc


def order(s: Series) -> Union[int, AtLeastTruncation]:
    return s.order()


def pullback_order(f: Polynomial, components: Sequence[Series], basis: GroebnerBasis | None = None) -> Order:
    """Order of f along an arc; ``math.inf`` when f is exactly zero modulo ``basis``."""
    if basis is not None:
        f = basis.normal_form(f)
    if f.is_zero():
        return math.inf
    return series_compose(f, components).order()


@dataclass(frozen=True, eq=False)
class Branch:
    name: str
    ring: "PresentedRing"
    components: Tuple[Series, ...]

    def __post_init__(self):
        if len(self.components) != len(self.ring.variables):
            raise ValueError(f"branch {self.name}: {len(self.components)} components for "
                             f"{len(self.ring.variables)} variables")
        _check_on_variety(self.ring.defining.generators, self.components, f"branch {self.name}")

    def reparametrize(self, sub: Series) -> "Branch":
        return Branch(self.name, self.ring, tuple(c.compose(sub) for c in self.components))

    def point(self) -> Tuple[Fraction, ...]:
        return tuple(c.coeffs.get(0, Fraction(0)) for c in self.components)


def make_branch(name: str, ring, components: Sequence[Union[Series, Polynomial, str]],
                trunc: int = DEFAULT_TRUNC) -> Branch:
    comps = []
    for c in components:
        if isinstance(c, str):
            from .poly import parse_poly
            c = parse_poly(c, ("t",))
        if isinstance(c, Polynomial):
            c = Series.from_poly(c, trunc)
        comps.append(c)
    return Branch(name, ring, tuple(comps))


def _check_on_variety(relations, components, what: str):
    for g in relations:
        if g.is_zero():
            continue
        s = series_compose(g, components)
        if s.coeffs:
            raise ArcOffVariety(f"{what} violates {g}: order {s.order()} below truncation {s.trunc}")


@dataclass(frozen=True, eq=False)
class Arc:
    components: Tuple[Series, ...]
    label: str = ""
    diagonal: bool = False


def pair_arc(b1: Branch, b2: Branch, sub1: Series, sub2: Series, tensor=None) -> Arc:
    """First copy b1(sub1(t)), second copy b2(sub2(t))."""
    if b1.ring is not b2.ring and b1.ring.variables != b2.ring.variables:
        raise ValueError("branches must live on the same ring")
    comps = tuple(c.compose(sub1) for c in b1.components) + tuple(c.compose(sub2) for c in b2.components)
    diagonal = b1 is b2 and sub1 == sub2
    label = f"{b1.name}({_label(sub1)}), {b2.name}({_label(sub2)})"
    if tensor is not None:
        _check_on_variety(tensor.ring.defining.generators, comps, f"arc [{label}]")
    return Arc(comps, label, diagonal)


def _label(s: Series) -> str:
    if not s.coeffs:
        return "0"
    parts = []
    for k, v in sorted(s.coeffs.items()):
        mono = "t" if k == 1 else f"t^{k}"
        parts.append(mono if v == 1 else (f"-{mono}" if v == -1 else f"{v}*{mono}"))
    return " + ".join(parts)


def substitution_family(max_exp: int = 3, coeffs: Sequence[Scalar] = (1, -1, 2),
                        trunc: int = DEFAULT_TRUNC) -> List[Tuple[Series, Series]]:
    """(t, 0), (t, t) and (t, c t^m) for c in coeffs, 1 <= m <= max_exp, deduplicated."""
    t = Series.t(1, 1, trunc)
    subs = [(t, Series({}, trunc)), (t, t)]
    for m in range(1, max_exp + 1):
        for c in coeffs:
            s = Series.t(m, c, trunc)
            if all(s != other for _, other in subs):
                subs.append((t, s))
    return subs


def standard_arc_family(tensor, branches: Sequence[Branch], max_exp: int = 3,
                        coeffs: Sequence[Scalar] = (1, -1, 2), trunc: int = DEFAULT_TRUNC) -> List[Arc]:
    """pair_arc over all ordered branch pairs and the substitution family; diagonal arcs dropped."""
    arcs = []
    subs = substitution_family(max_exp, coeffs, trunc)
    for b1 in branches:
        for b2 in branches:
            for s1, s2 in subs:
                arc = pair_arc(b1, b2, s1, s2, tensor)
                if not arc.diagonal:
                    arcs.append(arc)
    return arcs
