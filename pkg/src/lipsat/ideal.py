"""Groebner bases over Q and the membership tests built on them.

Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller pair criteria.  Optionally every basis element carries its
expression in terms of the input generators, so that membership answers can
be turned into explicit combinations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import GREVLEX, Exponent, MonomialOrder, Polynomial, Terms, VariableMismatch, block

# --- raw term-dict helpers (hot loops stay off the Polynomial wrapper) ---------


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _axpy(acc: Terms, g: Terms, mono: Exponent, coef: Fraction) -> None:
    """acc += coef * mono * g, in place."""
    for e, c in g.items():
        m = tuple(x + y for x, y in zip(e, mono))
        v = acc.get(m, 0) + coef * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def _mul(p: Terms, q: Terms) -> Terms:
    out: Terms = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            m = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _divide(f: Terms, basis: List[Terms], lms: List[Exponent], key, want_quotients: bool):
    """Full multivariate division of ``f`` by a monic ``basis``."""
    p = dict(f)
    rem: Terms = {}
    quots: List[Terms] = [dict() for _ in basis] if want_quotients else []
    while p:
        e = max(p, key=key)
        c = p[e]
        for j, lm in enumerate(lms):
            if _divides(lm, e):
                m = _sub_exp(e, lm)
                _axpy(p, basis[j], m, -c)
                if want_quotients:
                    q = quots[j]
                    v = q.get(m, 0) + c
                    if v:
                        q[m] = v
                    else:
                        q.pop(m, None)
                break
        else:
            rem[e] = c
            del p[e]
    return quots, rem


def _monic(p: Terms, key) -> Tuple[Terms, Fraction]:
    lc = p[max(p, key=key)]
    inv = 1 / lc
    return {e: c * inv for e, c in p.items()}, inv


def _buchberger(gens: List[Terms], nvars: int, order: MonomialOrder, track: bool):
    """Reduced Groebner basis of the ideal spanned by ``gens``.

    Returns (basis, reps) where ``reps[k][j]`` is the cofactor of input
    generator j in basis element k (empty when ``track`` is False).
    """
    key = order.key()
    m = len(gens)
    one = (0,) * nvars
    G: List[Terms] = []
    L: List[Exponent] = []
    R: List[List[Terms]] = []
    active: List[bool] = []
    pairs: Dict[Tuple[int, int], Exponent] = {}

    def add(h: Terms, rep: List[Terms]):
        h, inv = _monic(h, key)
        if track:
            rep = [{e: c * inv for e, c in r.items()} for r in rep]
        lh = max(h, key=key)
        idx = len(G)
        # Gebauer-Moeller: prune old pairs, then filter the new ones.
        for (a, b), lab in list(pairs.items()):
            if _divides(lh, lab) and _lcm(L[a], lh) != lab and _lcm(L[b], lh) != lab:
                del pairs[(a, b)]
        cand = [(i, _lcm(L[i], lh)) for i in range(idx) if active[i]]
        cand.sort(key=lambda t: key(t[1]))
        kept: List[Tuple[int, Exponent]] = []
        for i, lab in cand:
            if any(_divides(l2, lab) for _, l2 in kept):
                continue
            kept.append((i, lab))
        # Chain criterion above keeps only minimal lcms; product criterion here.
        for i, lab in kept:
            if lab != tuple(x + y for x, y in zip(L[i], lh)):
                pairs[(i, idx)] = lab
        for i in range(idx):
            if active[i] and _divides(lh, L[i]):
                active[i] = False
        G.append(h)
        L.append(lh)
        R.append(rep)
        active.append(True)

    for j, g in enumerate(gens):
        if not g:
            continue
        rep = [dict() for _ in range(m)] if track else []
        if track:
            rep[j] = {one: Fraction(1)}
        act = [k for k in range(len(G)) if active[k]]
        quots, h = _divide(g, [G[k] for k in act], [L[k] for k in act], key, track)
        if h:
            if track:
                for q, k in zip(quots, act):
                    if q:
                        for jj in range(m):
                            if R[k][jj]:
                                _sub_into(rep[jj], _mul(q, R[k][jj]))
            add(h, rep)

    while pairs:
        (a, b), lab = min(pairs.items(), key=lambda kv: (key(kv[1]), kv[0]))
        del pairs[(a, b)]
        ma, mb = _sub_exp(lab, L[a]), _sub_exp(lab, L[b])
        s: Terms = {}
        _axpy(s, G[a], ma, Fraction(1))
        _axpy(s, G[b], mb, Fraction(-1))
        if not s:
            continue
        act = [k for k in range(len(G)) if active[k]]
        quots, h = _divide(s, [G[k] for k in act], [L[k] for k in act], key, track)
        if not h:
            continue
        rep = []
        if track:
            rep = [dict() for _ in range(m)]
            for jj in range(m):
                if R[a][jj]:
                    _axpy(rep[jj], R[a][jj], ma, Fraction(1))
                if R[b][jj]:
                    _axpy(rep[jj], R[b][jj], mb, Fraction(-1))
            for q, k in zip(quots, act):
                if q:
                    for jj in range(m):
                        if R[k][jj]:
                            _sub_into(rep[jj], _mul(q, R[k][jj]))
        add(h, rep)

    # minimalize
    idx = [k for k in range(len(G)) if active[k]]
    minimal = []
    for k in idx:
        if any(_divides(L[o], L[k]) and (L[o] != L[k] or o < k) for o in idx if o != k):
            continue
        minimal.append(k)
    # interreduce
    basis, reps = [], []
    for k in minimal:
        others = [o for o in minimal if o != k]
        quots, h = _divide(G[k], [G[o] for o in others], [L[o] for o in others], key, track)
        rep = []
        if track:
            rep = [dict(r) for r in R[k]]
            for q, o in zip(quots, others):
                if q:
                    for jj in range(m):
                        if R[o][jj]:
                            _sub_into(rep[jj], _mul(q, R[o][jj]))
        basis.append(h)
        reps.append(rep)
    perm = sorted(range(len(basis)), key=lambda i: key(max(basis[i], key=key)), reverse=True)
    return [basis[i] for i in perm], [reps[i] for i in perm]


def _sub_into(acc: Terms, p: Terms) -> None:
    for e, c in p.items():
        v = acc.get(e, 0) - c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


# --- public types ---------------------------------------------------------------


@dataclass(frozen=True)
class ReductionTrace:
    """``f = sum(cofactors[i] * basis[i]) + normal_form`` exactly."""

    normal_form: Polynomial
    cofactors: Tuple[Polynomial, ...]
    basis: Tuple[Polynomial, ...]
    generator_cofactors: Optional[Tuple[Polynomial, ...]] = None

    @property
    def member(self) -> bool:
        return self.normal_form.is_zero()

    def reconstruct(self) -> Polynomial:
        acc = self.normal_form
        for c, b in zip(self.cofactors, self.basis):
            acc = acc + c * b
        return acc


@dataclass(frozen=True)
class GroebnerBasis:
    elements: Tuple[Polynomial, ...]
    order: MonomialOrder
    gens: Tuple[str, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def _raw(self):
        key = self.order.key()
        basis = [b.terms for b in self.elements]
        lms = [max(b, key=key) for b in basis]
        return basis, lms, key

    def leading_monomials(self) -> List[Exponent]:
        return list(self._raw[1])

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.gens != self.gens:
            raise VariableMismatch(f"{f.gens} vs {self.gens}")
        if not self.elements:
            return f
        basis, lms, key = self._raw
        _, rem = _divide(f.terms, basis, lms, key, False)
        return Polynomial(self.gens, rem, _trusted=True)

    def reduce(self, f: Polynomial) -> ReductionTrace:
        if f.gens != self.gens:
            raise VariableMismatch(f"{f.gens} vs {self.gens}")
        basis, lms, key = self._raw
        quots, rem = _divide(f.terms, basis, lms, key, True)
        return ReductionTrace(
            Polynomial(self.gens, rem, _trusted=True),
            tuple(Polynomial(self.gens, q, _trusted=True) for q in quots),
            self.elements,
        )

    def is_standard(self, e: Exponent) -> bool:
        return not any(_divides(lm, e) for lm in self._raw[1])


class Ideal:
    """Finitely generated ideal of Q[gens]; the zero ideal is generated by ``[0]``."""

    def __init__(self, generators: Sequence[Polynomial], gens: Sequence[str] | None = None,
                 order: MonomialOrder = GREVLEX):
        generators = list(generators)
        if gens is None:
            if not generators:
                raise ValueError("need generators or an explicit ambient")
            gens = generators[0].gens
        gens = tuple(gens)
        for g in generators:
            if g.gens != gens:
                raise VariableMismatch(f"generator ambient {g.gens} != {gens}")
        nonzero = [g for g in generators if not g.is_zero()]
        self.gens = gens
        self.order = order
        self.generators: Tuple[Polynomial, ...] = tuple(nonzero) if nonzero else (Polynomial(gens),)

    @classmethod
    def zero(cls, gens: Sequence[str], order: MonomialOrder = GREVLEX) -> "Ideal":
        return cls([], gens, order)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.generators)

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.gens != self.gens:
            raise VariableMismatch(f"{other.gens} vs {self.gens}")
        return Ideal(list(self.generators) + list(other.generators), self.gens, self.order)

    def extend(self, more: Sequence[Polynomial]) -> "Ideal":
        return Ideal(list(self.generators) + list(more), self.gens, self.order)

    def with_order(self, order: MonomialOrder) -> "Ideal":
        return Ideal(self.generators, self.gens, order)

    def embed(self, gens: Sequence[str], order: MonomialOrder = GREVLEX) -> "Ideal":
        return Ideal([g.embed(gens) for g in self.generators], gens, order)

    @cached_property
    def basis(self) -> GroebnerBasis:
        raw, _ = _buchberger([g.terms for g in self.generators], len(self.gens), self.order, False)
        return GroebnerBasis(tuple(Polynomial(self.gens, b, _trusted=True) for b in raw), self.order, self.gens)

    @cached_property
    def _tracked(self):
        raw, reps = _buchberger([g.terms for g in self.generators], len(self.gens), self.order, True)
        basis = GroebnerBasis(tuple(Polynomial(self.gens, b, _trusted=True) for b in raw), self.order, self.gens)
        reps = [tuple(Polynomial(self.gens, r, _trusted=True) for r in rep) for rep in reps]
        return basis, reps

    def contains(self, f: Polynomial) -> bool:
        return self.basis.normal_form(f).is_zero()

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.basis.normal_form(f)

    def is_unit(self) -> bool:
        return self.basis.is_unit()

    def __repr__(self):
        return f"Ideal<{', '.join(map(str, self.generators))}> in Q[{', '.join(self.gens)}]"


# --- operations ----------------------------------------------------------------


def fresh_name(base: str, taken: Sequence[str]) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


def groebner(ideal: Ideal) -> GroebnerBasis:
    return ideal.basis


def is_groebner(elements: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    elements = [e for e in elements if not e.is_zero()]
    if not elements:
        return True
    gens = elements[0].gens
    key = order.key()
    raw = [_monic(e.terms, key)[0] for e in elements]
    lms = [max(r, key=key) for r in raw]
    for a in range(len(raw)):
        for b in range(a + 1, len(raw)):
            lab = _lcm(lms[a], lms[b])
            s: Terms = {}
            _axpy(s, raw[a], _sub_exp(lab, lms[a]), Fraction(1))
            _axpy(s, raw[b], _sub_exp(lab, lms[b]), Fraction(-1))
            if _divide(s, raw, lms, key, False)[1]:
                return False
    return True


def ideal_member(f: Polynomial, ideal: Ideal) -> bool:
    return ideal.contains(f)


def ideal_member_trace(f: Polynomial, ideal: Ideal) -> ReductionTrace:
    """Reduce ``f`` with cofactors, also lifted back onto the ideal's own generators."""
    basis, reps = ideal._tracked
    tr = basis.reduce(f)
    m = len(ideal.generators)
    lifted = [Polynomial(ideal.gens) for _ in range(m)]
    for q, rep in zip(tr.cofactors, reps):
        if q.is_zero():
            continue
        for j in range(m):
            if not rep[j].is_zero():
                lifted[j] = lifted[j] + q * rep[j]
    return ReductionTrace(tr.normal_form, tr.cofactors, tr.basis, tuple(lifted))


def radical_member(f: Polynomial, ideal: Ideal) -> bool:
    """f in sqrt(I) iff 1 in I + <1 - w f> with w fresh."""
    if f.gens != ideal.gens:
        raise VariableMismatch(f"{f.gens} vs {ideal.gens}")
    if f.is_zero():
        return True
    w = fresh_name("w", ideal.gens)
    gens = (w,) + ideal.gens
    wp = Polynomial.var(gens, w)
    extended = Ideal([g.embed(gens) for g in ideal.generators] + [1 - wp * f.embed(gens)], gens)
    return extended.is_unit()


def eliminate(ideal: Ideal, k: int) -> Ideal:
    """Generators of I intersected with Q[gens[k:]], returned in that smaller ambient."""
    if k == 0:
        return Ideal(ideal.basis.elements or [Polynomial(ideal.gens)], ideal.gens, ideal.order)
    gb = ideal.with_order(block(k)).basis
    rest = ideal.gens[k:]
    keep = [
        Polynomial(rest, {e[k:]: c for e, c in b.terms.items()}, _trusted=True)
        for b in gb
        if all(not any(e[:k]) for e in b.terms)
    ]
    return Ideal(keep, rest)


def saturate(ideal: Ideal, p: Polynomial) -> Ideal:
    """I : p^infinity, via elimination of w from I + <1 - w p>."""
    if p.is_zero():
        raise ValueError("cannot saturate by zero")
    w = fresh_name("w", ideal.gens)
    gens = (w,) + ideal.gens
    wp = Polynomial.var(gens, w)
    ext = Ideal([g.embed(gens) for g in ideal.generators] + [1 - wp * p.embed(gens)], gens)
    out = eliminate(ext, 1)
    return Ideal(out.generators, ideal.gens, ideal.order)


def ideal_equal(a: Ideal, b: Ideal) -> bool:
    if a.gens != b.gens:
        raise VariableMismatch(f"{a.gens} vs {b.gens}")
    return all(b.contains(g) for g in a.generators) and all(a.contains(g) for g in b.generators)


def intersect(a: Ideal, b: Ideal) -> Ideal:
    """I cap J = eliminate t from t*I + (1 - t)*J."""
    if a.gens != b.gens:
        raise VariableMismatch(f"{a.gens} vs {b.gens}")
    t = fresh_name("t", a.gens)
    gens = (t,) + a.gens
    tp = Polynomial.var(gens, t)
    rels = [tp * g.embed(gens) for g in a.generators] + [(1 - tp) * g.embed(gens) for g in b.generators]
    out = eliminate(Ideal(rels, gens), 1)
    return Ideal(out.generators, a.gens, a.order)


def colon(ideal: Ideal, p: Polynomial) -> Ideal:
    """I : p = (I cap <p>) / p."""
    if p.is_zero():
        raise ValueError("colon by zero")
    inter = intersect(ideal, Ideal([p], ideal.gens))
    key = GREVLEX.key()
    lp = max(p.terms, key=key)
    out = []
    for g in inter.generators:
        quots, rem = _divide(g.terms, [_monic(p.terms, key)[0]], [lp], key, True)
        assert not rem, "generator of I cap <p> not divisible by p"
        inv = _monic(p.terms, key)[1]
        out.append(Polynomial(ideal.gens, {e: c * inv for e, c in quots[0].items()}, _trusted=True))
    return Ideal(out, ideal.gens, ideal.order)
