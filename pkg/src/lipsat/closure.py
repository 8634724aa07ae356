"""Integral closure of ideals and integrality of elements.

Proofs come from a bounded search for an integral dependence relation
(``certificate_search``), refutations from orders along arcs
(``arc_refute``) or from rational points (``find_point_witness``).  Monomial
ideals also have an exact Newton polyhedron test, used as an independent
oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .arcs import Arc, AtLeastTruncation, TruncationInsufficient, _check_on_variety, pullback_order
from .ideal import GroebnerBasis, Ideal, ideal_member_trace, saturate, fresh_name
from .linsolve import solve_sparse
from .poly import GREVLEX, Exponent, Polynomial, monomials_up_to
from .variety import PresentedRing, make_morphism


class MalformedCertificate(ValueError):
    pass


class NonMonomialIdeal(ValueError):
    pass


class ZeroGenerator(ValueError):
    pass


@dataclass(frozen=True)
class SearchBounds:
    max_relation_degree: int = 4
    max_cofactor_degree: int = 6

    def __post_init__(self):
        if self.max_relation_degree < 1 or self.max_cofactor_degree < 0:
            raise ValueError(f"invalid bounds {self}")


DEFAULT_BOUNDS = SearchBounds()


# --- certificates and witnesses ---------------------------------------------------


Combo = Tuple[Tuple[Polynomial, Tuple[int, ...]], ...]


@dataclass(frozen=True)
class IntegralCertificate:
    """z^n + a_1 z^(n-1) + ... + a_n = 0 with a_i = sum(cofactor * product of i generators).

    ``combos[i-1]`` lists the (cofactor, generator-index multiset) pairs of a_i.
    """

    n: int
    combos: Tuple[Combo, ...]

    def coefficient(self, i: int, generators: Sequence[Polynomial]) -> Polynomial:
        acc = Polynomial(generators[0].gens) if generators else None
        for cof, idx in self.combos[i - 1]:
            term = cof
            for j in idx:
                term = term * generators[j]
            acc = term if acc is None else acc + term
        return acc

    def relation(self, z: Polynomial, generators: Sequence[Polynomial]) -> Polynomial:
        rel = z ** self.n
        for i in range(1, self.n + 1):
            if self.combos[i - 1]:
                rel = rel + self.coefficient(i, generators) * z ** (self.n - i)
        return rel


@dataclass(frozen=True)
class IntegralityRelation:
    """f^n + c_1 f^(n-1) + ... + c_n = 0 for f = num/den, cleared of denominators."""

    n: int
    coefficients: Tuple[Polynomial, ...]

    def relation(self, num: Polynomial, den: Polynomial) -> Polynomial:
        rel = num ** self.n
        for i, c in enumerate(self.coefficients, 1):
            if not c.is_zero():
                rel = rel + c * den ** i * num ** (self.n - i)
        return rel


@dataclass(frozen=True)
class ArcWitness:
    arc: Arc
    target_order: int
    ideal_order: Union[int, float]
    ideal_order_is_bound: bool = False

    @property
    def margin(self):
        return self.ideal_order - self.target_order


@dataclass(frozen=True)
class PointWitness:
    point: Tuple[Fraction, ...]
    generator_values: Tuple[Fraction, ...]
    target_value: Fraction


@dataclass(frozen=True)
class DeclaredWitness:
    """A refutation asserted by the caller rather than computed."""

    reason: str


@dataclass(frozen=True)
class Proved:
    certificate: object
    status = "proved"


@dataclass(frozen=True)
class Refuted:
    witness: object
    status = "refuted"


@dataclass(frozen=True)
class Unknown:
    bounds: Optional[SearchBounds] = None
    arcs_tried: int = 0
    note: str = ""
    status = "unknown"


@dataclass(frozen=True)
class Inconclusive:
    arcs_tried: int
    status = "inconclusive"


MembershipVerdict = Union[Proved, Refuted, Unknown]


# --- linear relation search ----------------------------------------------------


def standard_monomials(basis: GroebnerBasis, nvars: int, degree: int) -> List[Exponent]:
    return [e for e in monomials_up_to(nvars, degree) if basis.is_standard(e)]


def _nf(basis: GroebnerBasis, p: Polynomial) -> Polynomial:
    return basis.normal_form(p) if len(basis) else p


def _solve_relation(target: Polynomial, candidates: Sequence[Tuple[object, Polynomial]]):
    """Coefficients x (by tag) with target + sum x_tag * cand_tag == 0, or None."""
    key = GREVLEX.key()
    cols = [c.terms for _, c in candidates]
    rhs = {e: -v for e, v in target.terms.items()}
    x = solve_sparse(cols, rhs, row_order=key)
    if x is None:
        return None
    return [(tag, v) for (tag, _), v in zip(candidates, x) if v]


def _nonzero_generators(ideal: Ideal) -> List[Polynomial]:
    return [g for g in ideal.generators if not g.is_zero()]


def certificate_search(z: Polynomial, ideal: Ideal, ambient_defining: Optional[Ideal] = None,
                       bounds: SearchBounds = DEFAULT_BOUNDS) -> Union[Proved, Unknown]:
    """Bounded search for a relation certifying z in the integral closure of ``ideal``.

    n = 1 is plain membership (cofactors of unbounded degree); for n >= 2 every
    a_i ranges over cofactors of degree <= ``max_cofactor_degree`` times products
    of i generators, and the reduced relation is solved as a linear system.
    """
    gens = _nonzero_generators(ideal)
    defining = ambient_defining if ambient_defining is not None else Ideal.zero(z.gens)
    def_gens = _nonzero_generators(defining)

    if gens or def_gens:
        combined = Ideal(gens + def_gens, z.gens)
        tr = ideal_member_trace(z, combined)
        if tr.member:
            combo = tuple((-c, (j,)) for j, c in enumerate(tr.generator_cofactors[: len(gens)]) if not c.is_zero())
            cert = IntegralCertificate(1, (combo,))
            assert verify_certificate(z, ideal, defining, cert)
            return Proved(cert)
    elif z.is_zero():
        return Proved(IntegralCertificate(1, ((),)))

    basis = defining.basis
    for n in range(2, bounds.max_relation_degree + 1):
        cert = _search_degree(z, gens, basis, n, bounds.max_cofactor_degree)
        if cert is not None:
            assert verify_certificate(z, ideal, defining, cert)
            return Proved(cert)
    return Unknown(bounds)


def _search_degree(z, gens, basis, n, dmax) -> Optional[IntegralCertificate]:
    nvars = len(z.gens)
    std = standard_monomials(basis, nvars, dmax)
    zpow = [z.one()]
    for _ in range(n):
        zpow.append(_nf(basis, zpow[-1] * z))
    products = {(): z.one()}
    cands = []
    for i in range(1, n + 1):
        for idx in itertools.combinations_with_replacement(range(len(gens)), i):
            prod = products[idx[:-1]] * gens[idx[-1]]
            products[idx] = _nf(basis, prod)
            base = _nf(basis, products[idx] * zpow[n - i])
            if base.is_zero():
                continue
            for m in std:
                col = _nf(basis, base.mul_term(m))
                if not col.is_zero():
                    cands.append(((i, idx, m), col))
    if not cands:
        return None
    cands.sort(key=lambda c: (sum(c[0][2]), c[0][0], c[0][1], GREVLEX.key()(c[0][2])))
    sol = _solve_relation(zpow[n], cands)
    if sol is None:
        return None
    grouped = {}
    for (i, idx, m), v in sol:
        grouped.setdefault((i, idx), {})[m] = v
    combos = []
    for i in range(1, n + 1):
        combos.append(tuple(
            (Polynomial(z.gens, terms), idx)
            for (ii, idx), terms in sorted(grouped.items()) if ii == i
        ))
    return IntegralCertificate(n, tuple(combos))


def verify_certificate(z: Polynomial, ideal: Ideal, ambient_defining: Optional[Ideal],
                       cert: IntegralCertificate) -> bool:
    gens = list(ideal.generators)
    if cert.n < 1 or len(cert.combos) != cert.n:
        raise MalformedCertificate(f"relation degree {cert.n} with {len(cert.combos)} coefficient lists")
    for i, combo in enumerate(cert.combos, 1):
        for cof, idx in combo:
            if len(idx) != i:
                raise MalformedCertificate(f"a_{i} uses a product of {len(idx)} generators")
            if any(not 0 <= j < len(gens) for j in idx):
                raise MalformedCertificate(f"generator index out of range in a_{i}")
            if any(gens[j].is_zero() for j in idx) and not cof.is_zero():
                raise MalformedCertificate("product involves the zero generator")
            if cof.gens != z.gens:
                raise MalformedCertificate("cofactor in a different ambient")
    rel = cert.relation(z, gens)
    if ambient_defining is None:
        return rel.is_zero()
    return ambient_defining.contains(rel)


# --- refutation -----------------------------------------------------------------


def arc_refute(z: Polynomial, ideal: Ideal, ambient_defining: Optional[Ideal],
               arcs: Iterable[Arc]) -> Union[Refuted, Inconclusive]:
    """First arc along which z vanishes to lower order than the ideal, if any.

    Raises ``TruncationInsufficient`` when no arc refutes but some comparison
    depended on coefficients beyond the truncation horizon.
    """
    gens = _nonzero_generators(ideal)
    basis = ambient_defining.basis if ambient_defining is not None else None
    def_gens = _nonzero_generators(ambient_defining) if ambient_defining is not None else []
    undecided = []
    tried = 0
    for arc in arcs:
        tried += 1
        if len(arc.components) != len(z.gens):
            raise ValueError(f"arc has {len(arc.components)} components for {len(z.gens)} variables")
        _check_on_variety(def_gens, arc.components, f"arc [{arc.label}]")
        oz = pullback_order(z, arc.components, basis)
        ogs = [pullback_order(g, arc.components, basis) for g in gens]
        finite = min((o for o in ogs if not isinstance(o, AtLeastTruncation)), default=math.inf)
        floor = min((o.bound for o in ogs if isinstance(o, AtLeastTruncation)), default=math.inf)
        if isinstance(oz, AtLeastTruncation):
            if finite > oz.bound:
                undecided.append(arc)
            continue
        if oz == math.inf or oz >= finite:
            continue
        if oz < floor:
            exact = finite <= floor
            return Refuted(ArcWitness(arc, oz, finite if exact else floor, not exact))
        undecided.append(arc)
    if undecided:
        raise TruncationInsufficient(
            f"{len(undecided)} arc(s) undecidable below the truncation horizon, e.g. [{undecided[0].label}]")
    return Inconclusive(tried)


def _lattice(nvars: int, box: int):
    """Integer points ordered by max-norm, then lexicographically."""
    yield (0,) * nvars
    for r in range(1, box + 1):
        for p in itertools.product(range(-r, r + 1), repeat=nvars):
            if max(abs(v) for v in p) == r:
                yield p


def find_point_witness(target: Polynomial, relations: Sequence[Polynomial], *,
                       supplied: Sequence[Sequence] = (), box: int = 2,
                       max_points: int = 200_000) -> Optional[PointWitness]:
    """A rational point killing every relation but not the target (refutes radical membership)."""
    rels = [r for r in relations if not r.is_zero()]
    candidates = itertools.chain(supplied, itertools.islice(_lattice(len(target.gens), box), max_points))
    for pt in candidates:
        pt = tuple(Fraction(v) for v in pt)
        vals = []
        for r in rels:
            v = r.evaluate(pt)
            if v:
                break
            vals.append(v)
        else:
            tv = target.evaluate(pt)
            if tv:
                return PointWitness(pt, tuple(vals), tv)
    return None


def check_point_witness(w: PointWitness, target: Polynomial, relations: Sequence[Polynomial]) -> bool:
    return all(r.evaluate(w.point) == 0 for r in relations) and target.evaluate(w.point) != 0


# --- monomial oracle -------------------------------------------------------------


def _monomial_exponents(ideal: Ideal) -> List[Exponent]:
    exps = []
    for g in _nonzero_generators(ideal):
        if not g.is_monomial():
            raise NonMonomialIdeal(f"{g} is not a monomial")
        exps.append(next(iter(g.terms)))
    return exps


def newton_weights(m: Union[Polynomial, Exponent], ideal: Ideal) -> Optional[List[Fraction]]:
    """Convex weights lambda with sum lambda_j * g_j <= exponent(m), or None if infeasible.

    The feasibility LP is tiny (one row per variable plus the convexity row),
    so it is decided exactly by trying every candidate basis: a feasible LP
    has a basic solution supported on at most nvars + 1 columns.
    """
    alpha = next(iter(m.terms)) if isinstance(m, Polynomial) else tuple(m)
    if isinstance(m, Polynomial) and not m.is_monomial():
        raise ValueError("target must be a monomial")
    exps = _monomial_exponents(ideal)
    if not exps:
        return None
    k, nv = len(exps), len(alpha)
    # columns: lambda_j then one slack per variable; row nv is sum(lambda) = 1
    cols = [{**{v: Fraction(e[v]) for v in range(nv)}, nv: Fraction(1)} for e in exps]
    cols += [{v: Fraction(1)} for v in range(nv)]
    rhs = {**{v: Fraction(a) for v, a in enumerate(alpha)}, nv: Fraction(1)}
    for size in range(1, nv + 2):
        for support in itertools.combinations(range(k + nv), size):
            x = solve_sparse([cols[j] for j in support], rhs, row_order=lambda r: -r)
            if x is None or any(v < 0 for v in x):
                continue
            lam = [Fraction(0)] * k
            for j, v in zip(support, x):
                if j < k:
                    lam[j] = v
            return lam
    return None


def newton_member(m: Union[Polynomial, Exponent], ideal: Ideal) -> bool:
    """Exponent of m in conv(generator exponents) + R^n_{>=0}."""
    return newton_weights(m, ideal) is not None


def monomial_arc(weights: Sequence[int], trunc: int = 32) -> Arc:
    from .arcs import Series

    return Arc(tuple(Series.t(w, 1, trunc) for w in weights), f"t^{tuple(weights)}")


def monomial_arc_family(nvars: int, max_weight: int = 6, trunc: int = 128) -> List[Arc]:
    return [monomial_arc(w, trunc) for w in itertools.product(range(max_weight + 1), repeat=nvars) if any(w)]


# --- integrality of elements ------------------------------------------------------


def element_integral(f_num: Polynomial, f_den: Polynomial, A_defining: Optional[Ideal] = None,
                     bounds: SearchBounds = DEFAULT_BOUNDS) -> Union[Proved, Unknown]:
    """Search c_i of degree <= d_max with num^n + sum c_i den^i num^(n-i) in A_defining."""
    if f_den.is_zero():
        raise ZeroDivisionError("zero denominator")
    defining = A_defining if A_defining is not None else Ideal.zero(f_num.gens)
    basis = defining.basis
    std = standard_monomials(basis, len(f_num.gens), bounds.max_cofactor_degree)
    num, den = _nf(basis, f_num), _nf(basis, f_den)
    for n in range(1, bounds.max_relation_degree + 1):
        npow = [num.one()]
        dpow = [den.one()]
        for _ in range(n):
            npow.append(_nf(basis, npow[-1] * num))
            dpow.append(_nf(basis, dpow[-1] * den))
        cands = []
        for i in range(n, 0, -1):
            base = _nf(basis, dpow[i] * npow[n - i])
            if base.is_zero():
                continue
            for m in std:
                col = _nf(basis, base.mul_term(m))
                if not col.is_zero():
                    cands.append(((i, m), col))
        cands.sort(key=lambda c: (sum(c[0][1]), -c[0][0], GREVLEX.key()(c[0][1])))
        sol = _solve_relation(npow[n], cands) if cands else (None if npow[n] else [])
        if sol is None:
            continue
        coeffs = [Polynomial(f_num.gens) for _ in range(n)]
        for (i, m), v in sol:
            coeffs[i - 1] = coeffs[i - 1] + Polynomial.monomial(f_num.gens, m, v)
        rel = IntegralityRelation(n, tuple(coeffs))
        assert defining.contains(rel.relation(f_num, f_den))
        return Proved(rel)
    return Unknown(bounds)


# --- blow-up charts ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Chart:
    ring: PresentedRing
    index: int
    new_variables: Tuple[str, ...]
    generator: Polynomial  # p_i, in the chart ambient


def blowup_charts(A: PresentedRing, ideal: Ideal) -> List[Chart]:
    """Affine charts of the blow-up of Spec A along <p_1..p_n>: A[p_j/p_i], saturated by p_i."""
    gens = list(ideal.generators)
    if ideal.gens != A.variables:
        raise ValueError("ideal must live in the ring's ambient")
    for g in gens:
        if A.reduce(g).is_zero():
            raise ZeroGenerator(f"{g} vanishes in the ring")
    charts = []
    for i, pi in enumerate(gens):
        names, taken = [], list(A.variables)
        for j in range(len(gens)):
            if j != i:
                u = fresh_name(f"u{j}", taken)
                taken.append(u)
                names.append(u)
        amb = A.variables + tuple(names)
        pe = pi.embed(amb)
        rels = [g.embed(amb) for g in A.defining.generators if not g.is_zero()]
        k = 0
        for j, pj in enumerate(gens):
            if j == i:
                continue
            rels.append(pj.embed(amb) - Polynomial.var(amb, names[k]) * pe)
            k += 1
        sat = saturate(Ideal(rels, amb), pe)
        charts.append(Chart(PresentedRing(amb, sat, name=f"chart{i}"), i, tuple(names), pe))
    return charts


def chart_morphism(A: PresentedRing, chart: Chart):
    """The structure map A -> chart ring (identity on A's variables)."""
    return make_morphism(A, chart.ring, [chart.ring.var(v) for v in A.variables])


def chart_member(p: Polynomial, ideal: Ideal, chart: Chart, i: Optional[int] = None) -> bool:
    """p in <p_i> inside the chart ring; on a non-normal chart a False is inconclusive."""
    if i is not None and i != chart.index:
        raise ValueError(f"chart {chart.index} is not chart {i}")
    amb = chart.ring.variables
    return (chart.ring.defining + Ideal([chart.generator], amb)).contains(p.embed(amb))
