"""Membership in the Lipschitz saturation, saturation and seminormalization of A in B.

Every predicate works on the tensor square B (x) B of a dominant morphism
pi^* : A -> B and on the target b (x) 1 - 1 (x) b of an element b of B.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arcs import Arc, Branch, TruncationInsufficient, standard_arc_family
from .closure import (
    DEFAULT_BOUNDS,
    DeclaredWitness,
    MembershipVerdict,
    PointWitness,
    Proved,
    Refuted,
    SearchBounds,
    Unknown,
    _solve_relation,
    arc_refute,
    certificate_search,
    element_integral,
    find_point_witness,
    standard_monomials,
)
from .ideal import Ideal, fresh_name, radical_member
from .poly import GREVLEX, Polynomial
from .variety import (
    PresentedRing,
    RingMorphism,
    TensorSquare,
    diff_element,
    make_morphism,
    tensor_square,
)


class NotDominant(ValueError):
    pass


class InconsistentChain(AssertionError):
    """Raised when the inclusion chain A c A^L_B c saturation is violated (a soundness bug)."""


@dataclass(frozen=True)
class RadicalWitness:
    """1 is not in I + <1 - w z>: z is not in the radical, decided by a Groebner basis."""

    target: Polynomial
    point: Optional[PointWitness] = None


@dataclass(frozen=True)
class IntegralDependence:
    """b^n + pi^*(c_1) b^(n-1) + ... + pi^*(c_n) = 0 with c_i in the source ring."""

    n: int
    coefficients: Tuple[Polynomial, ...]

    def relation(self, m: RingMorphism, b: Polynomial) -> Polynomial:
        rel = b ** self.n
        for i, c in enumerate(self.coefficients, 1):
            if not c.is_zero():
                rel = rel + m(c) * b ** (self.n - i)
        return rel


@dataclass(frozen=True, eq=False)
class SaturationQuery:
    morphism: RingMorphism
    element: Polynomial
    bounds: SearchBounds = DEFAULT_BOUNDS
    arcs: Optional[Sequence[Arc]] = None
    witnesses: Sequence[Sequence] = ()
    branches: Sequence[Branch] = ()
    arc_mode: str = "standard"  # "standard" | "none"
    representation: Optional[Tuple[Polynomial, Polynomial]] = None  # (num, den) over the source
    non_integral: Optional[str] = None  # caller-declared reason the element is not integral
    point_box: int = 1


@dataclass(frozen=True)
class ChainReport:
    in_A: bool
    in_lipschitz: MembershipVerdict
    in_saturation: bool
    integral_over_A: MembershipVerdict
    preimage: Optional[Polynomial] = None


def tensor_of(m: RingMorphism) -> TensorSquare:
    t = m.__dict__.get("_tensor")
    if t is None:
        t = tensor_square(m)
        m.__dict__["_tensor"] = t
    return t


def _require_dominant(m: RingMorphism):
    if not m.dominant:
        raise NotDominant("pi^* is not injective: the morphism is not dominant")


def _target(q: SaturationQuery) -> Tuple[TensorSquare, Polynomial]:
    _require_dominant(q.morphism)
    t = tensor_of(q.morphism)
    return t, diff_element(t, q.element)


def query_arcs(q: SaturationQuery) -> List[Arc]:
    if q.arcs is not None:
        return list(q.arcs)
    if q.arc_mode == "standard" and q.branches:
        return standard_arc_family(tensor_of(q.morphism), q.branches)
    return []


def lipschitz_member(q: SaturationQuery) -> MembershipVerdict:
    """Point witnesses, then arcs, then the certificate search; first conclusive answer wins."""
    t, z = _target(q)
    relations = list(t.phi_kernel.generators) + list(t.ring.defining.generators)
    w = find_point_witness(z, relations, supplied=q.witnesses, box=q.point_box,
                           max_points=20_000 if q.point_box else 0)
    if w is not None:
        return Refuted(w)
    arcs = query_arcs(q)
    if arcs:
        try:
            r = arc_refute(z, t.phi_kernel, t.ring.defining, arcs)
        except TruncationInsufficient:
            r = None
        if isinstance(r, Refuted):
            return r
    v = certificate_search(z, t.phi_kernel, t.ring.defining, q.bounds)
    if isinstance(v, Unknown):
        return Unknown(q.bounds, len(arcs), "no certificate within bounds and no refuting arc")
    return v


def saturation_member(q: SaturationQuery) -> bool:
    t, z = _target(q)
    return radical_member(z, t.total)


def saturation_witness(q: SaturationQuery, box: int = 2) -> Optional[PointWitness]:
    t, z = _target(q)
    relations = list(t.phi_kernel.generators) + list(t.ring.defining.generators)
    return find_point_witness(z, relations, supplied=q.witnesses, box=box)


def constant_on_fibers(m: RingMorphism, p: Polynomial) -> bool:
    """p(y1) = p(y2) whenever pi(y1) = pi(y2), as radical membership on the tensor square."""
    return saturation_member(SaturationQuery(m, p))


def in_image(m: RingMorphism, b: Polynomial) -> Optional[Polynomial]:
    """A preimage of b under pi^*, or None."""
    return m.preimage(b)


def integral_over(m: RingMorphism, b: Polynomial, bounds: SearchBounds = DEFAULT_BOUNDS):
    """Monic relation for b with coefficients pulled back from the source."""
    A, B = m.source, m.target
    abasis = A.defining.basis
    bbasis = B.defining.basis
    std = standard_monomials(abasis, len(A.variables), bounds.max_cofactor_degree)
    pulled = [m(Polynomial.monomial(A.variables, e)) for e in std]
    b = bbasis.normal_form(b)
    for n in range(1, bounds.max_relation_degree + 1):
        bp = [b.one()]
        for _ in range(n):
            bp.append(bbasis.normal_form(bp[-1] * b))
        cands = []
        for i in range(n, 0, -1):
            for e, pe in zip(std, pulled):
                col = bbasis.normal_form(pe * bp[n - i])
                if not col.is_zero():
                    cands.append(((i, e), col))
        cands.sort(key=lambda c: (sum(c[0][1]), -c[0][0], GREVLEX.key()(c[0][1])))
        sol = _solve_relation(bp[n], cands) if cands else (None if bp[n] else [])
        if sol is None:
            continue
        coeffs = [Polynomial(A.variables) for _ in range(n)]
        for (i, e), v in sol:
            coeffs[i - 1] = coeffs[i - 1] + Polynomial.monomial(A.variables, e, v)
        dep = IntegralDependence(n, tuple(coeffs))
        assert B.defining.contains(dep.relation(m, b))
        return Proved(dep)
    return Unknown(bounds)


class InconsistentRepresentation(ValueError):
    pass


def integrality(q: SaturationQuery) -> MembershipVerdict:
    m = q.morphism
    if q.representation is not None:
        num, den = q.representation
        if not m.target.defining.contains(m(num) - q.element * m(den)):
            raise InconsistentRepresentation(f"pi^*({num}) != b * pi^*({den}) in the target")
        v = element_integral(num, den, m.source.defining, q.bounds)
    else:
        v = integral_over(m, q.element, q.bounds)
    if isinstance(v, Unknown) and q.non_integral:
        return Refuted(DeclaredWitness(q.non_integral))
    return v


def seminormalization_member(q: SaturationQuery) -> MembershipVerdict:
    if not saturation_member(q):
        return Refuted(RadicalWitness(_target(q)[1], saturation_witness(q)))
    integ = integrality(q)
    if isinstance(integ, (Proved, Refuted)):
        return integ
    return Unknown(q.bounds, note="integrality not established within bounds")


def lipschitz_seminormalization_member(q: SaturationQuery) -> MembershipVerdict:
    integ = integrality(q)
    if isinstance(integ, Refuted):
        return integ
    lip = lipschitz_member(q)
    if isinstance(lip, Refuted):
        return lip
    if isinstance(integ, Proved) and isinstance(lip, Proved):
        return Proved((integ.certificate, lip.certificate))
    return Unknown(q.bounds, note="integrality or Lipschitz membership not settled")


def chain_report(q: SaturationQuery) -> ChainReport:
    pre = in_image(q.morphism, q.element)
    lip = lipschitz_member(q)
    sat = saturation_member(q)
    integ = integrality(q)
    report = ChainReport(pre is not None, lip, sat, integ, pre)
    check_chain(report)
    return report


def check_chain(r: ChainReport) -> None:
    if r.in_A and not isinstance(r.in_lipschitz, Proved):
        raise InconsistentChain("element of A not certified in the Lipschitz saturation")
    if isinstance(r.in_lipschitz, Proved) and not r.in_saturation:
        raise InconsistentChain("Lipschitz member outside the saturation")
    if r.in_A and isinstance(r.integral_over_A, Refuted):
        raise InconsistentChain("element of A refuted as non-integral")


# --- ring extensions used by the invariance properties ------------------------


def adjoin_element(m: RingMorphism, b: Polynomial, name: str = "w") -> RingMorphism:
    """A[b] -> B: the source gains a variable mapped to b, with the relations it satisfies."""
    A, B = m.source, m.target
    w = fresh_name(name, A.variables)
    src_vars = A.variables + (w,)
    images = list(m.images) + [b]
    # kernel of Q[src_vars] -> B
    probe = PresentedRing(src_vars, Ideal.zero(src_vars))
    kern = make_morphism(probe, B, images).kernel
    new_source = PresentedRing(src_vars, kern, name=A.name)
    return make_morphism(new_source, B, images)


def adjoin_free_variable(m: RingMorphism, name: str = "s") -> RingMorphism:
    """A[s] -> B[s] extending pi^* by s -> s."""
    A, B = m.source, m.target
    s = fresh_name(name, A.variables + B.variables)
    A2 = A.adjoin_variables([s])
    B2 = B.adjoin_variables([s])
    images = [im.embed(B2.variables) for im in m.images] + [B2.var(s)]
    return make_morphism(A2, B2, images)


def extend_point(point: Sequence, m: RingMorphism, value=0) -> Tuple:
    """Extend a tensor-square point of m to the tensor square of adjoin_free_variable(m)."""
    n = len(m.target.variables)
    point = list(point)
    return tuple(point[:n] + [value] + point[n:] + [value])
