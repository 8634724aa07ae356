"""Presented coordinate rings, morphisms between them, and the tensor square."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple

from .ideal import Ideal, eliminate, fresh_name
from .poly import GREVLEX, Polynomial, block, parse_poly


class IllDefinedMorphism(ValueError):
    def __init__(self, generator: Polynomial, normal_form: Polynomial):
        super().__init__(f"relation {generator} maps to {normal_form} != 0 in the target")
        self.generator = generator
        self.normal_form = normal_form


class PresentedRing:
    """Q[variables] / defining."""

    def __init__(self, variables: Sequence[str], defining: Sequence[Polynomial] | Ideal = (),
                 name: str = ""):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        if not isinstance(defining, Ideal):
            defining = Ideal(list(defining), variables)
        if defining.gens != variables:
            raise ValueError("defining ideal lives in a different ambient")
        self.variables = variables
        self.defining = defining
        self.name = name

    @classmethod
    def from_strings(cls, variables: Sequence[str], relations: Sequence[str] = (), name: str = ""):
        return cls(variables, [parse_poly(r, variables) for r in relations], name)

    def poly(self, text: str) -> Polynomial:
        return parse_poly(text, self.variables)

    def var(self, name: str) -> Polynomial:
        return Polynomial.var(self.variables, name)

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.defining.reduce(f)

    def equal(self, f: Polynomial, g: Polynomial) -> bool:
        return self.defining.contains(f - g)

    def is_zero_ring(self) -> bool:
        return self.defining.is_unit()

    def adjoin_variables(self, names: Sequence[str], relations: Sequence[Polynomial] = ()) -> "PresentedRing":
        gens = self.variables + tuple(names)
        rels = [g.embed(gens) for g in self.defining.generators] + list(relations)
        return PresentedRing(gens, rels, self.name)

    def __repr__(self):
        rels = ", ".join(str(g) for g in self.defining.generators)
        return f"Q[{', '.join(self.variables)}]/({rels})"


def _source_copy_names(source: PresentedRing, target: PresentedRing) -> Tuple[str, ...]:
    taken = list(target.variables)
    out = []
    for v in source.variables:
        n = fresh_name(v + "'", taken)
        taken.append(n)
        out.append(n)
    return tuple(out)


class RingMorphism:
    """pi^* : source -> target, given by the images of the source variables."""

    def __init__(self, source: PresentedRing, target: PresentedRing, images: Sequence[Polynomial]):
        self.source = source
        self.target = target
        self.images = tuple(images)

    def __call__(self, f: Polynomial) -> Polynomial:
        if f.gens != self.source.variables:
            f = f.embed(self.source.variables)
        if not self.images:
            return Polynomial.constant(self.target.variables, f.constant_term())
        return f.substitute(self.images)

    @cached_property
    def _graph(self):
        """Graph ideal in (target vars, source copies), block order eliminating the target."""
        copies = _source_copy_names(self.source, self.target)
        gens = self.target.variables + copies
        rels = [g.embed(gens) for g in self.target.defining.generators]
        rels += [Polynomial.var(gens, c) - im.embed(gens) for c, im in zip(copies, self.images)]
        return Ideal(rels, gens, block(len(self.target.variables))), copies

    @cached_property
    def kernel(self) -> Ideal:
        graph, copies = self._graph
        k = eliminate(graph, len(self.target.variables))
        return Ideal([g.rename(self.source.variables) for g in k.generators], self.source.variables)

    @cached_property
    def dominant(self) -> bool:
        return all(self.source.defining.contains(g) for g in self.kernel.generators)

    def preimage(self, b: Polynomial) -> Optional[Polynomial]:
        """Some a in the source with pi^*(a) = b, or None when b is not in the image."""
        graph, copies = self._graph
        nt = len(self.target.variables)
        nf = graph.reduce(b.embed(graph.gens))
        if any(any(e[:nt]) for e in nf.terms):
            return None
        return Polynomial(self.source.variables, {e[nt:]: c for e, c in nf.terms.items()})

    def compose(self, other: "RingMorphism") -> "RingMorphism":
        """self: A -> B followed by other: B -> C gives A -> C."""
        return make_morphism(self.source, other.target, [other(im) for im in self.images])

    def __repr__(self):
        return f"RingMorphism({self.source!r} -> {self.target!r}; {', '.join(map(str, self.images))})"


def make_morphism(source: PresentedRing, target: PresentedRing, images: Sequence[Polynomial | str]) -> RingMorphism:
    if len(images) != len(source.variables):
        raise ValueError(f"{len(images)} images for {len(source.variables)} source variables")
    ims = []
    for im in images:
        if isinstance(im, str):
            im = target.poly(im)
        elif im.gens != target.variables:
            im = im.embed(target.variables)
        ims.append(im)
    m = RingMorphism(source, target, ims)
    for g in source.defining.generators:
        if g.is_zero():
            continue
        nf = target.reduce(m(g))
        if not nf.is_zero():
            raise IllDefinedMorphism(g, nf)
    return m


def is_dominant(m: RingMorphism) -> bool:
    return m.dominant


def identity_morphism(ring: PresentedRing) -> RingMorphism:
    return RingMorphism(ring, ring, [ring.var(v) for v in ring.variables])


@dataclass(frozen=True, eq=False)
class TensorSquare:
    """B (x) B presented on two copies of the target variables, with ker(phi_B)."""

    morphism: RingMorphism
    ring: PresentedRing
    phi_kernel: Ideal
    copy1: Tuple[str, ...]
    copy2: Tuple[str, ...]
    kernel_generators: Tuple[Polynomial, ...] = ()

    @cached_property
    def total(self) -> Ideal:
        """phi_kernel + defining ideal of the tensor ring."""
        return self.ring.defining + self.phi_kernel

    def first(self, f: Polynomial) -> Polynomial:
        return f.rename(self.copy1).embed(self.ring.variables)

    def second(self, f: Polynomial) -> Polynomial:
        return f.rename(self.copy2).embed(self.ring.variables)

    def swap(self, f: Polynomial) -> Polynomial:
        n = len(self.copy1)
        return Polynomial(self.ring.variables, {e[n:] + e[:n]: c for e, c in f.terms.items()})

    def diff(self, f: Polynomial) -> Polynomial:
        return diff_element(self, f)


def _copy_names(variables: Sequence[str]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    taken = list(variables)
    c1, c2 = [], []
    for v in variables:
        a = fresh_name(f"{v}_1", taken)
        taken.append(a)
        b = fresh_name(f"{v}_2", taken)
        taken.append(b)
        c1.append(a)
        c2.append(b)
    return tuple(c1), tuple(c2)


def tensor_square(m: RingMorphism) -> TensorSquare:
    c1, c2 = _copy_names(m.target.variables)
    gens = c1 + c2
    rels = []
    for g in m.target.defining.generators:
        if g.is_zero():
            continue
        rels.append(g.rename(c1).embed(gens))
        rels.append(g.rename(c2).embed(gens))
    ring = PresentedRing(gens, Ideal(rels, gens), name=f"{m.target.name}^2" if m.target.name else "")
    kern = [im.rename(c1).embed(gens) - im.rename(c2).embed(gens) for im in m.images]
    return TensorSquare(m, ring, Ideal(kern, gens), c1, c2, tuple(kern))


def diff_element(t: TensorSquare, f: Polynomial) -> Polynomial:
    """f (x) 1 - 1 (x) f."""
    if f.gens != t.morphism.target.variables:
        f = f.embed(t.morphism.target.variables)
    return t.first(f) - t.second(f)
