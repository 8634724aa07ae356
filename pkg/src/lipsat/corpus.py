"""The worked examples, as ready-made morphisms, elements and branches.

Each builder returns a fresh ``Example``; nothing is shared between calls so
callers may extend the rings freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .arcs import Branch, Series, make_branch
from .poly import Polynomial
from .saturation import SaturationQuery
from .variety import PresentedRing, RingMorphism, make_morphism


@dataclass
class Example:
    name: str
    morphism: RingMorphism
    elements: Dict[str, Polynomial]
    branches: List[Branch] = field(default_factory=list)
    representations: Dict[str, Tuple[Polynomial, Polynomial]] = field(default_factory=dict)
    non_integral: Dict[str, str] = field(default_factory=dict)
    # expected verdicts: element -> {"lipschitz": ..., "saturation": ...}
    expected: Dict[str, Dict[str, object]] = field(default_factory=dict)

    def query(self, element: str, **kw) -> SaturationQuery:
        return SaturationQuery(
            self.morphism,
            self.elements[element],
            branches=tuple(self.branches),
            representation=self.representations.get(element),
            non_integral=self.non_integral.get(element),
            **kw,
        )


def node_minus_point() -> Example:
    """Node y^2 = x^2(x+1) under its normalization with the point (0, 1) removed."""
    A = PresentedRing.from_strings(["x", "y"], ["y^2 - x^2*(x+1)"], "A")
    B = PresentedRing.from_strings(["x", "y", "z"], ["y^2 - (x+1)", "z*(y-1) - 1"], "B")
    m = make_morphism(A, B, ["x", "x*y"])
    # z = 1/(y-1) = -1/2 * 1/(1 - t/2) near y = -1
    z = Series({k: -Fraction(1, 2 ** (k + 1)) for k in range(32)}, 32)
    br = Branch("p", B, (Series({1: -2, 2: 1}), Series({0: -1, 1: 1}), z))
    return Example(
        "node-minus-point", m,
        {"y": B.poly("y"), "z": B.poly("z"), "x": B.poly("x")},
        [br],
        {"y": (A.poly("y"), A.poly("x"))},
        {"z": "z = 1/(y-1) has a pole over the removed point; not integral over A"},
        {"y": {"lipschitz": "proved", "saturation": True},
         "z": {"lipschitz": "proved", "saturation": True},
         "x": {"lipschitz": "proved", "saturation": True}},
    )


def node_normalization() -> Example:
    """The same node under its full normalization y^2 = x + 1."""
    A = PresentedRing.from_strings(["x", "y"], ["y^2 - x^2*(x+1)"], "A")
    B = PresentedRing.from_strings(["x", "y"], ["y^2 - x - 1"], "B")
    m = make_morphism(A, B, ["x", "x*y"])
    b1 = make_branch("p+", B, ["2*t + t^2", "1 + t"])
    b2 = make_branch("p-", B, ["t^2 - 2*t", "-1 + t"])
    return Example(
        "node-normalization", m,
        {"y": B.poly("y"), "xy": B.poly("x*y")},
        [b1, b2],
        {"y": (A.poly("y"), A.poly("x"))},
        {},
        {"y": {"lipschitz": "refuted", "saturation": False},
         "xy": {"lipschitz": "proved", "saturation": True}},
    )


def quartic_quintic() -> Example:
    """y^4 = x^5 parametrized by x = y^4, y = y^5 on the line."""
    A = PresentedRing.from_strings(["x", "y"], ["y^4 - x^5"], "A")
    B = PresentedRing.from_strings(["y"], [], "B")
    m = make_morphism(A, B, ["y^4", "y^5"])
    return Example(
        "y4-x5", m,
        {"y": B.poly("y"), "y6": B.poly("y^6"), "y5": B.poly("y^5")},
        [make_branch("o", B, ["t"])],
        {"y": (A.poly("y"), A.poly("x")), "y6": (A.poly("y^2"), A.poly("x"))},
        {},
        {"y": {"lipschitz": "refuted", "saturation": True},
         "y6": {"lipschitz": "proved", "saturation": True},
         "y5": {"lipschitz": "proved", "saturation": True}},
    )


def cusp() -> Example:
    """y^2 = x^3 parametrized by (t^2, t^3)."""
    A = PresentedRing.from_strings(["x", "y"], ["y^2 - x^3"], "A")
    B = PresentedRing.from_strings(["t"], [], "B")
    m = make_morphism(A, B, ["t^2", "t^3"])
    return Example(
        "cusp", m,
        {"t": B.poly("t"), "t2": B.poly("t^2")},
        [make_branch("o", B, ["t"])],
        {"t": (A.poly("y"), A.poly("x"))},
        {},
        {"t": {"lipschitz": "refuted", "saturation": True},
         "t2": {"lipschitz": "proved", "saturation": True}},
    )


def triple_line() -> Example:
    """xy(y-x) under its normalization: three disjoint lines, presented with idempotents.

    e1 marks the line y = 0, e2 the line x = 0, and e3 = 1 - e1 - e2 the diagonal.
    """
    A = PresentedRing.from_strings(["x", "y"], ["x*y*(y-x)"], "A")
    B = PresentedRing.from_strings(["t", "e1", "e2"], ["e1^2 - e1", "e2^2 - e2", "e1*e2"], "B")
    m = make_morphism(A, B, ["t*(1-e2)", "t*(1-e1)"])
    lines = [
        Branch("y=0", B, (Series.t(), Series.constant(1), Series({}))),
        Branch("x=0", B, (Series.t(), Series({}), Series.constant(1))),
        Branch("y=x", B, (Series.t(), Series({}), Series({}))),
    ]
    return Example(
        "triple-line", m,
        {"f": B.poly("t*(1-e1-e2)"), "e1": B.poly("e1")},
        lines,
        {"f": (A.poly("2*x*y"), A.poly("x+y"))},
        {},
        {"f": {"lipschitz": "proved", "saturation": True},
         "e1": {"lipschitz": "refuted", "saturation": False}},
    )


def triple_line_printed_certificate(ex: Optional[Example] = None):
    """The printed coefficients a = g Y + X, b = g X Y with g = diff(e3), X = diff(x), Y = diff(y)."""
    from .saturation import tensor_of
    from .variety import diff_element

    ex = ex or triple_line()
    m = ex.morphism
    t = tensor_of(m)
    B = m.target
    g = diff_element(t, B.poly("1 - e1 - e2"))
    X, Y = t.kernel_generators
    return t, ex.elements["f"], (g * Y + X, g * X * Y), (X, Y, g)


def triple_line_corrected_certificate(ex: Optional[Example] = None):
    """Coefficients a = -(X + g^2 Y), b = g^2 X Y, which do satisfy the relation."""
    t, f, _, (X, Y, g) = triple_line_printed_certificate(ex)
    return t, f, (-(X + g * g * Y), g * g * X * Y), (X, Y, g)


BUILDERS: Dict[str, Callable[[], Example]] = {
    "node-minus-point": node_minus_point,
    "node-normalization": node_normalization,
    "y4-x5": quartic_quintic,
    "cusp": cusp,
    "triple-line": triple_line,
}


def all_examples() -> List[Example]:
    return [b() for b in BUILDERS.values()]
