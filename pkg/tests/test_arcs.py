import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import small_rationals
from lipsat.arcs import (
    ArcOffVariety,
    AtLeastTruncation,
    Series,
    make_branch,
    pair_arc,
    pullback_order,
    series_compose,
    standard_arc_family,
    substitution_family,
)
from lipsat.corpus import cusp, node_normalization, quartic_quintic
from lipsat.poly import parse_poly
from lipsat.variety import PresentedRing, diff_element, tensor_square

T = Series.t()


def test_compose_examples():
    assert series_compose(parse_poly("y^2 - x^3", ("x", "y")), [T**2, T**3]).is_zero_known()
    assert series_compose(parse_poly("x", ("x",)), [T]) == T
    s = series_compose(parse_poly("y1^5 - y2^5", ("y1", "y2")), [T, Series({})])
    assert s.coeffs == {5: 1}


def test_order_examples():
    assert Series({3: 2, 5: 1}).order() == 3
    assert Series({}, 32).order() == AtLeastTruncation(32)
    g = parse_poly("y1^4 - y2^4", ("y1", "y2"))
    assert series_compose(g, [T, Series({})]).order() == 4


def test_truncation_propagates_through_products():
    a = Series({1: 1}, 5)
    b = Series({2: 1}, 4)
    assert (a * b).trunc == min(5 + 2, 4 + 1)
    assert (a + b).trunc == 4
    # composition: outer known below 5, inner has valuation 2
    assert Series({1: 1}, 5).compose(Series({2: 1}, 40)).trunc == 10


def test_series_inverse():
    s = Series({0: 1, 1: -1}, 10)
    assert (s * s.inverse()).coeffs == {0: 1}


def test_exactly_zero_pullbacks_are_infinite():
    R = PresentedRing.from_strings(["x", "y"], ["y^2 - x^3"])
    assert pullback_order(R.poly("y^2 - x^3"), [T**2, T**3], R.defining.basis) == math.inf


def test_pair_arc_on_the_cusp():
    ex = cusp()
    t = tensor_square(ex.morphism)
    br = make_branch("c", PresentedRing.from_strings(["x", "y"], ["y^2 - x^3"]), ["t^2", "t^3"])
    arc = pair_arc(br, br, T, -T)
    assert [c.coeffs for c in arc.components] == [{2: 1}, {3: 1}, {2: 1}, {3: -1}]
    (b,) = ex.branches
    arc2 = pair_arc(b, b, T, -T, t)
    orders = [series_compose(g, arc2.components).order() for g in t.kernel_generators]
    assert isinstance(orders[0], AtLeastTruncation) and orders[1] == 3


def test_diagonal_arcs_are_flagged_and_vanish_on_the_kernel():
    ex = node_normalization()
    t = tensor_square(ex.morphism)
    b = ex.branches[0]
    arc = pair_arc(b, b, T, T, t)
    assert arc.diagonal
    for g in t.kernel_generators:
        assert series_compose(g, arc.components).is_zero_known()


def test_quartic_quintic_pair_arc():
    ex = quartic_quintic()
    (b,) = ex.branches
    arc = pair_arc(b, b, T, Series({}))
    assert [c.coeffs for c in arc.components] == [{1: 1}, {}]


def test_off_variety_arcs_are_rejected():
    R = PresentedRing.from_strings(["x", "y"], ["y^2 - x^3"])
    with pytest.raises(ArcOffVariety):
        make_branch("bad", R, ["t", "t"])


def test_standard_family_sizes():
    ex = quartic_quintic()
    t = tensor_square(ex.morphism)
    subs = substitution_family()
    # literal enumeration of {(t,0),(t,t),(t,c t^m)}: c t^1 with c = 1 repeats (t,t)
    literal = {(0, 0), (1, 1)} | {(c, m) for c in (1, -1, 2) for m in (1, 2, 3)}
    assert len(subs) == len(literal) == 10
    fam = standard_arc_family(t, ex.branches)
    assert len(fam) == 9
    assert all(not a.diagonal for a in fam)
    only = standard_arc_family(t, ex.branches, max_exp=0, coeffs=())
    assert [a.label for a in only] == ["o(t), o(0)"]


def test_two_branch_family_pins_distinct_preimages():
    ex = node_normalization()
    t = tensor_square(ex.morphism)
    fam = standard_arc_family(t, ex.branches)
    mixed = [a for a in fam if a.label == "p+(t), p-(0)"]
    assert len(mixed) == 1
    assert [c.coeffs.get(0, 0) for c in mixed[0].components] == [0, 1, 0, -1]


series = st.builds(
    lambda d, trunc: Series({k: v for k, v in d.items()}, trunc),
    st.dictionaries(st.integers(0, 8), small_rationals.filter(bool), max_size=5),
    st.integers(10, 20),
)


@given(series, series)
def test_order_is_a_valuation(s, r):
    os_, or_ = s.order(), r.order()
    assume(isinstance(os_, int) and isinstance(or_, int))
    assert (s * r).order() == os_ + or_
    total = (s + r).order()
    if isinstance(total, int):
        assert total >= min(os_, or_)
        if os_ != or_:
            assert total == min(os_, or_)
    else:
        assert os_ == or_


@given(st.integers(1, 3), st.sampled_from([1, -1, 2, Fraction(1, 2)]), st.integers(0, 2))
def test_reparametrization_keeps_branches_on_the_curve(m, c, shift):
    R = PresentedRing.from_strings(["x", "y"], ["y^2 - x^3"])
    br = make_branch("c", R, ["t^2", "t^3"])
    sub = Series({m: c, m + shift + 1: 1})
    br.reparametrize(sub)  # validated on construction


@given(st.sampled_from(["y", "y^2 + 3*y", "y^6 - y"]), st.integers(1, 3))
def test_diagonal_arcs_kill_differences(f, m):
    ex = quartic_quintic()
    t = tensor_square(ex.morphism)
    (b,) = ex.branches
    sub = Series.t(m)
    arc = pair_arc(b, b, sub, sub, t)
    z = diff_element(t, ex.morphism.target.poly(f))
    assert series_compose(z, arc.components).is_zero_known()
