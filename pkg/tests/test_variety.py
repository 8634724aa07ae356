import pytest
from hypothesis import given

from conftest import polynomials
from lipsat.corpus import node_minus_point, node_normalization, quartic_quintic
from lipsat.ideal import Ideal, ideal_equal
from lipsat.poly import parse_poly
from lipsat.variety import (
    IllDefinedMorphism,
    PresentedRing,
    diff_element,
    identity_morphism,
    is_dominant,
    make_morphism,
    tensor_square,
)


def test_node_morphism_is_well_defined():
    A = PresentedRing.from_strings(["x", "y"], ["y^2 - x^2*(x+1)"])
    B = PresentedRing.from_strings(["x", "y"], ["y^2 - x - 1"])
    m = make_morphism(A, B, ["x", "x*y"])
    assert m(A.poly("y^2 - x^2*(x+1)")) == B.poly("x^2*y^2 - x^3 - x^2")
    assert is_dominant(m)


def test_ill_defined_morphism():
    A = PresentedRing.from_strings(["x"], ["x^2"])
    B = PresentedRing.from_strings(["x"])
    with pytest.raises(IllDefinedMorphism) as err:
        make_morphism(A, B, ["x"])
    assert err.value.normal_form == B.poly("x^2")


def test_dominance_examples():
    assert is_dominant(node_minus_point().morphism)
    Q = PresentedRing.from_strings(["x"])
    point = PresentedRing.from_strings([])
    assert not make_morphism(Q, point, [parse_poly("0", ())]).dominant
    assert is_dominant(identity_morphism(Q))


def test_kernel_of_the_cusp_parametrization():
    free = PresentedRing.from_strings(["x", "y"])
    line = PresentedRing.from_strings(["t"])
    m = make_morphism(free, line, ["t^2", "t^3"])
    assert ideal_equal(m.kernel, Ideal([free.poly("y^2 - x^3")], ("x", "y")))
    assert not m.dominant


def test_tensor_square_kernels():
    t = tensor_square(quartic_quintic().morphism)
    assert [str(g) for g in t.kernel_generators] == ["y_1^4 - y_2^4", "y_1^5 - y_2^5"]
    Q = PresentedRing.from_strings(["x"])
    ti = tensor_square(identity_morphism(Q))
    assert [str(g) for g in ti.kernel_generators] == ["x_1 - x_2"]
    tn = tensor_square(node_normalization().morphism)
    assert [str(g) for g in tn.kernel_generators] == ["x_1 - x_2", "x_1*y_1 - x_2*y_2"]
    assert len(tn.ring.defining.generators) == 2


def test_diff_element_examples():
    ex = quartic_quintic()
    t = tensor_square(ex.morphism)
    B = ex.morphism.target
    assert str(diff_element(t, B.poly("y"))) == "y_1 - y_2"
    assert diff_element(t, B.poly("7")).is_zero()
    assert str(diff_element(t, B.poly("y^6"))) == "y_1^6 - y_2^6"


def test_preimage_detects_subalgebra_membership():
    m = quartic_quintic().morphism
    B = m.target
    assert m.preimage(B.poly("y^9")) == m.source.poly("x*y")
    assert m.preimage(B.poly("y")) is None


def test_composition_stays_well_defined():
    ex = node_normalization()
    B = ex.morphism.target
    C = PresentedRing.from_strings(["s"])
    param = make_morphism(B, C, ["s^2 - 1", "s"])
    comp = ex.morphism.compose(param)
    assert comp.images == (C.poly("s^2 - 1"), C.poly("s^3 - s"))


NODE_T = tensor_square(node_minus_point().morphism)
B_VARS = ("x", "y", "z")


def test_swap_fixes_the_tensor_ring_and_negates_the_kernel():
    t = NODE_T
    swapped = Ideal([t.swap(g) for g in t.ring.defining.generators], t.ring.variables)
    assert ideal_equal(swapped, t.ring.defining)
    for g in t.kernel_generators:
        assert t.swap(g) == -g


@given(polynomials(B_VARS, max_degree=3, max_terms=4), polynomials(B_VARS, max_degree=3, max_terms=4))
def test_derivation_identities(p, q):
    t = NODE_T
    d = lambda f: diff_element(t, f)
    lhs = d(p * q)
    rhs = d(p) * t.first(q) + t.second(p) * d(q)
    assert t.ring.defining.contains(lhs - rhs)
    assert d(p + q) == d(p) + d(q)
    assert t.swap(d(p)) == -d(p)
