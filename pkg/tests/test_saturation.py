import pytest
from hypothesis import given, settings, strategies as st

from lipsat.arcs import Branch, Series, TruncationInsufficient, standard_arc_family
from lipsat.closure import Inconclusive, PointWitness, Proved, Refuted, Unknown, arc_refute, certificate_search
from lipsat.corpus import (
    all_examples,
    cusp,
    node_minus_point,
    node_normalization,
    quartic_quintic,
    triple_line,
)
from lipsat.poly import Polynomial
from lipsat.saturation import (
    NotDominant,
    SaturationQuery,
    adjoin_free_variable,
    chain_report,
    constant_on_fibers,
    integral_over,
    lipschitz_member,
    lipschitz_seminormalization_member,
    saturation_member,
    seminormalization_member,
    tensor_of,
)
from lipsat.variety import PresentedRing, diff_element, make_morphism

CORPUS = all_examples()
CASES = [(ex, name) for ex in CORPUS for name in ex.elements]


def test_lipschitz_examples():
    v = lipschitz_member(node_minus_point().query("y"))
    assert isinstance(v, Proved) and v.certificate.n == 1
    q = quartic_quintic()
    v = lipschitz_member(q.query("y6"))
    assert isinstance(v, Proved) and v.certificate.n == 1
    v = lipschitz_member(q.query("y"))
    assert isinstance(v, Refuted)
    assert v.witness.arc.label == "o(t), o(0)"


def test_saturation_examples():
    assert not saturation_member(node_normalization().query("y"))
    assert saturation_member(node_minus_point().query("z"))
    ex = node_normalization()
    assert saturation_member(SaturationQuery(ex.morphism, ex.morphism.images[1]))


def test_seminormalization_examples():
    q = quartic_quintic()
    v = seminormalization_member(q.query("y"))
    assert isinstance(v, Proved) and v.certificate.n == 4
    assert v.certificate.coefficients[-1] == q.morphism.source.poly("-x")
    v = seminormalization_member(node_normalization().query("y"))
    assert isinstance(v, Refuted)
    ex = node_normalization()
    assert isinstance(seminormalization_member(ex.query("xy")), Proved)


def test_lipschitz_seminormalization_examples():
    ex = node_minus_point()
    v = lipschitz_seminormalization_member(ex.query("z"))
    assert isinstance(v, Refuted)  # declared non-integrality, the Lipschitz side is proved
    assert isinstance(lipschitz_member(ex.query("z")), Proved)
    bare = SaturationQuery(ex.morphism, ex.elements["z"])
    assert isinstance(lipschitz_seminormalization_member(bare), Unknown)
    assert isinstance(lipschitz_seminormalization_member(quartic_quintic().query("y6")), Proved)
    assert isinstance(lipschitz_seminormalization_member(quartic_quintic().query("y5")), Proved)


def test_constant_on_fibers_examples():
    ex = node_normalization()
    B = ex.morphism.target
    assert not constant_on_fibers(ex.morphism, B.poly("y"))
    assert constant_on_fibers(ex.morphism, B.poly("x"))
    assert constant_on_fibers(quartic_quintic().morphism, quartic_quintic().elements["y"])


def test_chain_reports():
    q = quartic_quintic()
    r = chain_report(q.query("y6"))
    assert (r.in_A, r.in_lipschitz.status, r.in_saturation, r.integral_over_A.status) == (
        False, "proved", True, "proved")
    r = chain_report(q.query("y"))
    assert (r.in_A, r.in_lipschitz.status, r.in_saturation, r.integral_over_A.status) == (
        False, "refuted", True, "proved")
    r = chain_report(q.query("y5"))
    assert (r.in_A, r.in_lipschitz.status, r.in_saturation, r.integral_over_A.status) == (
        True, "proved", True, "proved")
    assert r.preimage == q.morphism.source.poly("y")


def test_integral_over_without_representation():
    q = quartic_quintic()
    v = integral_over(q.morphism, q.elements["y"])
    assert isinstance(v, Proved) and v.certificate.n == 4
    assert v.certificate.relation(q.morphism, q.elements["y"]).is_zero()


def test_non_dominant_morphisms_are_rejected():
    A = PresentedRing.from_strings(["x", "y"])
    B = PresentedRing.from_strings(["t"])
    m = make_morphism(A, B, ["t^2", "t^3"])
    with pytest.raises(NotDominant):
        lipschitz_member(SaturationQuery(m, B.poly("t")))


@pytest.mark.parametrize("ex,name", CASES, ids=[f"{e.name}:{n}" for e, n in CASES])
def test_corpus_expectations_and_chain(ex, name):
    q = ex.query(name)
    r = chain_report(q)
    exp = ex.expected[name]
    assert r.in_lipschitz.status == exp["lipschitz"]
    assert r.in_saturation == exp["saturation"]
    if isinstance(r.in_lipschitz, Proved):
        assert r.in_saturation


def _proved(ex):
    return [n for n in ex.elements if isinstance(lipschitz_member(ex.query(n)), Proved)]


@pytest.mark.parametrize("ex", CORPUS, ids=[e.name for e in CORPUS])
def test_sums_and_products_of_members_are_never_refuted(ex):
    names = _proved(ex)
    t = tensor_of(ex.morphism)
    arcs = standard_arc_family(t, ex.branches)
    for a in names:
        for b in names:
            p, q = ex.elements[a], ex.elements[b]
            for f in (p + q, p * q):
                try:
                    r = arc_refute(diff_element(t, f), t.phi_kernel, t.ring.defining, arcs)
                except TruncationInsufficient:
                    continue
                assert isinstance(r, Inconclusive)


def _lift_branch(b: Branch, ring: PresentedRing) -> Branch:
    return Branch(b.name, ring, b.components + (Series({}),))


@pytest.mark.parametrize("ex", [node_minus_point(), node_normalization(), quartic_quintic(), cusp()],
                         ids=lambda e: e.name)
def test_free_variable_stability(ex):
    m2 = adjoin_free_variable(ex.morphism)
    B2 = m2.target
    branches = tuple(_lift_branch(b, B2) for b in ex.branches)
    for name, f in ex.elements.items():
        before = lipschitz_member(ex.query(name))
        after = lipschitz_member(SaturationQuery(m2, f.embed(B2.variables), branches=branches))
        if isinstance(before, (Proved, Refuted)):
            assert type(after) is type(before), name


@pytest.mark.parametrize("ex,name", CASES, ids=[f"{e.name}:{n}" for e, n in CASES])
def test_swap_invariance(ex, name):
    t = tensor_of(ex.morphism)
    z = diff_element(t, ex.elements[name])
    swapped_kernel = type(t.phi_kernel)([t.swap(g) for g in t.phi_kernel.generators], t.ring.variables)
    a = certificate_search(z, t.phi_kernel, t.ring.defining)
    b = certificate_search(t.swap(z), swapped_kernel, t.ring.defining)
    assert a.status == b.status
