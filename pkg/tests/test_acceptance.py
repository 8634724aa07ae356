"""Acceptance criteria 1-10, each within its time budget.

Every test prints (and records for the terminal summary) one line of the form
``criterion N: PASS|FAIL (seconds) detail``.
"""

import functools
import math
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from lipsat.arcs import TruncationInsufficient
from lipsat.closure import (
    IntegralCertificate,
    PointWitness,
    Proved,
    Refuted,
    SearchBounds,
    Unknown,
    arc_refute,
    certificate_search,
    check_point_witness,
    element_integral,
    find_point_witness,
    monomial_arc_family,
    newton_member,
    verify_certificate,
)
from lipsat.corpus import (
    all_examples,
    node_minus_point,
    node_normalization,
    quartic_quintic,
    triple_line,
    triple_line_corrected_certificate,
    triple_line_printed_certificate,
)
from lipsat.ideal import Ideal, ideal_member, ideal_member_trace
from lipsat.poly import Polynomial
from lipsat.sampler import sample_lipschitz_ratio
from lipsat.saturation import (
    SaturationQuery,
    adjoin_element,
    chain_report,
    lipschitz_member,
    query_arcs,
    saturation_member,
    saturation_witness,
    tensor_of,
)
from lipsat.variety import PresentedRing, make_morphism


def criterion(number, budget):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            t0 = time.perf_counter()
            detail, ok = "", False
            try:
                detail = fn(*a, **kw) or ""
                ok = True
            except BaseException as e:
                detail = f"{type(e).__name__}: {e}".splitlines()[0][:160]
                raise
            finally:
                dt = time.perf_counter() - t0
                if ok and dt >= budget:
                    ok = False
                    detail += f" (over budget {budget}s)"
                line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} ({dt:.2f}s) {detail}"
                ACCEPTANCE_LINES[number] = line
                print(line)
            assert dt < budget, f"took {dt:.1f}s, budget {budget}s"
        return run
    return wrap


@criterion(1, 10)
def test_c01_node_minus_point_members():
    ex = node_minus_point()
    t = tensor_of(ex.morphism)
    combined = Ideal(list(t.phi_kernel.generators) + list(t.ring.defining.generators), t.ring.variables)
    for name in ("y", "z"):
        z = t.diff(ex.elements[name])
        assert ideal_member(z, combined), name
        v = lipschitz_member(ex.query(name))
        assert isinstance(v, Proved) and v.certificate.n == 1, name
        assert verify_certificate(z, t.phi_kernel, t.ring.defining, v.certificate)
    return "diff(y), diff(z) in the kernel ideal; both proved at n = 1"


@criterion(2, 5)
def test_c02_node_normalization_not_saturated():
    ex = node_normalization()
    q = ex.query("y", witnesses=((0, 1, 0, -1),))
    assert saturation_member(q) is False
    w = saturation_witness(q)
    assert w.point == (0, 1, 0, -1)
    assert all(v == 0 for v in w.generator_values) and w.target_value == 2
    t = tensor_of(ex.morphism)
    relations = list(t.phi_kernel.generators) + list(t.ring.defining.generators)
    assert check_point_witness(PointWitness((0, 1, 0, -1), (), 2), t.diff(ex.elements["y"]), relations)
    # the lattice scan finds a witness on its own as well
    assert find_point_witness(t.diff(ex.elements["y"]), relations) is not None
    return "refuted by (x1, y1, x2, y2) = (0, 1, 0, -1), target value 2"


@criterion(3, 5)
def test_c03_quartic_quintic_positive():
    ex = quartic_quintic()
    t = tensor_of(ex.morphism)
    z = t.diff(ex.elements["y6"])
    v = lipschitz_member(ex.query("y6"))
    assert isinstance(v, Proved) and v.certificate.n == 1
    tr = ideal_member_trace(z, t.phi_kernel)
    assert tr.member
    total = sum((c * g for c, g in zip(tr.generator_cofactors, t.phi_kernel.generators)), z.zero())
    assert total == z
    # the hand identity with cofactors (y1 + y2) and -y1*y2
    y1, y2 = (Polynomial.var(z.gens, v) for v in z.gens)
    g4, g5 = t.phi_kernel.generators
    assert (y1 + y2) * g5 - y1 * y2 * g4 == z
    return "y^6 proved at n = 1 with a verified reduction trace"


@criterion(4, 5)
def test_c04_quartic_quintic_negative():
    ex = quartic_quintic()
    q = ex.query("y")
    v = lipschitz_member(q)
    assert isinstance(v, Refuted)
    w = v.witness
    assert w.arc.label == "o(t), o(0)"
    assert (w.target_order, w.ideal_order) == (1, 4) and not w.ideal_order_is_bound
    r = chain_report(q)
    assert r.in_saturation is True
    assert isinstance(r.integral_over_A, Proved)
    from lipsat.saturation import integral_over
    dep = integral_over(ex.morphism, ex.elements["y"])
    A = ex.morphism.source
    assert dep.certificate.n == 4
    assert dep.certificate.coefficients == (A.poly("0"), A.poly("0"), A.poly("0"), A.poly("-x"))
    assert dep.certificate.relation(ex.morphism, ex.elements["y"]).is_zero()
    return "y refuted on arc (t, 0) with orders 1 < 4; saturated and integral (z^4 - x = 0)"


@criterion(5, 60)
def test_c05_triple_line_certificate():
    t, f, (a, b), (X, Y, g) = triple_line_printed_certificate()
    z = t.diff(f)
    search = certificate_search(z, t.phi_kernel, t.ring.defining)
    assert isinstance(search, Proved) and search.certificate.n <= 2
    _, _, (ca, cb), _ = triple_line_corrected_certificate()
    assert t.ring.defining.contains(z * z + ca * z + cb)
    one = Polynomial.constant(z.gens, 1)
    # a = g*Y + X in I, b = g*X*Y in I^2, written against the generators (X, Y)
    printed = IntegralCertificate(2, (((one, (0,)), (g, (1,))), ((g, (0, 1)),)))
    assert printed.relation(z, t.phi_kernel.generators) == z * z + a * z + b
    assert verify_certificate(z, t.phi_kernel, t.ring.defining, printed), (
        "printed (a, b) does not satisfy the relation; the corrected a = -(X + g^2 Y), b = g^2 X Y does")
    return "printed certificate verifies; search finds n <= 2"


@criterion(6, 5)
def test_c06_node_integrality():
    ex = node_minus_point()
    A = ex.morphism.source
    v = element_integral(A.poly("y"), A.poly("x"), A.defining)
    assert isinstance(v, Proved) and v.certificate.n == 2
    assert v.certificate.coefficients == (A.poly("0"), A.poly("-x - 1"))
    assert A.defining.contains(v.certificate.relation(A.poly("y"), A.poly("x")))
    return "y/x satisfies f^2 - x - 1 = 0"


def _random_monomial_instance(rng):
    n = rng.randint(1, 3)
    gens = ("x", "y", "z")[:n]
    exps = {tuple(rng.randint(0, 4) for _ in range(n)) for _ in range(rng.randint(1, 3))}
    exps = sorted(e for e in exps if any(e)) or [(1,) * n]
    target = tuple(rng.randint(0, 4) for _ in range(n))
    ideal = Ideal([Polynomial.monomial(gens, e) for e in exps], gens)
    return ideal, Polynomial.monomial(gens, target)


@criterion(7, 600)
def test_c07_monomial_oracle_equivalence():
    rng = random.Random(20240607)
    bounds = SearchBounds(6, 8)
    families = {n: monomial_arc_family(n) for n in (1, 2, 3)}
    total = contradictions = unknown = 0
    for _ in range(200):
        ideal, z = _random_monomial_instance(rng)
        oracle = newton_member(z, ideal)
        proved = isinstance(certificate_search(z, ideal, None, bounds), Proved)
        try:
            refuted = isinstance(arc_refute(z, ideal, None, families[len(z.gens)]), Refuted)
        except TruncationInsufficient:
            refuted = False
        total += 1
        if (proved and not oracle) or (refuted and oracle) or (proved and refuted):
            contradictions += 1
        if not proved and not refuted:
            unknown += 1
    assert total >= 200
    assert contradictions == 0
    assert unknown <= 0.05 * total
    return f"{total} instances, {contradictions} contradictions, {unknown} unknown"


def _monomial_curves(rng, count):
    """Random dominant maps Q[x, y]/ker -> Q[t], t -> (t^a, t^b), with targets t^k."""
    out = []
    B = PresentedRing.from_strings(["t"], [], "B")
    while len(out) < count:
        a, b = rng.randint(2, 5), rng.randint(2, 6)
        if math.gcd(a, b) != 1:
            continue
        free = PresentedRing.from_strings(["x", "y"])
        kernel = make_morphism(free, B, [f"t^{a}", f"t^{b}"]).kernel
        A = PresentedRing(["x", "y"], kernel, "A")
        m = make_morphism(A, B, [f"t^{a}", f"t^{b}"])
        out.append((m, B.poly(f"t^{rng.randint(1, 8)}")))
    return out


def _independent_verdicts(q):
    t = tensor_of(q.morphism)
    z = t.diff(q.element)
    cert = certificate_search(z, t.phi_kernel, t.ring.defining, q.bounds)
    try:
        arc = arc_refute(z, t.phi_kernel, t.ring.defining, query_arcs(q))
    except TruncationInsufficient:
        arc = None
    point = saturation_witness(q, box=1)
    return cert, arc, point


@criterion(8, 300)
def test_c08_soundness_and_chain():
    rng = random.Random(8)
    queries = [ex.query(name) for ex in all_examples() for name in ex.elements]
    queries += [SaturationQuery(m, f, branches=()) for m, f in _monomial_curves(rng, 12)]
    violations = []
    for q in queries:
        cert, arc, point = _independent_verdicts(q)
        proved = isinstance(cert, Proved)
        if proved and (isinstance(arc, Refuted) or point is not None):
            violations.append(("both", q.element))
        v = lipschitz_member(q)
        if isinstance(v, Proved) and not saturation_member(q):
            violations.append(("chain", q.element))
        r = chain_report(q)  # raises on any ordering violation
        if r.in_A and not isinstance(r.in_lipschitz, Proved):
            violations.append(("in A", q.element))
    assert violations == []
    return f"{len(queries)} queries, 0 violations"


@criterion(9, 300)
def test_c09_idempotence():
    checked = regressions = 0
    for ex in all_examples():
        proved = [n for n in ex.elements if isinstance(lipschitz_member(ex.query(n)), Proved)]
        for p in proved:
            m2 = adjoin_element(ex.morphism, ex.elements[p], name="w")
            for n in proved:
                v = lipschitz_member(SaturationQuery(m2, ex.elements[n], branches=tuple(ex.branches)))
                checked += 1
                if not isinstance(v, Proved):
                    regressions += 1
    assert checked > 0 and regressions == 0
    return f"{checked} re-checked verdicts, 0 regressions"


@criterion(10, 30)
def test_c10_sampler_concordance():
    ex = quartic_quintic()
    bad = sample_lipschitz_ratio(ex.query("y"))
    good = sample_lipschitz_ratio(ex.query("y6"))
    assert bad.verdict_hint == "diverging"
    assert abs(bad.growth_exponent_estimate - 3.0) <= 0.5
    assert good.verdict_hint == "bounded"
    return (f"y: diverging, exponent {bad.growth_exponent_estimate:.2f}; "
            f"y^6: bounded, exponent {good.growth_exponent_estimate:.2f}")
