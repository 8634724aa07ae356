import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from lipsat.poly import Polynomial

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, gens, max_degree=6, max_terms=5):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        budget = draw(st.integers(0, max_degree))
        e = []
        for _ in gens:
            k = draw(st.integers(0, budget))
            e.append(k)
            budget -= k
        terms[tuple(draw(st.permutations(e)))] = draw(small_rationals)
    return Polynomial(gens, terms)


def points(n):
    return st.lists(small_rationals, min_size=n, max_size=n)


# acceptance criteria record one line each; printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
