from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mhpoly.poly import MHPolynomial, RationalPoint

exponents = st.tuples(st.integers(0, 6), st.integers(0, 4), st.integers(0, 4))
polys = st.dictionaries(exponents, st.integers(1, 50), max_size=6).map(MHPolynomial)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)
nonneg_rationals = st.fractions(min_value=0, max_value=3, max_denominator=7)
points = st.builds(RationalPoint, rationals, rationals, rationals)


def naive_mul(P, Q):
    """Term-by-term convolution kept separate from the library's mul."""
    out = {}
    for (k1, a1, b1), c1 in P.items():
        for (k2, a2, b2), c2 in Q.items():
            key = (k1 + k2, a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def naive_eval(P, t, u, v):
    return sum((Fraction(c) * Fraction(t) ** k * Fraction(u) ** a * Fraction(v) ** b
                for (k, a, b), c in P.items()), Fraction(0))


@pytest.fixture
def P1_mh():
    return MHPolynomial({(0, 0, 0): 1, (2, 1, 1): 1})


@pytest.fixture
def P1_mh_pi():
    return MHPolynomial({(2, 1, 1): 1, (3, 2, 2): 1})


# acceptance criteria outcomes, filled in by test_acceptance and echoed in the summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
