import random
from fractions import Fraction

from hypothesis import strategies as st

from nsapprox.exact import GaussianRational, LaurentPoly
from nsapprox.smith import LaurentMatrix

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=3)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)


@st.composite
def laurent_polys(draw, max_terms=4, min_exp=-2, max_exp=2, allow_zero=True):
    n = draw(st.integers(0 if allow_zero else 1, max_terms))
    exps = draw(st.lists(st.integers(min_exp, max_exp), min_size=n, max_size=n, unique=True))
    coeffs = {e: draw(gaussians.filter(bool)) for e in exps}
    return LaurentPoly(coeffs)


def random_poly(rng: random.Random, max_deg=2, val_range=(-1, 0), zero_prob=0.15, complex_coeffs=False):
    if rng.random() < zero_prob:
        return LaurentPoly()
    val = rng.randint(*val_range)
    deg = rng.randint(0, max_deg)
    coeffs = {}
    for k in range(deg + 1):
        re = rng.randint(-2, 2)
        im = rng.randint(-1, 1) if complex_coeffs else 0
        if re or im:
            coeffs[val + k] = GaussianRational(Fraction(re), Fraction(im))
    return LaurentPoly(coeffs)


def random_matrix(rng: random.Random, r: int, s: int, **kw) -> LaurentMatrix:
    return LaurentMatrix([[random_poly(rng, **kw) for _ in range(s)] for _ in range(r)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
