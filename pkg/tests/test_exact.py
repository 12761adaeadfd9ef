from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gaussians, laurent_polys
from nsapprox.errors import InvalidArgument
from nsapprox.exact import (I, ONE_POLY, ZERO_POLY, GaussianRational, LaurentPoly, Z, eval_complex, gaussian,
                            gcd_with_zpow_minus_one, involution, poly, poly_from_json, poly_gcd, poly_to_json,
                            reciprocal_conjugate, squarefree_decomposition, zpow_minus_one)


def test_gaussian_arithmetic():
    a = GaussianRational(Fraction(3, 5), Fraction(4, 5))
    assert a.norm() == 1
    assert a * a.conjugate() == 1
    assert a * a.inverse() == 1
    assert I * I == -1
    assert a ** 2 == GaussianRational(Fraction(-7, 25), Fraction(24, 25))
    assert a ** -1 == a.conjugate()


def test_floats_rejected():
    with pytest.raises(InvalidArgument):
        gaussian(0.5)
    with pytest.raises(InvalidArgument):
        LaurentPoly({0: 1.5})


def test_multiplication_example():
    assert (Z - 1) * (Z + 1) == Z ** 2 - 1
    assert (Z ** -1) * Z == ONE_POLY


def test_valuation_degree_span():
    p = poly(2, 0, 3, val=-1)  # 2/z + 3z
    assert (p.valuation, p.degree, p.span) == (-1, 1, 2)
    assert ZERO_POLY.span == -1 and not ZERO_POLY


def test_units():
    assert (Z ** 3).scale(GaussianRational(0, 2)).is_unit()
    assert not (Z - 1).is_unit()
    with pytest.raises(ArithmeticError):
        (Z - 1) ** -1


def test_gcd_examples():
    assert poly_gcd(Z ** 2 - 1, Z ** 3 - 1) == Z - 1
    assert poly_gcd(Z ** 2 + 1, Z - 1) == ONE_POLY
    # Laurent gcd ignores monomial factors
    assert poly_gcd((Z - 1) * Z ** -3, (Z - 1) * (Z + 2)) == Z - 1
    with pytest.raises(InvalidArgument):
        poly_gcd(ZERO_POLY, ZERO_POLY)


def test_squarefree_examples():
    assert squarefree_decomposition((Z - 1) ** 2 * (Z + 2)) == [(Z + 2, 1), (Z - 1, 2)]
    assert squarefree_decomposition(poly(5, -6, 5)) == [(poly(1, Fraction(-6, 5), 1), 1)]
    assert squarefree_decomposition((Z ** 2 - 1) ** 2) == [(Z ** 2 - 1, 2)]


def test_reciprocal_conjugate():
    # roots of z - 2 map to 1/2
    assert reciprocal_conjugate(Z - 2) == Z - Fraction(1, 2)
    # on the circle the root set is preserved
    p = poly(5, -6, 5)
    assert reciprocal_conjugate(p) == p.monic()


def test_gcd_with_zpow_minus_one_matches_expansion():
    p = (Z - 1) * (Z + 1) * (Z ** 2 + Z + 1)
    for m in range(1, 13):
        assert gcd_with_zpow_minus_one(p, m) == poly_gcd(p, zpow_minus_one(m))


def test_eval_and_involution():
    p = poly(5, -6, 5)
    with mpmath.workprec(128):
        a = GaussianRational(Fraction(3, 5), Fraction(4, 5)).to_mpc()
    assert abs(eval_complex(p, a, bits=128)) < 1e-30
    with pytest.raises(InvalidArgument):
        eval_complex(p, 0)
    q = poly(1, GaussianRational(0, 1), 3, val=-1)
    z = complex(0.3, 0.95)
    z /= abs(z)
    assert abs(complex(eval_complex(involution(q), z)) - complex(eval_complex(q, z)).conjugate()) < 1e-12


def test_json_round_trip_and_rejections():
    p = poly(Fraction(1, 2), GaussianRational(0, -3), val=-2)
    assert poly_from_json(poly_to_json(p)) == p
    for bad in ([[0, 1, 0, 0, 1]], [[0, 2, 4, 0, 1]], [[0, 1, 1, 0, 1], [0, 1, 1, 0, 1]], [[0, 0, 1, 0, 1]],
                [[0.5, 1, 1, 0, 1]], "z-1"):
        with pytest.raises(InvalidArgument):
            poly_from_json(bad)


@given(laurent_polys(), laurent_polys(), laurent_polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert involution(involution(p)) == p
    assert involution(p * q) == involution(p) * involution(q)


@given(laurent_polys(allow_zero=False), laurent_polys(allow_zero=False))
@settings(max_examples=60, deadline=None)
def test_euclidean_division(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert not rem or rem.span < q.span


@given(laurent_polys(allow_zero=False), laurent_polys(allow_zero=False))
@settings(max_examples=40, deadline=None)
def test_gcd_divides_both(p, q):
    g = poly_gcd(p, q)
    assert g.divides(p) and g.divides(q)
    assert g.valuation == 0 and g.leading == 1


@given(laurent_polys(max_terms=3, allow_zero=False), st.integers(1, 3), laurent_polys(max_terms=2, allow_zero=False))
@settings(max_examples=40, deadline=None)
def test_squarefree_reassembles(p, k, q):
    f = p ** k * q
    product = ONE_POLY
    for factor, mult in squarefree_decomposition(f):
        product = product * factor ** mult
    assert product == f.monic()


@given(gaussians.filter(bool), st.integers(-3, 3))
def test_scale_shift_unit_part(c, k):
    p = poly(1, 2, 3).scale(c).shift(k)
    lead, val = p.unit_part()
    assert p == p.monic().scale(lead).shift(val)
