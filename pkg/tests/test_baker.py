from fractions import Fraction

import pytest

from nsapprox.baker import circle_runner_check, empirical_baker_exponent, liminf_floor
from nsapprox.errors import HypothesisViolation, InvalidArgument
from nsapprox.exact import I, GaussianRational
from nsapprox.nets import best_approx_records
from nsapprox.ns_exact import INF_PLUS, NSValue

A345 = GaussianRational(Fraction(3, 5), Fraction(4, 5))


def record_exponents(n_max):
    return [r.n for r in best_approx_records(A345, 1, n_max)]


def test_circle_runner_holds_for_large_D():
    report = circle_runner_check(A345, 10, record_exponents(10_000))
    assert report.all_hold and not report.skipped


def test_circle_runner_fails_for_small_D():
    report = circle_runner_check(A345, 0.1, record_exponents(10_000))
    assert not report.all_hold
    assert report.failures[-1] == 2690


def test_monotone_in_D():
    ns = record_exponents(5_000) + list(range(2, 60))
    prev = None
    for D in (0.2, 0.5, 0.8, 1.0, 2.0, 10.0):
        holds = circle_runner_check(A345, D, ns).holds
        if prev is not None:
            assert all(holds[n] for n, ok in prev.items() if ok)
        prev = holds


def test_root_of_unity_skipped():
    report = circle_runner_check(I, 2, [4, 5, 8])
    assert report.skipped == [4, 8] and report.holds == {5: True}


def test_empirical_exponent():
    assert 0.9 < empirical_baker_exponent(A345, 10_000) < 1.3
    with pytest.raises(InvalidArgument):
        empirical_baker_exponent(I, 100)


def test_small_angle_exponent_below_one():
    # a close to 1: the first records are large steps, so the sampled exponent stays small
    a = GaussianRational(Fraction(99, 101), Fraction(20, 101))
    assert empirical_baker_exponent(a, 100) < 1


def test_liminf_floor():
    assert liminf_floor(NSValue(1), 3) == 0.25
    assert liminf_floor(NSValue(Fraction(1, 2)), 1) == 0.25
    assert liminf_floor(NSValue(1), 10) == pytest.approx(1 / 11)
    with pytest.raises(HypothesisViolation):
        liminf_floor(INF_PLUS, 2)
    with pytest.raises(InvalidArgument):
        liminf_floor(NSValue(1), 0.5)


@pytest.mark.parametrize("D", [1, 1.5, 4, 100])
def test_floor_below_target(D):
    for ns in (NSValue(1), NSValue(Fraction(1, 3))):
        assert liminf_floor(ns, D) < ns.value


def test_check_rejects_off_circle():
    with pytest.raises(InvalidArgument):
        circle_runner_check(GaussianRational(2), 2, [3])
