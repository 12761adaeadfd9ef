import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from nsapprox.errors import InvalidArgument
from nsapprox.exact import I, GaussianRational, Z, poly
from nsapprox.nets import (ReportConfig, argument_turns, best_approx_records, convergent_records,
                           counterexample_report, first_contracting_level, index_separation, net_extrema,
                           separated_index_search)
from nsapprox.ns_exact import unit_circle_roots
from nsapprox.quotients import spectral_sample
from nsapprox.smith import LaurentMatrix

A345 = GaussianRational(Fraction(3, 5), Fraction(4, 5))


def big_omega(n):
    count, d = 0, 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            count += 1
        d += 1
    return count + (n > 1)


def test_net_strictness_alternating():
    samples = {i: (-1) ** i for i in range(1, 101)}
    est = net_extrema(samples, [1, 2], 100)
    assert min(samples.values()) == -1
    assert est.liminf_est == 1 and est.witnesses["liminf"][0] == 2


def test_net_strictness_prime_parity():
    samples = {i: (-1) ** big_omega(i) for i in range(2, 10_001)}
    est = net_extrema(samples, [1, 2, 3], 10_000)
    assert (est.liminf_est, est.limsup_est) == (-1, 1)


def test_net_constant_and_exclusions():
    est = net_extrema({i: 0.7 for i in range(1, 50)} | {60: None}, [1, 4, 7], 60)
    assert est.liminf_est == est.limsup_est == 0.7
    assert est.excluded == (60,)
    est = net_extrema({2: 1.0, 4: 2.0}, [2, 3])
    assert est.skipped_K == (3,)
    with pytest.raises(InvalidArgument):
        net_extrema({}, [1])


def test_records_counterexample():
    records = best_approx_records(A345, 1, 400)
    assert [r.n for r in records] == [1, 6, 7, 27, 61, 332, 393]
    r61 = next(r for r in records if r.n == 61)
    assert r61.abs_distance == pytest.approx(1.634e-2, rel=1e-3)
    assert r61.distance == 2 - 2 * (A345 ** 61).re


def test_records_strictly_decrease_exactly():
    records = best_approx_records(A345, 1, 20_000)
    for a, b in zip(records, records[1:]):
        assert a.n < b.n and b.distance < a.distance


def test_records_dirichlet_quality():
    records = best_approx_records(A345, 1, 10_000)
    theta = argument_turns(A345)
    with mpmath.workprec(256):
        dist = [abs(n * theta - mpmath.nint(n * theta)) for n in range(1, 10_001)]
    running = np.minimum.accumulate(np.array([float(d) for d in dist]))
    expected = [1] + [n for n in range(2, 10_001) if dist[n - 1] < running[n - 2]]
    assert [r.n for r in records] == expected


def test_records_match_continued_fraction():
    for K in (1, 2, 3):
        exact = [r.n for r in best_approx_records(A345, K, 5_000)]
        assert exact == convergent_records(K * argument_turns(A345), 5_000)


def test_records_K2():
    records = best_approx_records(A345, 2, 100)
    assert [r.n for r in records][:2] == [1, 3]


def test_root_of_unity_period():
    records = best_approx_records(I, 1, 50)
    assert records.period == 4
    assert best_approx_records(GaussianRational(-1), 3, 10).period == 2


def test_records_reject_off_circle():
    with pytest.raises(InvalidArgument):
        best_approx_records(GaussianRational(1, 1), 1, 10)
    with pytest.raises(InvalidArgument):
        best_approx_records(GaussianRational(1), 1, 10)


def test_separated_roots_of_unity():
    roots = unit_circle_roots(Z - 1)
    R, idx = separated_index_search(roots, 3, (5, 20))
    assert idx == list(range(5, 21)) and R == 0.25
    roots = unit_circle_roots(Z + 1)
    assert index_separation(roots, 2, np.arange(3, 30, 2)).tolist() == [0.5] * 14


def test_separated_counterexample():
    roots = unit_circle_roots(poly(5, -6, 5))
    R, idx = separated_index_search(roots, 1, (1_000, 10_000), R=0.05)
    assert idx and R >= 0.05
    theta = float(roots[0].turns)
    for i in idx[:50]:
        x = i * theta
        assert abs(x - round(x)) >= 0.05 - 1e-12


def test_first_contracting_level():
    assert first_contracting_level(Z - 1) == 7
    p = poly(5, -6, 5)
    start = first_contracting_level(p)
    A = LaurentMatrix([[p]])
    assert all(spectral_sample(A, i).sigma_plus < 1 for i in range(start, start + 200))


def test_report_z_minus_one():
    cfg = ReportConfig(K_set=(1, 2), n_max=100, i_budget=2_000, sep_range=(100, 2_000))
    rep = counterexample_report(Z - 1, cfg)
    assert rep.flags == ["all unit-circle roots are roots of unity"]
    alphas = [s.alpha for s in rep.samples.values()]
    assert all(a > 1 for a in alphas)
    assert rep.net_estimate.liminf_est <= rep.net_estimate.limsup_est


def test_report_rejects_gap():
    with pytest.raises(InvalidArgument):
        counterexample_report(Z - 2)


def test_report_small_budget():
    cfg = ReportConfig(n_max=1_000, i_budget=5_000, sep_range=(1_000, 5_000))
    rep = counterexample_report(poly(5, -6, 5), cfg, baker_D=10)
    levels = [s.level for s in rep.record_samples[1]]
    assert levels == [61, 332, 393]
    assert rep.baker["floor_fraction"] == "1/11" and rep.baker["all_samples_above_floor"]
    doc = rep.to_json()
    assert {"records", "separated", "samples", "net_estimate", "baker"} <= doc.keys()
    assert rep.alpha_csv().splitlines()[0] == "K,i,alpha"
