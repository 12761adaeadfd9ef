import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_matrix, random_poly
from nsapprox.errors import InvalidArgument, PrecisionError, ResourceError
from nsapprox.exact import GaussianRational, Z, poly
from nsapprox.quotients import (ExactData, Tolerances, block_singular_values, dense_quotient, dft_blocks,
                                exact_rank_level, exact_zero_count, sdf_step, spectral_sample)
from nsapprox.smith import LaurentMatrix, smith_normal_form

ZM1 = LaurentMatrix([[Z - 1]])


def closed_form(i):
    return math.log(2 / i) / math.log(2 * math.sin(math.pi / i))


def test_dft_blocks_examples():
    blocks = dft_blocks(ZM1, 2)
    assert np.allclose(blocks[:, 0, 0], [0, -2])
    assert np.allclose(sorted(np.abs(dft_blocks(ZM1, 3)[:, 0, 0])), [0, math.sqrt(3), math.sqrt(3)])
    ident = dft_blocks(LaurentMatrix.identity(2), 5)
    assert np.allclose(ident, np.broadcast_to(np.eye(2), (5, 2, 2)))
    hp = dft_blocks(ZM1, 3, bits=128)
    assert abs(complex(hp[1][0, 0]) - dft_blocks(ZM1, 3)[1, 0, 0]) < 1e-15


@pytest.mark.parametrize("i", [3, 10, 100, 1000, 10_000])
def test_alpha_z_minus_one_closed_form(i):
    s = spectral_sample(ZM1, i, exact=ExactData.of(ZM1))
    assert s.m_plus == 2 and s.rank == i - 1
    assert s.sigma_plus == pytest.approx(2 * math.sin(math.pi / i), rel=1e-12)
    assert s.alpha == pytest.approx(closed_form(i), rel=1e-9)


def test_degenerate_and_zero_quotient():
    s = spectral_sample(LaurentMatrix([[Z]]), 7)
    assert s.alpha is None and "alpha_undefined" in s.flags
    s = spectral_sample(LaurentMatrix([[Z - 1]]), 1)
    assert s.rank == 0 and "zero_quotient" in s.flags
    with pytest.raises(InvalidArgument):
        spectral_sample(ZM1, 0)


def test_exact_zero_count_examples():
    assert exact_zero_count(Z ** 2 - 1, 4) == 2
    assert all(exact_zero_count(poly(5, -6, 5), i) == 0 for i in range(1, 40))
    assert exact_zero_count(Z - 1, 7) == 1


def test_exact_rank_level_examples():
    assert exact_rank_level((Z - 1,), 3) == 2
    assert exact_rank_level(smith_normal_form(LaurentMatrix([[Z, 1], [1, Z]])).factors, 4) == 6
    assert exact_rank_level((poly(1),), 9) == 9


def test_sdf_examples():
    step = sdf_step(ZM1, 2)
    assert step.base == Fraction(1, 2) and step.jumps == ((2.0, Fraction(1)),)
    assert step(1.99) == Fraction(1, 2) and step(2.0) == 1
    step = sdf_step(LaurentMatrix.identity(1), 3)
    assert step.base == 0 and step(1.0) == 1
    step = sdf_step(ZM1, 3)
    assert step.base == Fraction(1, 3)
    assert step.jumps[0][0] == pytest.approx(math.sqrt(3)) and step.final == 1


def test_dense_oracle_agrees_on_random_matrices():
    rng = random.Random(2024)
    for _ in range(20):
        A = random_matrix(rng, 2, 2, complex_coeffs=True)
        for i in range(1, 13):
            via_dft = np.sort(block_singular_values(dft_blocks(A, i)).ravel())
            dense = np.sort(np.linalg.svd(dense_quotient(A, i), compute_uv=False))
            assert np.allclose(via_dft, dense, atol=1e-9)


def test_dense_cap():
    with pytest.raises(ResourceError):
        dense_quotient(ZM1, 100, max_entries=1000)


def _numeric_rank(A, i):
    return spectral_sample(A, i).rank


def test_exact_rank_matches_numeric_rank():
    rng = random.Random(11)
    mats = [ZM1, LaurentMatrix([[Z, 1], [1, Z]]), LaurentMatrix([[1, Z], [Z, Z ** 2]]),
            LaurentMatrix([[(Z ** 2 - 1) ** 2]]), LaurentMatrix([[Z ** 6 - 1, 0], [Z - 1, Z ** 3 - 1]])]
    mats += [random_matrix(rng, 2, 2) for _ in range(4)]
    for A in mats:
        if A.is_zero():
            continue
        ex = ExactData.of(A)
        for i in range(1, 65):
            exact_rank = exact_rank_level(ex.factors, i)
            assert spectral_sample(A, i, exact=ex).rank == exact_rank
            assert _numeric_rank(A, i) == exact_rank


@given(st.integers(1, 40), st.sampled_from([Z - 1, (Z ** 2 - 1) ** 2, Z ** 3 - Z, poly(5, -6, 5), Z ** 4 - 1]))
@settings(max_examples=40, deadline=None)
def test_kernel_fraction_is_exact(i, p):
    A = LaurentMatrix([[p]])
    assert sdf_step(A, i, exact=ExactData.of(A)).base == Fraction(exact_zero_count(p, i), i)


@given(st.integers(7, 200), st.sampled_from([2, 3, Fraction(1, 4)]))
@settings(max_examples=30, deadline=None)
def test_scale_covariance(i, c):
    A = LaurentMatrix([[Z ** 2 - 1, Z], [0, poly(5, -6, 5)]])
    base = spectral_sample(A, i, exact=ExactData.of(A))
    scaled = spectral_sample(A.scale(c), i, exact=ExactData.of(A.scale(c)))
    assert scaled.sigma_plus == pytest.approx(abs(float(c)) * base.sigma_plus, rel=1e-9)
    assert (scaled.m_plus, scaled.rank) == (base.m_plus, base.rank)


def test_sdf_monotone_and_total():
    rng = random.Random(5)
    for _ in range(5):
        A = random_matrix(rng, 2, 3)
        for i in (1, 4, 9):
            step = sdf_step(A, i)
            values = [step.base] + [F for _, F in step.jumps]
            assert values == sorted(values)
            assert step.final == Fraction(2 * i, i)


def test_escalation_resolves_tiny_sigma():
    A = LaurentMatrix([[poly(5, -6, 5)]])
    s = spectral_sample(A, 13843, exact=ExactData.of(A))
    assert "escalated" in s.flags and s.precision_bits == 128
    assert s.sigma_plus == pytest.approx(6.948e-8, rel=1e-3)


def test_audit_rejects_wrong_exact_data():
    # claim full rank in every block although z - 1 vanishes at block 0
    with pytest.raises(PrecisionError):
        spectral_sample(ZM1, 4, exact=ExactData((poly(1),)))


def test_group_order_enters_alpha():
    s1 = spectral_sample(ZM1, 10)
    s2 = spectral_sample(ZM1, 10, group_order=20)
    assert s2.alpha == pytest.approx(math.log(2 / 20) / math.log(s1.sigma_plus))


def test_csv_row():
    s = spectral_sample(ZM1, 3)
    assert s.csv_row().startswith("3,3,2,1.7320508075688772,2,-0.73814049285708")
