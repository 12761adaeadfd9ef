"""Lower bounds from a Baker constant D of the pair (a, -1).

If |b1 log a + b2 log(-1)| > B^-D for all integer pairs, then |a^n - 1| >= n^-D / 2,
and along any cofinal family of levels the alpha numbers stay above ns/(1 + D).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv

from .errors import HypothesisViolation, InvalidArgument, PrecisionError
from .exact import GaussianRational, gaussian
from .nets import best_approx_records, _on_circle

MAX_BITS = 1 << 14


@dataclass
class CircleRunnerReport:
    D: float
    holds: dict[int, bool] = field(default_factory=dict)
    skipped: list[int] = field(default_factory=list)  # n with a^n = 1

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())

    @property
    def failures(self) -> list[int]:
        return [n for n, ok in self.holds.items() if not ok]


def _power_distance(a: GaussianRational, n: int) -> Fraction:
    """|a^n - 1|^2 exactly, for |a| = 1."""
    return 2 - 2 * (a ** n).re


def _compare(lhs: Fraction, n: int, D: float) -> bool:
    """lhs >= n^(-2D)/4, decided with outward-rounded intervals at increasing precision."""
    bits = 64
    saved = iv.prec
    try:
        while bits <= MAX_BITS:
            iv.prec = bits
            left = iv.mpf(lhs.numerator) / iv.mpf(lhs.denominator)
            right = iv.mpf(n) ** (-2 * iv.mpf(D)) / 4
            if left.a >= right.b:
                return True
            if left.b < right.a:
                return False
            bits *= 2
    finally:
        iv.prec = saved
    raise PrecisionError(f"|a^{n} - 1|^2 versus n^(-2D)/4 undecided at {MAX_BITS} bits")


def circle_runner_check(a, D: float, n_set) -> CircleRunnerReport:
    """For each n: does |a^n - 1| >= n^-D / 2 hold? Exact left side, directed-rounding right side."""
    a = gaussian(a)
    _on_circle(a)
    # D < 1 is accepted here so the check can be shown failing; the floor below insists on D >= 1
    if not D > 0:
        raise InvalidArgument("D must be positive")
    report = CircleRunnerReport(float(D))
    for n in sorted(set(n_set)):
        if n < 1:
            raise InvalidArgument(f"exponent {n} is not positive")
        lhs = _power_distance(a, n)
        if lhs == 0:
            report.skipped.append(n)
            continue
        report.holds[n] = _compare(lhs, n, D)
    return report


def empirical_baker_exponent(a, n_max: int) -> float:
    """max over record exponents 2 <= n <= n_max of -log(2|a^n - 1|)/log n."""
    a = gaussian(a)
    records = best_approx_records(a, 1, n_max)
    if records.period is not None:
        raise InvalidArgument(f"a is a root of unity of order {records.period}")
    vals = [-math.log(2 * r.abs_distance) / math.log(r.n) for r in records if r.n >= 2]
    if not vals:
        raise InvalidArgument("n_max too small: no record exponent >= 2")
    return max(vals)


def liminf_floor(ns, D: float) -> float:
    """ns / (1 + D) for a finite Novikov-Shubin value ns."""
    value = getattr(ns, "value", ns)
    if value is None or (isinstance(value, float) and math.isinf(value)):
        raise HypothesisViolation("the Novikov-Shubin number is infinity-plus; the floor needs a finite value")
    if D < 1:
        raise InvalidArgument("a Baker constant satisfies D >= 1")
    return float(Fraction(value) / (1 + Fraction(D)))
