"""Exact Novikov-Shubin numbers over Z and virtually cyclic groups.

For a Laurent polynomial the value is 1/mu0 where mu0 is the largest
multiplicity of a root on the unit circle, and infinity-plus when there is none.
A matrix reduces to its last invariant factor, a group-ring matrix to its
restriction to the infinite cyclic subgroup.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import InvalidArgument, PrecisionError
from .exact import (LaurentPoly, eval_complex, gcd_with_zpow_minus_one, poly_gcd, reciprocal_conjugate,
                    squarefree_decomposition)
from .numeric import DEFAULT_BITS, poly_roots
from .smith import LaurentMatrix, smith_normal_form

TOL_CIRCLE = 1e-10


@dataclass(frozen=True)
class UnitCircleRoot:
    approx: mpmath.mpc
    multiplicity: int
    root_of_unity_order: int | None = None

    @property
    def turns(self) -> float:
        """Argument in [0, 1) measured in full turns."""
        return float(mpmath.arg(self.approx) / (2 * mpmath.pi)) % 1.0

    def turns_mp(self, bits: int = DEFAULT_BITS):
        with mpmath.workprec(bits):
            t = mpmath.arg(self.approx) / (2 * mpmath.pi)
            return t - mpmath.floor(t)

    def __complex__(self):
        return complex(self.approx)


@functools.total_ordering
class NSValue:
    """A positive rational 1/mu0, or the symbol infinity-plus (``value is None``)."""

    __slots__ = ("value",)

    def __init__(self, value: Fraction | None):
        if value is not None:
            value = Fraction(value)
            if value <= 0:
                raise InvalidArgument("Novikov-Shubin values are positive")
        self.value = value

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if isinstance(other, NSValue):
            return self.value == other.value
        if self.value is None:
            return False
        return self.value == other

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        if isinstance(other, NSValue):
            if self.value is None:
                return False
            return other.value is None or self.value < other.value
        return self.value is not None and self.value < other

    def __float__(self):
        return float("inf") if self.value is None else float(self.value)

    def __str__(self):
        return "inf+" if self.value is None else str(self.value)

    def __repr__(self):
        return f"NSValue({self})"

    def to_json(self) -> dict:
        if self.value is None:
            return {"type": "infinity_plus"}
        return {"type": "finite", "num": self.value.numerator, "den": self.value.denominator}

    @classmethod
    def from_json(cls, data) -> NSValue:
        if data.get("type") == "infinity_plus":
            return INF_PLUS
        return cls(Fraction(data["num"], data["den"]))


INF_PLUS = NSValue(None)


def _assign_orders(g: LaurentPoly, roots: list, m_max: int) -> dict[int, int]:
    """Map index into ``roots`` -> order m, for the roots of g that are roots of unity.

    The count of roots of unity of order dividing m is read off exactly from
    deg gcd(g, z^m - 1); the numeric roots only decide which ones they are.
    """
    orders: dict[int, int] = {}
    for m in range(1, m_max + 1):
        h = gcd_with_zpow_minus_one(g, m)
        want = h.span
        if want == 0:
            continue
        have = [j for j, o in orders.items() if m % o == 0]
        fresh = [j for j in range(len(roots)) if j not in orders and abs(roots[j] ** m - 1) < 1e-8]
        if len(have) + len(fresh) != want:
            raise PrecisionError(f"root-of-unity matching failed at order {m}: exact count {want}, "
                                 f"numeric {len(have) + len(fresh)}")
        for j in fresh:
            orders[j] = m
    return orders


def unit_circle_roots(p: LaurentPoly, tol_circle: float = TOL_CIRCLE, bits: int = DEFAULT_BITS,
                      m_max: int | None = None) -> list[UnitCircleRoot]:
    if not p:
        raise InvalidArgument("unit-circle roots of the zero polynomial")
    if m_max is None:
        m_max = max(1, 2 * p.span ** 2)
    out: list[UnitCircleRoot] = []
    for q, mult in squarefree_decomposition(p):
        # roots of g are the roots a of q with 1/conj(a) also a root: the circle plus symmetric pairs
        g = poly_gcd(q, reciprocal_conjugate(q))
        if g.span == 0:
            continue
        with mpmath.workprec(bits):
            roots = poly_roots(g, bits)
            on = []
            for r in roots:
                dev = abs(abs(r) - 1)
                if dev <= tol_circle:
                    on.append(r)
                elif dev < 10 * tol_circle:
                    raise PrecisionError(f"root {mpmath.nstr(r, 15)} is {float(dev):.3e} from the circle, "
                                         "inside the ambiguity band; raise the precision")
            orders = _assign_orders(g, on, m_max)
        out.extend(UnitCircleRoot(r, mult, orders.get(j)) for j, r in enumerate(on))
    out.sort(key=lambda u: (u.turns, u.multiplicity))
    return out


def ns_number(p: LaurentPoly, **kw) -> NSValue:
    if not p:
        return INF_PLUS
    roots = unit_circle_roots(p, **kw)
    if not roots:
        return INF_PLUS
    return NSValue(Fraction(1, max(u.multiplicity for u in roots)))


def ns_number_matrix(A: LaurentMatrix, **kw) -> NSValue:
    if A.is_zero():
        return INF_PLUS
    return ns_number(smith_normal_form(A).factors[-1], **kw)


def ns_number_group(A, spec, **kw) -> NSValue:
    from .groupring import restrict_to_Z

    return ns_number_matrix(restrict_to_Z(A, spec), **kw)


def growth_exponents(p: LaurentPoly, t_min: float = 1e-6, t_max: float = 1e-3, points: int = 16,
                     bits: int = DEFAULT_BITS) -> list[tuple[UnitCircleRoot, float]]:
    """Least-squares slope of log|p(a e^{2 pi i t})| against log t at every unit-circle root a."""
    out = []
    ts = np.geomspace(t_min, t_max, points)
    for root in unit_circle_roots(p, bits=bits):
        slopes = []
        for sign in (1, -1):
            with mpmath.workprec(bits):
                vals = [float(mpmath.log(abs(eval_complex(p, root.approx * mpmath.expjpi(2 * sign * mpmath.mpf(t)),
                                                          bits=bits))))
                        for t in ts]
            slopes.append(np.polyfit(np.log(ts), vals, 1)[0])
        out.append((root, float(np.mean(slopes))))
    return out
