"""Exact arithmetic over the Gaussian rationals Q(i) and Laurent polynomials Q(i)[z, 1/z].

Laurent polynomials are stored densely: a valuation ``val`` and a tuple of
coefficients for exponents ``val, val+1, ..., val+len-1``, trimmed so that both
end coefficients are nonzero. The zero polynomial has no coefficients.

Units of the Laurent ring are ``c * z**k``; :meth:`LaurentPoly.monic` picks the
canonical representative (zero valuation, leading coefficient one).
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

import mpmath

from .errors import InvalidArgument


class GaussianRational:
    """An element re + im*i of Q(i) with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            if im:
                raise TypeError("imaginary part given twice")
            self.re, self.im = re.re, re.im
            return
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> GaussianRational:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus re**2 + im**2."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_mpc(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)


ZERO = GaussianRational._raw(Fraction(0), Fraction(0))
ONE = GaussianRational._raw(Fraction(1), Fraction(0))
I = GaussianRational._raw(Fraction(0), Fraction(1))


def _coerce(x):
    if type(x) is GaussianRational:
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational._raw(Fraction(x), Fraction(0))
    if isinstance(x, GaussianRational):
        return x
    return NotImplemented


def gaussian(x) -> GaussianRational:
    """Coerce an int, Fraction or GaussianRational; floats and complex are rejected."""
    g = _coerce(x)
    if g is NotImplemented:
        raise InvalidArgument(f"not an exact Gaussian rational: {x!r}")
    return g


# --------------------------------------------------------------------------
# dense ordinary polynomials: lists of GaussianRational, lowest degree first

def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _dsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else ZERO) - (b[k] if k < len(b) else ZERO) for k in range(n)]
    return _trim(out)


def _dmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for j, x in enumerate(a):
        if not x:
            continue
        for k, y in enumerate(b):
            if y:
                out[j + k] = out[j + k] + x * y
    return _trim(out)


def _ddivmod(a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    inv_lead = b[-1].inverse()
    q = [ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        coef = a[k]
        if not coef:
            continue
        t = coef * inv_lead
        q[k - db] = t
        for j in range(db + 1):
            if b[j]:
                a[k - db + j] = a[k - db + j] - t * b[j]
    return _trim(q), _trim(a[:db])


def _dmonic(a: list) -> list:
    if not a:
        return []
    if a[-1] == ONE:
        return list(a)
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _dgcd(a: list, b: list) -> list:
    a, b = _dmonic(_trim(list(a))), _dmonic(_trim(list(b)))
    while b:
        _, r = _ddivmod(a, b)
        a, b = b, _dmonic(r)
    return a


def _dderiv(a: list) -> list:
    return _trim([a[k] * k for k in range(1, len(a))])


def _dpowmod(base: list, e: int, mod: list) -> list:
    result = [ONE]
    _, base = _ddivmod(base, mod)
    while e:
        if e & 1:
            _, result = _ddivmod(_dmul(result, base), mod)
        e >>= 1
        if e:
            _, base = _ddivmod(_dmul(base, base), mod)
    return result


# --------------------------------------------------------------------------

class LaurentPoly:
    """Immutable Laurent polynomial with Gaussian-rational coefficients."""

    __slots__ = ("_val", "_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        if not coeffs:
            self._val, self._c = 0, ()
            self._hash = None
            return
        items = {int(e): gaussian(c) for e, c in coeffs.items()}
        lo, hi = min(items), max(items)
        dense = [items.get(e, ZERO) for e in range(lo, hi + 1)]
        self._set(lo, dense)

    def _set(self, val: int, dense: list):
        k = 0
        while k < len(dense) and not dense[k]:
            k += 1
        dense = _trim(dense[k:])
        self._val = val + k if dense else 0
        self._c = tuple(dense)
        self._hash = None

    @classmethod
    def _dense(cls, val: int, dense: list) -> LaurentPoly:
        obj = object.__new__(cls)
        obj._set(val, list(dense))
        return obj

    @classmethod
    def from_list(cls, coeffs: Iterable, val: int = 0) -> LaurentPoly:
        """Coefficients listed from exponent ``val`` upward."""
        return cls._dense(val, [gaussian(c) for c in coeffs])

    @classmethod
    def constant(cls, c) -> LaurentPoly:
        return cls._dense(0, [gaussian(c)])

    @classmethod
    def monomial(cls, k: int, c=1) -> LaurentPoly:
        return cls._dense(k, [gaussian(c)])

    # -- inspection

    @property
    def coeffs(self) -> dict[int, GaussianRational]:
        return {self._val + k: c for k, c in enumerate(self._c) if c}

    @property
    def dense(self) -> tuple[GaussianRational, ...]:
        return self._c

    @property
    def valuation(self) -> int:
        if not self._c:
            raise InvalidArgument("valuation of the zero polynomial")
        return self._val

    @property
    def degree(self) -> int:
        if not self._c:
            raise InvalidArgument("degree of the zero polynomial")
        return self._val + len(self._c) - 1

    @property
    def span(self) -> int:
        """degree - valuation; the Euclidean norm of the Laurent ring (zero polynomial: -1)."""
        return len(self._c) - 1

    @property
    def leading(self) -> GaussianRational:
        return self._c[-1] if self._c else ZERO

    def is_zero(self) -> bool:
        return not self._c

    def is_unit(self) -> bool:
        return len(self._c) == 1

    def is_real(self) -> bool:
        return all(not c.im for c in self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            g = _coerce(other)
            if g is NotImplemented:
                return NotImplemented
            other = LaurentPoly.constant(g)
        return self._val == other._val and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._val, self._c))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if not c:
                continue
            e = self._val + k
            mono = "" if e == 0 else ("z" if e == 1 else f"z^{e}")
            if not mono:
                parts.append(str(c))
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- ring operations

    def __neg__(self):
        return LaurentPoly._dense(self._val, [-c for c in self._c])

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._c:
            return other
        if not other._c:
            return self
        lo = min(self._val, other._val)
        hi = max(self.degree, other.degree)
        out = [ZERO] * (hi - lo + 1)
        for k, c in enumerate(self._c):
            out[self._val - lo + k] = c
        for k, c in enumerate(other._c):
            j = other._val - lo + k
            out[j] = out[j] + c
        return LaurentPoly._dense(lo, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._c or not other._c:
            return ZERO_POLY
        return LaurentPoly._dense(self._val + other._val, _dmul(list(self._c), list(other._c)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_unit():
                raise ArithmeticError("negative power of a non-unit")
            return LaurentPoly._dense(self._val * n, [self._c[0] ** n])
        result, base = ONE_POLY, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> LaurentPoly:
        c = gaussian(c)
        return LaurentPoly._dense(self._val, [x * c for x in self._c])

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by z**k."""
        if not self._c:
            return self
        return LaurentPoly._dense(self._val + k, list(self._c))

    def ordinary(self) -> list[GaussianRational]:
        """Coefficient list of z**(-valuation) * self, an ordinary polynomial with nonzero constant term."""
        return list(self._c)

    def monic(self) -> LaurentPoly:
        """Canonical unit-normalized representative: zero valuation, leading coefficient one."""
        if not self._c:
            return self
        return LaurentPoly._dense(0, _dmonic(list(self._c)))

    def unit_part(self) -> tuple[GaussianRational, int]:
        """(c, k) with self == c * z**k * self.monic()."""
        if not self._c:
            raise InvalidArgument("unit part of the zero polynomial")
        return self._c[-1], self._val

    def derivative(self) -> LaurentPoly:
        if not self._c:
            return self
        return LaurentPoly._dense(self._val - 1, [c * (self._val + k) for k, c in enumerate(self._c)])

    def divmod(self, other: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
        """Euclidean division in the Laurent ring with respect to ``span``.

        Returns (q, r) with self == q*other + r and r.span < other.span.
        """
        if not other._c:
            raise ZeroDivisionError("Laurent division by zero")
        if not self._c:
            return ZERO_POLY, ZERO_POLY
        q, r = _ddivmod(list(self._c), list(other._c))
        return (LaurentPoly._dense(self._val - other._val, q),
                LaurentPoly._dense(self._val, r))

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: LaurentPoly) -> bool:
        if not self._c:
            return not other._c
        return not other.divmod(self)[1]


def _as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    g = _coerce(x)
    if g is NotImplemented:
        return NotImplemented
    return LaurentPoly._dense(0, [g])


ZERO_POLY = LaurentPoly()
ONE_POLY = LaurentPoly._dense(0, [ONE])
Z = LaurentPoly._dense(1, [ONE])


def poly(*coeffs, val: int = 0) -> LaurentPoly:
    """Shorthand: ``poly(5, -6, 5)`` is 5 - 6z + 5z^2 (lowest exponent first)."""
    return LaurentPoly.from_list(coeffs, val)


# --------------------------------------------------------------------------
# named operations

def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def involution(p: LaurentPoly) -> LaurentPoly:
    """Conjugate coefficients and invert the variable: the canonical involution of C[Z]."""
    if not p:
        return p
    return LaurentPoly._dense(-p.degree, [c.conjugate() for c in reversed(p.dense)])


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    if not p and not q:
        raise InvalidArgument("gcd of two zero polynomials")
    return LaurentPoly._dense(0, _dgcd(p.ordinary(), q.ordinary()))


def squarefree_decomposition(p: LaurentPoly) -> list[tuple[LaurentPoly, int]]:
    """Yun's algorithm. Returns [(f_j, j), ...] with p = unit * prod f_j**j."""
    if not p:
        raise InvalidArgument("squarefree decomposition of zero")
    f = _dmonic(p.ordinary())
    out: list[tuple[LaurentPoly, int]] = []
    if len(f) == 1:
        return out
    df = _dderiv(f)
    a = _dgcd(f, df)
    b = _ddivmod(f, a)[0]
    c = _ddivmod(df, a)[0]
    d = _dsub(c, _dderiv(b))
    j = 1
    while len(b) > 1:
        a = _dgcd(b, d)
        if len(a) > 1:
            out.append((LaurentPoly._dense(0, a), j))
        b = _ddivmod(b, a)[0]
        c = _ddivmod(d, a)[0]
        d = _dsub(c, _dderiv(b))
        j += 1
    return out


def reciprocal_conjugate(p: LaurentPoly) -> LaurentPoly:
    """Monic polynomial whose roots are 1/conj(a) for the roots a of p."""
    if not p:
        raise InvalidArgument("reciprocal conjugate of zero")
    return involution(p).monic()


def zpow_minus_one(m: int) -> LaurentPoly:
    return LaurentPoly._dense(0, [-ONE] + [ZERO] * (m - 1) + [ONE])


def gcd_with_zpow_minus_one(p: LaurentPoly, m: int) -> LaurentPoly:
    """gcd(p, z**m - 1) without expanding z**m - 1 for large m."""
    if not p:
        raise InvalidArgument("zero polynomial")
    f = _dmonic(p.ordinary())
    if len(f) == 1:
        return ONE_POLY
    r = _dpowmod([ZERO, ONE], m, f)
    r = _dsub(r, [ONE])
    return LaurentPoly._dense(0, _dgcd(f, r))


def eval_complex(p: LaurentPoly, z, bits: int | None = None, factorization=None):
    """Evaluate p at a nonzero complex point.

    With ``bits`` the evaluation runs in mpmath at that precision and returns an
    ``mpc``; otherwise hardware complex Horner. A :class:`~nsapprox.numeric.NumericFactorization`
    switches to the factored form c * z**k * prod (z - a)**mu, which avoids
    cancellation near roots.
    """
    if z == 0:
        raise InvalidArgument("evaluation at z = 0")
    if factorization is not None:
        return factorization.evaluate(z, bits)
    if not p:
        return mpmath.mpc(0) if bits else 0j
    if bits is None:
        z = complex(z)
        acc = 0j
        for c in reversed(p.dense):
            acc = acc * z + complex(c)
        return acc * z ** p.valuation
    with mpmath.workprec(bits):
        z = mpmath.mpc(z)
        acc = mpmath.mpc(0)
        for c in reversed(p.dense):
            acc = acc * z + c.to_mpc()
        return +(acc * z ** p.valuation)


# --------------------------------------------------------------------------
# JSON encoding: list of [exponent, re_num, re_den, im_num, im_den]

def poly_to_json(p: LaurentPoly) -> list[list[int]]:
    return [[e, c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]
            for e, c in sorted(p.coeffs.items())]


def _fraction_from(num, den, where) -> Fraction:
    if not (isinstance(num, int) and isinstance(den, int)) or isinstance(num, bool) or isinstance(den, bool):
        raise InvalidArgument(f"{where}: numerator and denominator must be integers")
    if den <= 0:
        raise InvalidArgument(f"{where}: denominator must be positive")
    if gcd(num, den) != 1:
        raise InvalidArgument(f"{where}: fraction {num}/{den} is not reduced")
    return Fraction(num, den)


def poly_from_json(data) -> LaurentPoly:
    if not isinstance(data, list):
        raise InvalidArgument("polynomial must be a list of terms")
    coeffs: dict[int, GaussianRational] = {}
    for term in data:
        if not isinstance(term, list) or len(term) != 5:
            raise InvalidArgument(f"bad term {term!r}: expected [exp, re_num, re_den, im_num, im_den]")
        e = term[0]
        if not isinstance(e, int) or isinstance(e, bool):
            raise InvalidArgument(f"bad exponent {e!r}")
        if e in coeffs:
            raise InvalidArgument(f"duplicate exponent {e}")
        c = GaussianRational(_fraction_from(term[1], term[2], f"exponent {e} real part"),
                             _fraction_from(term[3], term[4], f"exponent {e} imaginary part"))
        if not c:
            raise InvalidArgument(f"zero coefficient stored at exponent {e}")
        coeffs[e] = c
    return LaurentPoly(coeffs)
