"""Matrices over the Laurent ring and their Smith normal form.

The Laurent ring Q(i)[z, 1/z] is Euclidean with norm ``span = degree - valuation``,
so the classical elimination algorithm applies. Invariant factors are returned
as monic, zero-valuation representatives. No pointwise-norm rescaling of the
factors on the unit circle is attempted; that only changes finite-level values
by constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, ResourceError
from .exact import ONE_POLY, ZERO_POLY, LaurentPoly, poly_from_json, poly_gcd, poly_to_json


class LaurentMatrix:
    """Immutable r x s matrix of Laurent polynomials."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = len(entries)
        if rows == 0 or len(entries[0]) == 0:
            raise InvalidArgument("matrix dimensions must be positive")
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise InvalidArgument("ragged matrix")
        self.rows, self.cols = rows, cols
        self.entries = tuple(tuple(_to_poly(x) for x in row) for row in entries)

    @classmethod
    def identity(cls, n: int) -> LaurentMatrix:
        return cls([[ONE_POLY if j == k else ZERO_POLY for k in range(n)] for j in range(n)])

    @classmethod
    def zeros(cls, r: int, s: int) -> LaurentMatrix:
        return cls([[ZERO_POLY] * s for _ in range(r)])

    @classmethod
    def diagonal(cls, diag: Sequence, r: int | None = None, s: int | None = None) -> LaurentMatrix:
        r = r or len(diag)
        s = s or len(diag)
        rows = [[ZERO_POLY] * s for _ in range(r)]
        for k, d in enumerate(diag):
            rows[k][k] = d
        return cls(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        j, k = idx
        return self.entries[j][k]

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"LaurentMatrix([{body}])"

    def __add__(self, other: LaurentMatrix) -> LaurentMatrix:
        if self.shape != other.shape:
            raise InvalidArgument("shape mismatch")
        return LaurentMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        if self.cols != other.rows:
            raise InvalidArgument("shape mismatch")
        out = []
        for row in self.entries:
            new = []
            for k in range(other.cols):
                acc = ZERO_POLY
                for j, a in enumerate(row):
                    b = other.entries[j][k]
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return LaurentMatrix(out)

    def scale(self, c) -> LaurentMatrix:
        return LaurentMatrix([[x * c for x in row] for row in self.entries])

    def transpose(self) -> LaurentMatrix:
        return LaurentMatrix([list(col) for col in zip(*self.entries)])

    def adjoint(self) -> LaurentMatrix:
        from .exact import involution

        return LaurentMatrix([[involution(x) for x in col] for col in zip(*self.entries)])

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> LaurentMatrix:
        return LaurentMatrix([[self.entries[j][k] for k in cols] for j in rows])

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> LaurentMatrix:
        return self.submatrix(row_perm, col_perm)

    def max_span(self) -> int:
        return max(x.span for row in self.entries for x in row)

    def complex_coefficients(self) -> list[list[tuple[int, np.ndarray]]]:
        """Per entry: (valuation, complex coefficient array lowest first); zero entries give (0, empty)."""
        out = []
        for row in self.entries:
            new = []
            for x in row:
                if x:
                    new.append((x.valuation, np.array([complex(c) for c in x.dense])))
                else:
                    new.append((0, np.zeros(0, dtype=complex)))
            out.append(new)
        return out

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[poly_to_json(x) for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data) -> LaurentMatrix:
        if not isinstance(data, dict) or not {"rows", "cols", "entries"} <= data.keys():
            raise InvalidArgument("matrix JSON needs 'rows', 'cols' and 'entries'")
        r, s, entries = data["rows"], data["cols"], data["entries"]
        if not isinstance(r, int) or not isinstance(s, int) or r < 1 or s < 1:
            raise InvalidArgument("rows and cols must be positive integers")
        if not isinstance(entries, list) or len(entries) != r or any(
                not isinstance(row, list) or len(row) != s for row in entries):
            raise InvalidArgument(f"entries must be a {r}x{s} nested list")
        return cls([[poly_from_json(x) for x in row] for row in entries])


def _to_poly(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(x)


def determinant(A: LaurentMatrix) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant; every intermediate division is exact."""
    if A.rows != A.cols:
        raise InvalidArgument("determinant of a non-square matrix")
    n = A.rows
    M = [list(row) for row in A.entries]
    sign = 1
    prev = ONE_POLY
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((j for j in range(k + 1, n) if M[j][k]), None)
            if swap is None:
                return ZERO_POLY
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for j in range(k + 1, n):
            for l in range(k + 1, n):
                M[j][l] = (M[j][l] * M[k][k] - M[j][k] * M[k][l]).exact_div(prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


@dataclass(frozen=True)
class SNFResult:
    S: LaurentMatrix
    T: LaurentMatrix
    factors: tuple[LaurentPoly, ...]

    @property
    def k(self) -> int:
        return len(self.factors)

    def diagonal_matrix(self, rows: int, cols: int) -> LaurentMatrix:
        return LaurentMatrix.diagonal(self.factors, rows, cols) if self.factors else LaurentMatrix.zeros(rows, cols)


def _rational_content(row: Sequence[LaurentPoly]) -> Fraction:
    nums, dens = 0, 1
    for x in row:
        for c in x.dense:
            for part in (c.re, c.im):
                if part:
                    nums = gcd(nums, part.numerator)
                    dens = lcm(dens, part.denominator)
    if nums == 0:
        return Fraction(1)
    return Fraction(nums, dens)


def smith_normal_form(A: LaurentMatrix) -> SNFResult:
    """Unimodular S, T with S @ A @ T = diag(p_1, ..., p_k, 0, ...) and p_l | p_{l+1}.

    Pivot: nonzero entry of minimal span in the active block, ties by lowest
    (row, col). After each elimination round active rows and columns are divided
    by their rational content so coefficients stay small. The result is
    verified by exact multiplication before it is returned.
    """
    r, s = A.shape
    M = [list(row) for row in A.entries]
    S = [[ONE_POLY if j == k else ZERO_POLY for k in range(r)] for j in range(r)]
    T = [[ONE_POLY if j == k else ZERO_POLY for k in range(s)] for j in range(s)]

    def row_op(dst, src, q):
        # row dst -= q * row src, on M and S
        M[dst] = [a - q * b if b else a for a, b in zip(M[dst], M[src])]
        S[dst] = [a - q * b if b else a for a, b in zip(S[dst], S[src])]

    def col_op(dst, src, q):
        for row in M:
            if row[src]:
                row[dst] = row[dst] - row[src] * q
        for row in T:
            if row[src]:
                row[dst] = row[dst] - row[src] * q

    def swap_rows(a, b):
        M[a], M[b] = M[b], M[a]
        S[a], S[b] = S[b], S[a]

    def swap_cols(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in T:
            row[a], row[b] = row[b], row[a]

    def scale_row(j, c):
        M[j] = [x.scale(c) for x in M[j]]
        S[j] = [x.scale(c) for x in S[j]]

    def scale_col(k, c):
        for row in M:
            row[k] = row[k].scale(c)
        for row in T:
            row[k] = row[k].scale(c)

    def normalize_contents(t):
        for j in range(t, r):
            c = _rational_content(M[j][t:])
            if c != 1:
                scale_row(j, 1 / c)
        for k in range(t, s):
            c = _rational_content([M[j][k] for j in range(t, r)])
            if c != 1:
                scale_col(k, 1 / c)

    def pivot_in(t, rows, cols):
        best = None
        for j in rows:
            for k in cols:
                x = M[j][k]
                if x and (best is None or x.span < best[0]):
                    best = (x.span, j, k)
        return best

    factors: list[LaurentPoly] = []
    t = 0
    while t < min(r, s):
        best = pivot_in(t, range(t, r), range(t, s))
        if best is None:
            break
        _, j, k = best
        swap_rows(t, j)
        swap_cols(t, k)
        while True:
            dirty = False
            for j in range(t + 1, r):
                if M[j][t]:
                    q, rem = M[j][t].divmod(M[t][t])
                    row_op(j, t, q)
                    dirty = dirty or bool(rem)
            for k in range(t + 1, s):
                if M[t][k]:
                    q, rem = M[t][k].divmod(M[t][t])
                    col_op(k, t, q)
                    dirty = dirty or bool(rem)
            normalize_contents(t)
            if dirty:
                best = pivot_in(t, range(t, r), [t]) or (None,)
                alt = pivot_in(t, [t], range(t, s)) or (None,)
                cand = min((b for b in (best, alt) if b[0] is not None), key=lambda b: (b[0], b[1], b[2]))
                swap_rows(t, cand[1])
                swap_cols(t, cand[2])
                continue
            bad = next(((j, k) for j in range(t + 1, r) for k in range(t + 1, s)
                        if M[j][k] and not M[t][t].divides(M[j][k])), None)
            if bad is None:
                break
            # pull the offending row into the pivot row; the next round reduces it
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
            S[t] = [a + b for a, b in zip(S[t], S[bad[0]])]
        c, v = M[t][t].unit_part()
        scale_row(t, c.inverse())
        if v:
            M[t] = [x.shift(-v) for x in M[t]]
            S[t] = [x.shift(-v) for x in S[t]]
        factors.append(M[t][t])
        t += 1

    result = SNFResult(LaurentMatrix(S), LaurentMatrix(T), tuple(factors))
    _verify(A, result)
    return result


def _verify(A: LaurentMatrix, res: SNFResult) -> None:
    D = res.S @ A @ res.T
    if D != res.diagonal_matrix(A.rows, A.cols):
        raise ArithmeticError("Smith normal form verification failed: S A T is not the factor diagonal")
    for a, b in zip(res.factors, res.factors[1:]):
        if not a.divides(b):
            raise ArithmeticError("Smith normal form verification failed: divisibility chain broken")
    for name, U in (("S", res.S), ("T", res.T)):
        if not determinant(U).is_unit():
            raise ArithmeticError(f"Smith normal form verification failed: det {name} is not a unit")


def determinantal_divisors(A: LaurentMatrix, max_dim: int = 5) -> list[LaurentPoly]:
    """d_l = monic gcd of all l x l minors, for l = 1 .. rank. Independent of the elimination."""
    if A.rows > max_dim or A.cols > max_dim:
        raise ResourceError(f"minor enumeration capped at {max_dim}x{max_dim}, got {A.rows}x{A.cols}")
    out: list[LaurentPoly] = []
    for l in range(1, min(A.shape) + 1):
        g = ZERO_POLY
        for rows in combinations(range(A.rows), l):
            for cols in combinations(range(A.cols), l):
                m = determinant(A.submatrix(rows, cols))
                if m:
                    g = poly_gcd(g, m)
        if not g:
            break
        out.append(g)
    return out


def invariant_factors_from_divisors(divisors: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    out, prev = [], ONE_POLY
    for d in divisors:
        out.append(d.exact_div(prev).monic())
        prev = d
    return out


def last_invariant_factor(A: LaurentMatrix) -> LaurentPoly:
    if A.is_zero():
        raise InvalidArgument("the zero matrix has no invariant factors")
    return smith_normal_form(A).factors[-1]
