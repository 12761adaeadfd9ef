"""Virtually cyclic groups as extensions 1 -> Z -> G -> Q -> 1 with Z normal.

An element is a pair (k, q): k in Z, q an index into the finite quotient Q
(0-based internally, identity at 0). Multiplication is

    (k, q)(k', q') = (k + action[q]*k' + cocycle[q][q'], q*q')

Coset representatives are fixed as g_u = (0, u), and the representatives of
Z_i in Z as h_l = (l, e) for l = 0..i-1. JSON uses 1-based quotient indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgument, ResourceError
from .exact import ZERO_POLY, GaussianRational, LaurentPoly, gaussian
from .smith import LaurentMatrix

DEFAULT_DENSE_CAP = 4096 * 4096


class GroupElement(NamedTuple):
    k: int
    q: int


@dataclass(frozen=True)
class VCGroupSpec:
    n: int
    q_mult: tuple[tuple[int, ...], ...]
    action: tuple[int, ...]
    cocycle: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    @property
    def q_inv(self) -> tuple[int, ...]:
        inv = []
        for q in range(self.n):
            found = [p for p in range(self.n) if self.q_mult[q][p] == 0]
            if len(found) != 1:
                raise InvalidArgument(f"quotient element {q + 1} has no unique inverse")
            inv.append(found[0])
        return tuple(inv)

    @property
    def identity(self) -> GroupElement:
        return GroupElement(0, 0)

    def to_json(self) -> dict:
        return {"n": self.n,
                "q_mult": [[x + 1 for x in row] for row in self.q_mult],
                "action": list(self.action),
                "cocycle": [list(row) for row in self.cocycle]}

    @classmethod
    def from_json(cls, data) -> VCGroupSpec:
        if isinstance(data, str):
            return named_group(data)
        try:
            n = data["n"]
            q_mult = data["q_mult"]
            action = data["action"]
            cocycle = data.get("cocycle") or [[0] * n for _ in range(n)]
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidArgument(f"group spec JSON: missing field {exc}") from None
        if not isinstance(n, int) or n < 1:
            raise InvalidArgument("group spec: n must be a positive integer")
        for name, tab in (("q_mult", q_mult), ("cocycle", cocycle)):
            if not isinstance(tab, list) or len(tab) != n or any(
                    not isinstance(row, list) or len(row) != n or not all(isinstance(x, int) for x in row)
                    for row in tab):
                raise InvalidArgument(f"group spec: {name} must be an {n}x{n} integer table")
        if not isinstance(action, list) or len(action) != n or any(a not in (1, -1) for a in action):
            raise InvalidArgument("group spec: action must be a list of n entries in {+1, -1}")
        if any(not 1 <= x <= n for row in q_mult for x in row):
            raise InvalidArgument("group spec: q_mult entries must lie in 1..n")
        return cls(n, tuple(tuple(x - 1 for x in row) for row in q_mult), tuple(action),
                   tuple(tuple(row) for row in cocycle))


def cyclic_times(m: int, name: str = "") -> VCGroupSpec:
    """Z x Z/m."""
    return VCGroupSpec(m, tuple(tuple((a + b) % m for b in range(m)) for a in range(m)),
                       (1,) * m, tuple((0,) * m for _ in range(m)), name or f"ZxZ{m}")


def infinite_dihedral() -> VCGroupSpec:
    return VCGroupSpec(2, ((0, 1), (1, 0)), (1, -1), ((0, 0), (0, 0)), "Dinf")


def index_two_in_z() -> VCGroupSpec:
    """G = Z with Z = 2Z: the nontrivial extension, cocycle c(t, t) = 1."""
    return VCGroupSpec(2, ((0, 1), (1, 0)), (1, 1), ((0, 0), (0, 1)), "Z_over_2Z")


NAMED_GROUPS = {
    "Z": lambda: cyclic_times(1, "Z"),
    "Dinf": infinite_dihedral,
    "ZxZ2": lambda: cyclic_times(2),
    "ZxZ3": lambda: cyclic_times(3),
}


def named_group(name: str) -> VCGroupSpec:
    try:
        return NAMED_GROUPS[name]()
    except KeyError:
        raise InvalidArgument(f"unknown group {name!r}; known: {', '.join(NAMED_GROUPS)}") from None


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_group(spec: VCGroupSpec, window: int = 3) -> ValidationReport:
    n, m, act, c = spec.n, spec.q_mult, spec.action, spec.cocycle
    bad: list[str] = []
    Q = range(n)
    for a in Q:
        if m[0][a] != a or m[a][0] != a:
            bad.append(f"identity: 1*{a + 1} or {a + 1}*1 != {a + 1}")
    for a in Q:
        if sum(1 for b in Q if m[a][b] == 0) != 1 or sum(1 for b in Q if m[b][a] == 0) != 1:
            bad.append(f"inverse: element {a + 1} has no unique two-sided inverse")
    for a, b, d in product(Q, Q, Q):
        if m[m[a][b]][d] != m[a][m[b][d]]:
            bad.append(f"associativity: ({a + 1}*{b + 1})*{d + 1} != {a + 1}*({b + 1}*{d + 1})")
    for a, b in product(Q, Q):
        if act[m[a][b]] != act[a] * act[b]:
            bad.append(f"action: sigma({a + 1}*{b + 1}) != sigma({a + 1})*sigma({b + 1})")
    if act[0] != 1:
        bad.append("action: identity must act trivially")
    for a in Q:
        if c[0][a] != 0 or c[a][0] != 0:
            bad.append(f"cocycle normalization: c(e,{a + 1}) or c({a + 1},e) nonzero")
    for a, b, d in product(Q, Q, Q):
        if act[a] * c[b][d] + c[a][m[b][d]] != c[a][b] + c[m[a][b]][d]:
            bad.append(f"cocycle identity fails at ({a + 1},{b + 1},{d + 1})")
    if not bad:
        ks = range(-window, window + 1)
        for (k1, q1), (k2, q2), (k3, q3) in product(product(ks, Q), repeat=3):
            x, y, w = GroupElement(k1, q1), GroupElement(k2, q2), GroupElement(k3, q3)
            if group_mul(spec, group_mul(spec, x, y), w) != group_mul(spec, x, group_mul(spec, y, w)):
                bad.append(f"element associativity fails at {x}, {y}, {w}")
                break
    return ValidationReport(bad)


def group_mul(spec: VCGroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement(a.k + spec.action[a.q] * b.k + spec.cocycle[a.q][b.q], spec.q_mult[a.q][b.q])


def group_inv(spec: VCGroupSpec, a: GroupElement) -> GroupElement:
    qi = spec.q_inv[a.q]
    # (k, q)(k', qi) = (0, e)  =>  k' = -sigma_q (k + c(q, qi))
    return GroupElement(-spec.action[a.q] * (a.k + spec.cocycle[a.q][qi]), qi)


class GroupRingMatrix:
    """r x s matrix whose entries are finitely supported maps GroupElement -> Q(i)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Mapping]]):
        if not entries or not entries[0]:
            raise InvalidArgument("matrix dimensions must be positive")
        self.rows, self.cols = len(entries), len(entries[0])
        if any(len(row) != self.cols for row in entries):
            raise InvalidArgument("ragged matrix")
        clean = []
        for row in entries:
            new = []
            for entry in row:
                d: dict[GroupElement, GaussianRational] = {}
                for g, lam in entry.items():
                    g = GroupElement(*g)
                    lam = gaussian(lam)
                    total = d.get(g, GaussianRational()) + lam
                    if total:
                        d[g] = total
                    else:
                        d.pop(g, None)
                new.append(d)
            clean.append(tuple(new))
        self.entries = tuple(clean)

    @classmethod
    def identity(cls, r: int) -> GroupRingMatrix:
        return cls([[{(0, 0): 1} if j == k else {} for k in range(r)] for j in range(r)])

    @classmethod
    def from_laurent(cls, A: LaurentMatrix) -> GroupRingMatrix:
        """Entries supported in Z (quotient part e)."""
        return cls([[{(e, 0): c for e, c in x.coeffs.items()} for x in row] for row in A.entries])

    def __add__(self, other: GroupRingMatrix) -> GroupRingMatrix:
        out = []
        for ra, rb in zip(self.entries, other.entries):
            row = []
            for a, b in zip(ra, rb):
                d = dict(a)
                for g, lam in b.items():
                    d[g] = d.get(g, GaussianRational()) + lam
                row.append(d)
            out.append(row)
        return GroupRingMatrix(out)

    def adjoint(self, spec: VCGroupSpec) -> GroupRingMatrix:
        """Transpose and apply sum lam_g g -> sum conj(lam_g) g^-1 entrywise."""
        return GroupRingMatrix([[{group_inv(spec, g): lam.conjugate() for g, lam in self.entries[j][k].items()}
                                 for j in range(self.rows)] for k in range(self.cols)])

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[[[g.k, g.q + 1, lam.re.numerator, lam.re.denominator,
                               lam.im.numerator, lam.im.denominator]
                              for g, lam in sorted(entry.items())] for entry in row]
                            for row in self.entries]}

    @classmethod
    def from_json(cls, data) -> GroupRingMatrix:
        from .exact import _fraction_from

        try:
            r, s, entries = data["rows"], data["cols"], data["entries"]
        except (KeyError, TypeError):
            raise InvalidArgument("group-ring matrix JSON needs 'rows', 'cols' and 'entries'") from None
        if not isinstance(entries, list) or len(entries) != r or any(
                not isinstance(row, list) or len(row) != s for row in entries):
            raise InvalidArgument(f"entries must be a {r}x{s} nested list")
        out = []
        for row in entries:
            new = []
            for entry in row:
                d = {}
                for term in entry:
                    if not isinstance(term, list) or len(term) != 6:
                        raise InvalidArgument(f"bad term {term!r}: expected [k, q, re_num, re_den, im_num, im_den]")
                    k, q = term[0], term[1]
                    if not isinstance(k, int) or not isinstance(q, int) or q < 1:
                        raise InvalidArgument(f"bad group element ({k!r}, {q!r})")
                    g = GroupElement(k, q - 1)
                    if g in d:
                        raise InvalidArgument(f"duplicate group element {term[:2]}")
                    d[g] = GaussianRational(_fraction_from(term[2], term[3], "real part"),
                                            _fraction_from(term[4], term[5], "imaginary part"))
                new.append(d)
            out.append(new)
        return cls(out)


def _check_support(A: GroupRingMatrix, spec: VCGroupSpec) -> None:
    for row in A.entries:
        for entry in row:
            for g in entry:
                if not 0 <= g.q < spec.n:
                    raise InvalidArgument(f"group element {g} outside a quotient of order {spec.n}")


def restrict_to_Z(A: GroupRingMatrix, spec: VCGroupSpec) -> LaurentMatrix:
    """The rn x sn Laurent matrix of right multiplication by A on (CZ)-coordinates.

    Block (p, q), entry (u, v) carries at exponent m the coefficient of A[p][q]
    at g_u^-1 (m, e) g_v.
    """
    _check_support(A, spec)
    n = spec.n
    out = [[dict() for _ in range(A.cols * n)] for _ in range(A.rows * n)]
    for p, row in enumerate(A.entries):
        for q, entry in enumerate(row):
            for g, lam in entry.items():
                for u in range(n):
                    # g = g_u^-1 (m, e) g_v  <=>  (m, e) = g_u g g_v^-1
                    v = spec.q_mult[u][g.q]
                    w = group_mul(spec, group_mul(spec, GroupElement(0, u), g), group_inv(spec, GroupElement(0, v)))
                    assert w.q == 0
                    cell = out[p * n + u][q * n + v]
                    cell[w.k] = cell.get(w.k, GaussianRational()) + lam
    return LaurentMatrix([[LaurentPoly(cell) if cell else ZERO_POLY for cell in row] for row in out])


def build_quotient_dense(A: GroupRingMatrix, spec: VCGroupSpec, i: int,
                         max_entries: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """Complex matrix of right multiplication by A_i on C(G/Z_i).

    Coset Z_i h_l g_u = (l, u) sits at position u*i + l within each block, so the
    order is Z_i h_1 g_1, ..., Z_i h_i g_1, ..., Z_i h_i g_n.
    """
    if i < 1:
        raise InvalidArgument("level must be positive")
    _check_support(A, spec)
    n = spec.n
    R, C = A.rows * n * i, A.cols * n * i
    if R * C > max_entries:
        raise ResourceError(f"dense quotient {R}x{C} exceeds the cap of {max_entries} entries")
    M = np.zeros((R, C), dtype=complex)
    ks = np.arange(i)
    for p, row in enumerate(A.entries):
        for q, entry in enumerate(row):
            for g, lam in entry.items():
                val = complex(lam)
                for u in range(n):
                    # (k, u)(g.k, g.q) = (k + sigma_u g.k + c(u, g.q), u g.q)
                    v = spec.q_mult[u][g.q]
                    ls = (ks + spec.action[u] * g.k + spec.cocycle[u][g.q]) % i
                    rows = p * n * i + u * i + ks
                    cols = q * n * i + v * i + ls
                    np.add.at(M, (rows, cols), val)
    return M
