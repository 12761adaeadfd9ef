"""Finite-level spectra of A_i for a Laurent matrix A.

A_i is block circulant; the finite Fourier transform conjugates it to the
block diagonal diag(A(1), A(w), ..., A(w^(i-1))) with w = exp(2 pi i / i), so the
singular values of A_i are those of the i small blocks. Nothing of size i x i
is ever decomposed except by the dense oracle :func:`dense_quotient`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .errors import InvalidArgument, PrecisionError, ResourceError
from .exact import LaurentPoly, gcd_with_zpow_minus_one
from .numeric import DEFAULT_BITS, NumericFactorization, numeric_factorization
from .smith import LaurentMatrix, smith_normal_form

DEFAULT_DENSE_CAP = 4096 * 4096


@dataclass(frozen=True)
class Tolerances:
    tol_rank: float = 1e-8
    tol_cluster: float = 1e-6
    escalate_below: float = 1e-6
    bits: int = DEFAULT_BITS

    @property
    def tol_rank_extended(self) -> float:
        # the rank threshold shrinks by the precision gained over double
        return self.tol_rank * 2.0 ** -(self.bits - 53)


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class ExactData:
    """Exact side information for a matrix: SNF invariant factors, plus numeric roots for 1x1 input."""

    factors: tuple[LaurentPoly, ...]
    factorization: NumericFactorization | None = None

    @classmethod
    def of(cls, A: LaurentMatrix, bits: int = DEFAULT_BITS) -> ExactData:
        if A.shape == (1, 1):
            p = A[0, 0]
            return cls((p.monic(),) if p else (), numeric_factorization(p, bits) if p else None)
        return cls(smith_normal_form(A).factors)


@dataclass(frozen=True)
class SpectralSample:
    level: int
    group_order: int
    rank: int
    sigma_plus: float | None
    m_plus: int | None
    alpha: float | None
    flags: tuple[str, ...] = ()
    tol_rank: float = DEFAULT_TOLERANCES.tol_rank
    tol_cluster: float = DEFAULT_TOLERANCES.tol_cluster
    precision_bits: int = 53

    @property
    def degenerate(self) -> bool:
        return self.alpha is None

    CSV_HEADER = "i,group_order,rank,sigma_plus,m_plus,alpha,flags"

    def csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else (repr(float(x)) if isinstance(x, float) else str(x))

        return ",".join([str(self.level), str(self.group_order), str(self.rank), fmt(self.sigma_plus),
                         fmt(self.m_plus), fmt(self.alpha), "|".join(self.flags)])

    def to_json(self) -> dict:
        return {"i": self.level, "group_order": self.group_order, "rank": self.rank,
                "sigma_plus": self.sigma_plus, "m_plus": self.m_plus, "alpha": self.alpha,
                "flags": list(self.flags), "tol_rank": self.tol_rank, "tol_cluster": self.tol_cluster,
                "precision_bits": self.precision_bits}


@dataclass(frozen=True)
class StepSDF:
    """Right-continuous step function: value ``base`` on [0, first jump), then ``F`` from each jump on."""

    base: Fraction
    jumps: tuple[tuple[float, Fraction], ...] = field(default=())

    def __call__(self, lam: float) -> Fraction:
        value = self.base
        for sigma, F in self.jumps:
            if lam >= sigma:
                value = F
            else:
                break
        return value

    @property
    def final(self) -> Fraction:
        return self.jumps[-1][1] if self.jumps else self.base

    def tsv(self) -> str:
        lines = [f"0.0\t{float(self.base)!r}"]
        lines += [f"{sigma!r}\t{float(F)!r}" for sigma, F in self.jumps]
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# evaluation at roots of unity

def _symmetric(ks: np.ndarray, i: int) -> np.ndarray:
    # k and i-k map to exactly conjugate points
    return np.where(ks > i // 2, ks - i, ks)


def roots_of_unity(i: int, ks: np.ndarray | None = None) -> np.ndarray:
    ks = np.arange(i) if ks is None else np.asarray(ks)
    return np.exp(2j * np.pi * _symmetric(ks, i) / i)


def _eval_poly_at(val: int, coeffs: np.ndarray, i: int, ks: np.ndarray) -> np.ndarray:
    if coeffs.size == 0:
        return np.zeros(ks.shape, dtype=complex)
    z = roots_of_unity(i, ks)
    acc = np.full(ks.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    if val:
        acc = acc * roots_of_unity(i, (ks * val) % i)
    return acc


def _eval_matrix(A: LaurentMatrix, i: int, ks: np.ndarray) -> np.ndarray:
    out = np.empty((len(ks), A.rows, A.cols), dtype=complex)
    for j, row in enumerate(A.complex_coefficients()):
        for k, (val, coeffs) in enumerate(row):
            out[:, j, k] = _eval_poly_at(val, coeffs, i, ks)
    return out


def _mp_root_of_unity(k: int, i: int):
    k = k - i if k > i // 2 else k
    return mpmath.expjpi(mpmath.mpf(2 * k) / i)


def _mp_eval(p: LaurentPoly, z):
    if not p:
        return mpmath.mpc(0)
    acc = mpmath.mpc(0)
    for c in reversed(p.dense):
        acc = acc * z + c.to_mpc()
    return acc * z ** p.valuation


def dft_blocks(A: LaurentMatrix, i: int, bits: int | None = None):
    """Block k is A evaluated at exp(2 pi i k / i).

    Double precision returns an (i, r, s) complex array; with ``bits`` a list of
    mpmath matrices.
    """
    if i < 1:
        raise InvalidArgument("level must be positive")
    if bits is None:
        return _eval_matrix(A, i, np.arange(i))
    out = []
    with mpmath.workprec(bits):
        for k in range(i):
            z = _mp_root_of_unity(k, i)
            out.append(mpmath.matrix([[_mp_eval(x, z) for x in row] for row in A.entries]))
    return out


def block_singular_values(blocks: np.ndarray) -> np.ndarray:
    """Per-block singular values, each row sorted descending; shape (i, min(r, s))."""
    if blocks.shape[1] == 1 or blocks.shape[2] == 1:
        return np.linalg.norm(blocks.reshape(blocks.shape[0], -1), axis=1)[:, None]
    return np.linalg.svd(blocks, compute_uv=False)


def _mp_block_singular_values(A: LaurentMatrix, i: int, k: int, bits: int,
                              factorization: NumericFactorization | None) -> list:
    with mpmath.workprec(bits):
        z = _mp_root_of_unity(k, i)
        if A.shape == (1, 1):
            p = A[0, 0]
            if factorization is not None:
                return [abs(factorization.evaluate(z, bits))]
            return [abs(_mp_eval(p, z))]
        M = mpmath.matrix([[_mp_eval(x, z) for x in row] for row in A.entries])
        if A.rows == 1 or A.cols == 1:
            return [mpmath.norm(M)]
        sv = mpmath.svd_c(M, compute_uv=False)
        return sorted((abs(sv[j]) for j in range(sv.rows)), reverse=True)


# --------------------------------------------------------------------------
# exact side

def exact_zero_count(p: LaurentPoly, i: int) -> int:
    """Number of i-th roots of unity annihilated by p: deg gcd(p, z^i - 1)."""
    if not p:
        raise InvalidArgument("zero polynomial")
    return gcd_with_zpow_minus_one(p, i).span


def exact_rank_level(factors, i: int) -> int:
    return sum(i - exact_zero_count(p, i) for p in factors)


def _vanishing_blocks(p: LaurentPoly, i: int) -> np.ndarray:
    """Indices k with p(w^k) = 0 exactly. The count comes from the gcd; the numerics only locate them."""
    g = gcd_with_zpow_minus_one(p, i)
    if g.span == 0:
        return np.zeros(0, dtype=int)
    ks = np.arange(i)
    vals = np.abs(_eval_poly_at(0, np.array([complex(c) for c in g.dense]), i, ks))
    return np.argsort(vals, kind="stable")[:g.span]


def block_ranks(factors, i: int) -> np.ndarray:
    """Exact rank of every DFT block: the number of invariant factors not vanishing there."""
    ranks = np.full(i, len(factors), dtype=int)
    for p in factors:
        ranks[_vanishing_blocks(p, i)] -= 1
    return ranks


# --------------------------------------------------------------------------

@dataclass
class _LevelSpectrum:
    values: np.ndarray  # retained positive singular values, ascending
    rank: int
    bits: int
    escalated: int


def _level_spectrum(A: LaurentMatrix, i: int, tols: Tolerances, exact: ExactData | None) -> _LevelSpectrum:
    sv = block_singular_values(_eval_matrix(A, i, np.arange(i)))
    smax = float(sv.max()) if sv.size else 0.0
    if smax == 0.0 and exact is None:
        return _LevelSpectrum(np.zeros(0), 0, 53, 0)

    if exact is not None:
        ranks = block_ranks(exact.factors, i)
        cols = np.arange(sv.shape[1])
        keep = cols[None, :] < ranks[:, None]
        dropped = sv[~keep]
        if dropped.size and dropped.max() > tols.tol_rank * smax:
            raise PrecisionError(f"level {i}: a singular value {dropped.max():.3e} is numerically nonzero "
                                 "where the exact rank says zero")
        suspicious = np.where(keep, sv, np.inf).min(axis=1) < tols.escalate_below
    else:
        keep = sv > tols.tol_rank * smax
        suspicious = sv.min(axis=1) < tols.escalate_below

    esc = np.flatnonzero(suspicious)
    bits = 53
    values = [sv[keep]]
    if esc.size:
        bits = tols.bits
        mask = np.ones(i, dtype=bool)
        mask[esc] = False
        values = [sv[mask][keep[mask]]]
        factorization = exact.factorization if exact is not None else None
        floor = tols.tol_rank_extended * smax
        extra = []
        for k in esc:
            hp = _mp_block_singular_values(A, i, int(k), tols.bits, factorization)
            if exact is not None:
                kept = hp[:ranks[k]]
                if kept and min(kept) <= floor:
                    raise PrecisionError(f"level {i}: block {k} is exactly nonsingular but its smallest "
                                         f"singular value is below the {tols.bits}-bit floor")
            else:
                kept = [v for v in hp if v > floor]
            extra.extend(float(v) for v in kept)
        values.append(np.array(extra, dtype=float))
    allv = np.sort(np.concatenate(values))
    return _LevelSpectrum(allv, int(allv.size), bits, int(esc.size))


def spectral_sample(A: LaurentMatrix, i: int, group_order: int | None = None,
                    tols: Tolerances = DEFAULT_TOLERANCES, exact: ExactData | None = None) -> SpectralSample:
    """sigma_plus, m_plus, rank and alpha = log(m_plus/group_order)/log(sigma_plus) of A_i.

    With ``exact`` the rank of each block is taken from the invariant factors and
    the numeric spectrum is audited against it.
    """
    if i < 1:
        raise InvalidArgument("level must be positive")
    group_order = group_order or i
    spec = _level_spectrum(A, i, tols, exact)
    flags = ["escalated"] if spec.escalated else []
    common = dict(level=i, group_order=group_order, tol_rank=tols.tol_rank, tol_cluster=tols.tol_cluster,
                  precision_bits=spec.bits)
    if spec.rank == 0:
        return SpectralSample(rank=0, sigma_plus=None, m_plus=None, alpha=None,
                              flags=tuple(flags + ["zero_quotient"]), **common)
    sp = float(spec.values[0])
    m_plus = int(np.count_nonzero(np.abs(spec.values - sp) <= tols.tol_cluster * sp))
    if abs(sp - 1.0) <= tols.tol_cluster:
        alpha = None
        flags.append("alpha_undefined")
    else:
        alpha = math.log(m_plus / group_order) / math.log(sp)
    return SpectralSample(rank=spec.rank, sigma_plus=sp, m_plus=m_plus, alpha=alpha, flags=tuple(flags), **common)


def sdf_step(A: LaurentMatrix, i: int, group_order: int | None = None,
             tols: Tolerances = DEFAULT_TOLERANCES, exact: ExactData | None = None) -> StepSDF:
    """Spectral distribution function of A_i: jumps of m_j/group_order at the singular values."""
    group_order = group_order or i
    spec = _level_spectrum(A, i, tols, exact)
    total = A.rows * i
    base = Fraction(total - spec.rank, group_order)
    jumps: list[tuple[float, Fraction]] = []
    count = total - spec.rank
    vals = spec.values
    j = 0
    while j < vals.size:
        start = vals[j]
        k = j
        while k < vals.size and vals[k] - start <= tols.tol_cluster * start:
            k += 1
        count += k - j
        jumps.append((float(start), Fraction(count, group_order)))
        j = k
    return StepSDF(base, tuple(jumps))


def dense_quotient(A: LaurentMatrix, i: int, max_entries: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """The (r i) x (s i) block-circulant matrix of right multiplication by A_i on C[Z/i]."""
    R, C = A.rows * i, A.cols * i
    if R * C > max_entries:
        raise ResourceError(f"dense quotient {R}x{C} exceeds the cap of {max_entries} entries")
    M = np.zeros((R, C), dtype=complex)
    ks = np.arange(i)
    for p, row in enumerate(A.entries):
        for q, x in enumerate(row):
            for e, c in x.coeffs.items():
                np.add.at(M, (p * i + ks, q * i + (ks + e) % i), complex(c))
    return M
