"""Net extrema over the divisibility order, Diophantine record searches, and
the alpha-number report for a Laurent polynomial with irrational unit-circle roots.

For the index set of positive integers directed by divisibility,

    liminf x_i = sup_K inf_{K | i} x_i,     limsup x_i = inf_K sup_{K | i} x_i.

A finite scan replaces sup/inf over K by max/min over a chosen K_set and the
inner extrema by extrema over sampled multiples.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import HypothesisViolation, InvalidArgument
from .exact import GaussianRational, LaurentPoly, gaussian
from .ns_exact import UnitCircleRoot, ns_number, unit_circle_roots
from .quotients import DEFAULT_TOLERANCES, ExactData, SpectralSample, Tolerances, spectral_sample
from .smith import LaurentMatrix

log = logging.getLogger(__name__)

FILTER_BITS = 256


@dataclass
class NetEstimate:
    liminf_est: float
    limsup_est: float
    per_K: dict[int, tuple[float, float]]
    witnesses: dict[str, tuple[int, int]]  # "liminf"/"limsup" -> (K, level)
    inner_witnesses: dict[int, tuple[int, int]]  # K -> (argmin level, argmax level)
    samples_used: int
    i_max: int
    K_set: tuple[int, ...]
    excluded: tuple[int, ...] = ()
    skipped_K: tuple[int, ...] = ()

    @property
    def consistent(self) -> bool:
        return self.liminf_est <= self.limsup_est

    def to_json(self) -> dict:
        return {"liminf_est": self.liminf_est, "limsup_est": self.limsup_est,
                "per_K": {str(K): {"inf": lo, "sup": hi, "argmin": self.inner_witnesses[K][0],
                                   "argmax": self.inner_witnesses[K][1]} for K, (lo, hi) in self.per_K.items()},
                "witnesses": {k: {"K": K, "i": i} for k, (K, i) in self.witnesses.items()},
                "budget": {"samples": self.samples_used, "i_max": self.i_max, "K_set": list(self.K_set)},
                "excluded_levels": list(self.excluded), "skipped_K": list(self.skipped_K)}


def net_extrema(samples: Mapping[int, float | None], K_set: Iterable[int], i_max: int | None = None) -> NetEstimate:
    """Estimate net liminf/limsup from sampled values; ``None`` marks degenerate levels."""
    if not samples:
        raise InvalidArgument("no samples")
    K_set = tuple(sorted(set(K_set)))
    if not K_set or any(K < 1 for K in K_set):
        raise InvalidArgument("K_set must contain positive integers")
    i_max = i_max or max(samples)
    excluded = tuple(sorted(i for i, v in samples.items() if v is None and i <= i_max))
    good = {i: float(v) for i, v in samples.items() if v is not None and i <= i_max}

    per_K, inner, skipped = {}, {}, []
    for K in K_set:
        mult = [i for i in sorted(good) if i % K == 0]
        if not mult:
            log.warning("K = %d has no sampled multiple up to %d; skipped", K, i_max)
            skipped.append(K)
            continue
        lo = min(mult, key=lambda i: good[i])
        hi = max(mult, key=lambda i: good[i])
        per_K[K] = (good[lo], good[hi])
        inner[K] = (lo, hi)
    if not per_K:
        raise InvalidArgument("no K in K_set has a sampled multiple")
    K_lo = max(per_K, key=lambda K: per_K[K][0])
    K_hi = min(per_K, key=lambda K: per_K[K][1])
    est = NetEstimate(per_K[K_lo][0], per_K[K_hi][1], per_K,
                      {"liminf": (K_lo, inner[K_lo][0]), "limsup": (K_hi, inner[K_hi][1])}, inner,
                      len(good), i_max, K_set, excluded, tuple(skipped))
    if not est.consistent:
        log.warning("liminf estimate %.6g exceeds limsup estimate %.6g: K_set multiples too sparsely sampled",
                    est.liminf_est, est.limsup_est)
    return est


# --------------------------------------------------------------------------
# best-approximation records

@dataclass(frozen=True)
class ApproxRecord:
    n: int
    distance: Fraction  # |a^(K n) - 1|^2, exact
    float_distance: float

    @property
    def abs_distance(self) -> float:
        return math.sqrt(self.float_distance)


class RecordList(list):
    """Records in increasing n; ``period`` is set when a^K turned out to be a root of unity."""

    def __init__(self, items=(), period: int | None = None, K: int = 1):
        super().__init__(items)
        self.period = period
        self.K = K


def _on_circle(a: GaussianRational) -> None:
    if a.norm() != 1:
        raise InvalidArgument(f"|a|^2 = {a.norm()} is not 1")
    if a == 1:
        raise InvalidArgument("a = 1 has no approximation records")


def best_approx_records(a, K: int, n_max: int) -> RecordList:
    """Every n <= n_max at which |a^(K n) - 1| is strictly below all earlier values.

    a = (u + v i)/d is powered as a Gaussian integer over d^n. A 256-bit float
    power screens candidates; each candidate is confirmed by an exact
    cross-multiplied comparison of real parts (|w - 1|^2 = 2 - 2 Re w on the circle).
    """
    a = gaussian(a)
    _on_circle(a)
    if K < 1 or n_max < 1:
        raise InvalidArgument("K and n_max must be positive")
    b = a ** K
    d = lcm(b.re.denominator, b.im.denominator)
    u, v = int(b.re * d), int(b.im * d)
    x, y, den = 1, 0, 1  # b^n = (x + y i) / den
    out = RecordList(K=K)
    best_x, best_den = None, 1
    with mpmath.workprec(FILTER_BITS):
        bf = mpmath.mpc(b.re.numerator, 0) / b.re.denominator + mpmath.mpc(0, b.im.numerator) / b.im.denominator
        wf = mpmath.mpc(1)
        best_re = mpmath.mpf(-2)
        margin = mpmath.mpf(2) ** -(FILTER_BITS // 2)
        for n in range(1, n_max + 1):
            x, y, den = x * u - y * v, x * v + y * u, den * d
            wf *= bf
            if wf.real < best_re - margin:
                continue
            if x == den and y == 0:
                out.period = n
                break
            if best_x is None or x * best_den > best_x * den:
                best_x, best_den = x, den
                best_re = max(best_re, wf.real)
                dist = Fraction(2 * (den - x), den)
                out.append(ApproxRecord(n, dist, float(dist)))
    return out


def argument_turns(a, bits: int = FILTER_BITS):
    """arg(a)/(2 pi) in [0, 1) as an mpf."""
    with mpmath.workprec(bits):
        z = a.to_mpc() if isinstance(a, GaussianRational) else mpmath.mpc(a)
        t = mpmath.arg(z) / (2 * mpmath.pi)
        return t - mpmath.floor(t)


def convergent_records(theta, n_max: int, bits: int = FILTER_BITS) -> list[int]:
    """Best approximations of the second kind of theta: n with ||n theta|| below all earlier values.

    These are continued-fraction convergent denominators; the list is filtered so
    that the distance strictly decreases, which handles the degenerate first
    terms. Used as an independent cross-check of the exact record search.
    """
    out: list[int] = []
    with mpmath.workprec(bits):
        x = mpmath.mpf(theta) % 1
        q_prev, q = 0, 1
        best = mpmath.inf
        r = x
        while q <= n_max:
            dist = abs(q * x - mpmath.nint(q * x))
            if dist < best and (not out or q > out[-1]):
                if dist == 0:
                    break
                out.append(q)
                best = dist
            if r == 0:
                break
            r = 1 / r
            a = int(mpmath.floor(r))
            r -= a
            if r < mpmath.mpf(2) ** -(bits - 16):
                r = mpmath.mpf(0)
            q_prev, q = q, a * q + q_prev
    return out


# --------------------------------------------------------------------------
# separated indices

def index_separation(roots: Sequence[UnitCircleRoot], K: int, levels) -> np.ndarray:
    """min over non-root-of-unity roots of ||K i t||: the angular distance to the nearest
    (K i)-th root of unity scaled by K i / (2 pi). Returns 1/2 where every root is a root of unity."""
    levels = np.asarray(levels, dtype=np.int64)
    sep = np.full(levels.shape, 0.5)
    for root in roots:
        if root.root_of_unity_order is not None:
            continue
        t = root.turns_mp(FILTER_BITS)
        # split t = hi + lo so that (K i) t keeps ~30 more bits than a bare double product
        hi = float(t)
        lo = float(t - mpmath.mpf(hi))
        m = K * levels
        prod = (m * hi) % 1.0 + m * lo
        frac = prod - np.round(prod)
        sep = np.minimum(sep, np.abs(frac))
    return sep


class SeparatedIndices(NamedTuple):
    R: float
    indices: list[int]


def separated_index_search(roots: Sequence[UnitCircleRoot], K: int, i_range: tuple[int, int],
                           R: float = 0.25) -> SeparatedIndices:
    """Levels i in [lo, hi] whose scaled separation is at least R; reports the separation achieved.

    When every root is a root of unity every level qualifies and R is returned unchanged.
    """
    if not 0 < R < 0.5:
        raise InvalidArgument("R must lie in (0, 1/2)")
    lo, hi = i_range
    levels = np.arange(lo, hi + 1)
    if all(r.root_of_unity_order is not None for r in roots):
        return SeparatedIndices(R, levels.tolist())
    sep = index_separation(roots, K, levels)
    keep = sep >= R
    if not keep.any():
        return SeparatedIndices(0.0, [])
    return SeparatedIndices(float(sep[keep].min()), levels[keep].tolist())


def pinned_subfamily(roots, K: int, candidates: Sequence[int], R: float, per_decade: int = 8) -> list[int]:
    """One candidate per log-spaced window: the one whose separation is closest to R.

    Holding the separation nearly constant isolates the dependence of alpha on
    the level, so the deviation from the limit is comparable along the family.
    """
    if not candidates:
        return []
    cand = np.asarray(sorted(candidates))
    sep = index_separation(roots, K, cand)
    lo, hi = cand[0], cand[-1]
    windows = max(1, int(round(per_decade * math.log10(hi / lo)))) if hi > lo else 1
    edges = np.geomspace(lo, hi + 1, windows + 1)
    out = []
    for a, b in zip(edges, edges[1:]):
        mask = (cand >= a) & (cand < b)
        if mask.any():
            idx = np.flatnonzero(mask)
            out.append(int(cand[idx[np.argmin(np.abs(sep[idx] - R))]]))
    return out


# --------------------------------------------------------------------------
# report

@dataclass(frozen=True)
class ReportConfig:
    K_set: tuple[int, ...] = (1,)
    n_max: int = 100_000
    i_budget: int = 100_000
    i_min: int | None = None  # None: first_contracting_level(p)
    sep_range: tuple[int, int] = (1_000, 100_000)
    sep_R: float = 0.25
    sep_per_decade: int = 8
    background_points: int = 24
    tols: Tolerances = DEFAULT_TOLERANCES

    def to_json(self) -> dict:
        return {"K_set": list(self.K_set), "n_max": self.n_max, "i_budget": self.i_budget, "i_min": self.i_min,
                "sep_range": list(self.sep_range), "sep_R": self.sep_R, "sep_per_decade": self.sep_per_decade,
                "background_points": self.background_points, "tol_rank": self.tols.tol_rank,
                "tol_cluster": self.tols.tol_cluster, "precision_bits": self.tols.bits}


@dataclass
class CounterexampleReport:
    p: LaurentPoly
    ns: object
    config: ReportConfig
    records: dict[int, dict[int, RecordList]]  # K -> root index -> records
    record_samples: dict[int, list[SpectralSample]]  # K -> samples along record levels
    separated: dict[int, dict]  # K -> {"R", "count", "levels", "samples"}
    samples: dict[int, SpectralSample]
    net_estimate: NetEstimate
    flags: list[str] = field(default_factory=list)
    baker: dict | None = None

    def descending_table(self, K: int) -> list[SpectralSample]:
        """Record-level samples at which alpha reaches a new minimum."""
        out, best = [], math.inf
        for s in self.record_samples.get(K, []):
            if s.alpha is not None and s.alpha < best:
                out.append(s)
                best = s.alpha
        return out

    def alpha_csv(self) -> str:
        lines = ["K,i,alpha"]
        for K in self.config.K_set:
            for i in sorted(self.samples):
                if i % K == 0 and self.samples[i].alpha is not None:
                    lines.append(f"{K},{i},{self.samples[i].alpha!r}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        recs = {}
        for K, per_root in self.records.items():
            recs[str(K)] = [{"root_turns": t, "period": rl.period,
                             # exact distances run to tens of thousands of digits; the bit length stands in
                             "records": [{"n": r.n, "level": K * r.n, "float_distance": r.float_distance,
                                          "abs_distance": r.abs_distance,
                                          "denominator_bits": r.distance.denominator.bit_length()} for r in rl]}
                            for t, rl in per_root.items()]
        out = {"polynomial": str(self.p), "ns_number": self.ns.to_json(), "flags": self.flags,
               "config": self.config.to_json(), "records": recs,
               "record_alpha": {str(K): [s.to_json() for s in v] for K, v in self.record_samples.items()},
               "descending": {str(K): [{"i": s.level, "alpha": s.alpha} for s in self.descending_table(K)]
                              for K in self.record_samples},
               "separated": {str(K): {**{k: v for k, v in sep.items() if k != "samples"},
                                      "samples": [s.to_json() for s in sep["samples"]]}
                             for K, sep in self.separated.items()},
               "samples": [self.samples[i].to_json() for i in sorted(self.samples)],
               "net_estimate": self.net_estimate.to_json()}
        if self.baker is not None:
            out["baker"] = self.baker
        return out


def first_contracting_level(p: LaurentPoly, roots: Sequence[UnitCircleRoot] | None = None) -> int:
    """A level from which sigma_plus(A_i) < 1 is guaranteed for the 1x1 matrix (p).

    With M = sum |k c_k| >= max |p'| on the circle, some nonzero block sits within
    angle pi/i of an irrational unit-circle root, or 2 pi/i of a root of unity, so
    |p| there is below 1 once i exceeds pi M (resp. 2 pi M). Smaller levels give
    erratic alpha values of either sign.
    """
    roots = unit_circle_roots(p) if roots is None else roots
    M = sum(abs(k) * abs(complex(c)) for k, c in p.coeffs.items())
    c = 2 if any(r.root_of_unity_order is not None for r in roots) else 1
    return max(3, math.floor(c * math.pi * M) + 1)


def _records_for_root(root: UnitCircleRoot, p_roots_exact: dict, K: int, n_max: int) -> RecordList:
    exact_root = p_roots_exact.get(id(root))
    if exact_root is not None:
        return best_approx_records(exact_root, K, n_max)
    # irrational root: records from the continued fraction of K t at 256 bits
    t = root.turns_mp(FILTER_BITS)
    ns = convergent_records(K * t, n_max)
    out = RecordList(K=K)
    with mpmath.workprec(FILTER_BITS):
        for n in ns:
            d = 4 * mpmath.sin(mpmath.pi * (K * n * t - mpmath.nint(K * n * t))) ** 2
            out.append(ApproxRecord(n, Fraction(float(d)), float(d)))
    return out


def _gaussian_roots(p: LaurentPoly, roots: Sequence[UnitCircleRoot]) -> dict:
    """Map unit-circle roots that are Gaussian rationals (linear factors over Q(i)) to exact values."""
    out = {}
    c = p.ordinary()
    for root in roots:
        z = complex(root.approx)
        for scale in range(1, 65):
            guess = GaussianRational(Fraction(round(z.real * scale), scale), Fraction(round(z.imag * scale), scale))
            if guess.norm() == 1 and _vanishes(c, guess):
                out[id(root)] = guess
                break
    return out


def _vanishes(c, z: GaussianRational) -> bool:
    acc = GaussianRational()
    for x in reversed(c):
        acc = acc * z + x
    return not acc


def counterexample_report(p: LaurentPoly, config: ReportConfig = ReportConfig(),
                          baker_D: float | None = None) -> CounterexampleReport:
    """Alpha numbers of the 1x1 matrix (p) along record levels, separated levels and a log grid."""
    if not p:
        raise InvalidArgument("zero polynomial")
    if not unit_circle_roots(p, bits=config.tols.bits):
        raise InvalidArgument(f"{p} has no roots on the unit circle")
    return net_report(LaurentMatrix([[p]]), config, baker_D)


def net_report(A: LaurentMatrix, config: ReportConfig = ReportConfig(), baker_D: float | None = None,
               coset_count: int = 1) -> CounterexampleReport:
    """Sample alpha(A_i) where the Diophantine structure of the last invariant factor p_k matters.

    Levels: K n for approximation records n of the unit-circle roots of p_k,
    a pinned separated family, and a log-spaced grid of multiples of each K.
    ``coset_count`` is [G : Z] for a restricted group-ring matrix; the group
    order at level i is then coset_count * i.
    """
    from .baker import liminf_floor  # local: baker imports nets

    if A.is_zero():
        raise HypothesisViolation("zero matrix: the Novikov-Shubin number is infinity-plus")
    exact = ExactData.of(A, config.tols.bits)
    # the 1x1 entry keeps its scale, which the contracting-level bound depends on
    p = A[0, 0] if A.shape == (1, 1) else exact.factors[-1]
    roots = unit_circle_roots(p, bits=config.tols.bits)
    if not roots:
        raise HypothesisViolation(f"last invariant factor {p} has no unit-circle roots: "
                                  "the Novikov-Shubin number is infinity-plus")
    ns = ns_number(p)
    irrational = [r for r in roots if r.root_of_unity_order is None]
    flags = [] if irrational else ["all unit-circle roots are roots of unity"]
    if config.i_min is None:
        config = replace(config, i_min=first_contracting_level(p, roots))
    exact_roots = _gaussian_roots(p, irrational)

    samples: dict[int, SpectralSample] = {}

    def sample(i: int) -> SpectralSample:
        if i not in samples:
            samples[i] = spectral_sample(A, i, coset_count * i, config.tols, exact)
        return samples[i]

    records: dict[int, dict] = {}
    record_samples: dict[int, list[SpectralSample]] = {}
    separated: dict[int, dict] = {}
    for K in config.K_set:
        per_root = {}
        levels = set()
        # conjugate roots share records; one per conjugate pair is enough
        seen = []
        for root in irrational:
            t = root.turns
            if any(abs(t + s - 1) < 1e-12 or abs(t - s) < 1e-12 for s in seen):
                continue
            seen.append(t)
            rl = _records_for_root(root, exact_roots, K, config.n_max)
            per_root[t] = rl
            levels.update(K * r.n for r in rl if config.i_min <= K * r.n <= config.i_budget)
        records[K] = per_root
        record_samples[K] = [sample(i) for i in sorted(levels)]

        lo, hi = config.sep_range
        lo, hi = max(lo, -(-config.i_min // K)), min(hi, config.i_budget // K)
        if lo <= hi:
            found = separated_index_search(roots, K, (lo, hi), config.sep_R)
            family = pinned_subfamily(roots, K, found.indices, config.sep_R, config.sep_per_decade)
            sep_of = dict(zip(family, index_separation(roots, K, family).tolist())) if family else {}
            separated[K] = {"R": found.R, "R_requested": config.sep_R, "count": len(found.indices),
                            "range": [lo, hi], "levels": family,
                            "separation": [sep_of[i] for i in family],
                            "samples": [sample(K * i) for i in family]}

    grid = np.geomspace(config.i_min, config.i_budget, config.background_points)
    for K in config.K_set:
        for i in np.unique(np.maximum(np.round(grid / K), 1).astype(int) * K):
            if config.i_min <= i <= config.i_budget:
                sample(int(i))

    net = net_extrema({i: s.alpha for i, s in samples.items()}, config.K_set, config.i_budget)
    report = CounterexampleReport(p, ns, config, records, record_samples, separated, samples, net, flags)
    if baker_D is not None:
        floor = liminf_floor(ns, baker_D)
        alphas = [s.alpha for s in samples.values() if s.alpha is not None]
        report.baker = {"D": baker_D, "liminf_floor": floor,
                        "floor_fraction": str(Fraction(ns.value) / (1 + Fraction(baker_D))),
                        "min_sampled_alpha": min(alphas) if alphas else None,
                        "all_samples_above_floor": all(a > floor for a in alphas)}
    return report
