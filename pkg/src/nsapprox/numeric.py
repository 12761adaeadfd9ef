"""Numeric root finding and factored-form evaluation.

Roots start from companion-matrix eigenvalues in double precision and are
polished by Weierstrass (Durand-Kerner) simultaneous iteration in mpmath.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import InvalidArgument, PrecisionError
from .exact import LaurentPoly, squarefree_decomposition

DEFAULT_BITS = 128


def _horner(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def poly_roots(p: LaurentPoly, bits: int = DEFAULT_BITS, max_iter: int = 500) -> list:
    """All nonzero roots of a squarefree Laurent polynomial as ``mpc`` values."""
    if not p:
        raise InvalidArgument("roots of the zero polynomial")
    c = p.ordinary()
    n = len(c) - 1
    if n == 0:
        return []
    with mpmath.workprec(bits + 32):
        mc = [x.to_mpc() for x in c]
        lead = mc[-1]
        mc = [x / lead for x in mc]
        if n == 1:
            return [-mc[0]]
        start = np.roots([complex(x) for x in reversed(mc)])
        zs = [mpmath.mpc(complex(s)) for s in start]
        # spread coincident starts; iteration needs distinct seeds
        for j in range(n):
            for k in range(j):
                if abs(zs[j] - zs[k]) < mpmath.mpf(2) ** -40:
                    zs[j] += mpmath.mpc(1e-8 * (j + 1), 1e-8 * (k + 1))
        eps = mpmath.mpf(2) ** (-bits)
        for _ in range(max_iter):
            worst = mpmath.mpf(0)
            for j in range(n):
                den = mpmath.mpc(1)
                for k in range(n):
                    if k != j:
                        den *= zs[j] - zs[k]
                if den == 0:
                    raise PrecisionError("root iteration collapsed onto a repeated root")
                dz = _horner(mc, zs[j]) / den
                zs[j] -= dz
                rel = abs(dz) / max(1, abs(zs[j]))
                if rel > worst:
                    worst = rel
            if worst < eps:
                break
        else:
            raise PrecisionError(f"root polishing did not converge in {max_iter} iterations")
    with mpmath.workprec(bits):
        return [+z for z in zs]


@dataclass(frozen=True)
class NumericFactorization:
    """p = lead * z**valuation * prod (z - root)**mult with roots known to ``bits`` bits."""

    lead: object
    valuation: int
    roots: tuple
    bits: int

    def evaluate(self, z, bits: int | None = None):
        bits = bits or self.bits
        with mpmath.workprec(bits):
            z = mpmath.mpc(z)
            acc = self.lead * z ** self.valuation
            for r, m in self.roots:
                acc *= (z - r) ** m
            return +acc

    def abs_at(self, z, bits: int | None = None):
        return abs(self.evaluate(z, bits))


def numeric_factorization(p: LaurentPoly, bits: int = DEFAULT_BITS) -> NumericFactorization:
    if not p:
        raise InvalidArgument("factorization of the zero polynomial")
    roots = []
    for f, mult in squarefree_decomposition(p):
        roots.extend((r, mult) for r in poly_roots(f, bits))
    with mpmath.workprec(bits):
        lead = p.leading.to_mpc()
    return NumericFactorization(lead, p.valuation, tuple(roots), bits)
