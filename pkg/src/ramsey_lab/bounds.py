"""Analytic tail bounds and closed-form expectations.

Binomial tail bounds (lower/upper Chernoff forms) and the polynomial
concentration threshold used for per-vertex cycle counts, plus the
closed-form expectations the Monte Carlo experiments compare against.
All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import ParameterError

__all__ = [
    "chernoff_lower",
    "chernoff_upper",
    "poly_concentration_scale",
    "poly_concentration_threshold",
    "PolyConcentrationBound",
    "ExpectedStats",
    "expected_stats",
    "CanonicalExpectedStats",
    "canonical_expected_stats",
]


def chernoff_lower(expectation: float, deviation: float) -> float:
    """Bound on Pr(X <= E - deviation) for X ~ Bin: exp(-dev^2 / (2E))."""
    if expectation <= 0:
        raise ParameterError(f"expectation must be positive, got {expectation}")
    if deviation < 0:
        raise ParameterError(f"deviation must be non-negative, got {deviation}")
    return math.exp(-(deviation * deviation) / (2.0 * expectation))


def chernoff_upper(expectation: float, deviation: float) -> float:
    """Bound on Pr(X >= E + deviation): exp(-dev^2 / (2(E + dev/3)))."""
    if expectation <= 0:
        raise ParameterError(f"expectation must be positive, got {expectation}")
    if deviation < 0:
        raise ParameterError(f"deviation must be non-negative, got {deviation}")
    return math.exp(-(deviation * deviation) / (2.0 * (expectation + deviation / 3.0)))


def _ipow(base: float, exponent: int) -> float:
    # repeated multiplication keeps power-of-two rescalings of the base exact
    out = 1.0
    for _ in range(exponent):
        out *= base
    return out


def poly_concentration_scale(k: int) -> float:
    """The degree-k scale constant 8^k * sqrt(k!)."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return _ipow(8.0, k) * math.sqrt(math.factorial(k))


class PolyConcentrationBound(NamedTuple):
    threshold: float
    tail_exponent: Callable[[float], float]


def poly_concentration_threshold(
    e_center: float, e_max: float, e_prime: float, k: int, lam: float
) -> PolyConcentrationBound:
    """Deviation threshold 8^k sqrt(k!) * sqrt(e_max * e_prime) * lam^k.

    The tail mass outside |Y - e_center| > threshold is O(exp(tail_exponent(n)))
    with tail_exponent(n) = -lam + (k-1) * ln(n).  Derivative maxima e_max and
    e_prime are supplied by the caller, not recomputed.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if lam <= 1:
        raise ParameterError(f"lam must exceed 1, got {lam}")
    if e_max < 0 or e_prime < 0 or e_center < 0:
        raise ParameterError("expectations must be non-negative")
    threshold = poly_concentration_scale(k) * math.sqrt(e_max * e_prime) * _ipow(lam, k)

    def tail_exponent(n: float) -> float:
        if n <= 1:
            raise ParameterError(f"n must exceed 1, got {n}")
        return -lam + (k - 1) * math.log(n)

    return PolyConcentrationBound(threshold, tail_exponent)


@dataclass(frozen=True)
class ExpectedStats:
    """Closed-form expectations for the random layered graph (part size m, prob p).

    total_cycles: E[t] = m^k p^k (each one-per-part k-tuple closes with p^k).
    cycles_per_vertex: m^(k-1) p^k.
    cycles_per_vertex_prime: m^(k-2) p^(k-1) (the first-derivative maximum).
    extensions_per_path: m p^2 (completions of a fixed (k-1)-path).
    """

    k: int
    m: float
    p: float
    total_cycles: float
    cycles_per_vertex: float
    cycles_per_vertex_prime: float
    extensions_per_path: float

    def family_extensions(self, paths: int) -> float:
        """Expected completions over a family of disjoint (k-1)-paths."""
        return paths * self.extensions_per_path


def expected_stats(k: int, m: float, p: float) -> ExpectedStats:
    if k < 3:
        raise ParameterError(f"k must be >= 3, got {k}")
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    return ExpectedStats(
        k=k,
        m=m,
        p=p,
        total_cycles=_ipow(m, k) * _ipow(p, k),
        cycles_per_vertex=_ipow(m, k - 1) * _ipow(p, k),
        cycles_per_vertex_prime=_ipow(m, k - 2) * _ipow(p, k - 1),
        extensions_per_path=m * p * p,
    )


@dataclass(frozen=True)
class CanonicalExpectedStats:
    """Specialization to m = c*n with c = 16 k^2 r and p = sqrt(ln n / n)."""

    k: int
    r: int
    n: int
    c: int
    p: float
    family_extensions: float  # c * n * ln n over a family of n paths
    restricted_pairs: float  # 2 n ln n, the Bin(2n^2, p^2) mean used as comparator
    cycles_per_vertex: float
    cycles_per_vertex_prime: float

    def generalized(self) -> ExpectedStats:
        return expected_stats(self.k, self.c * self.n, self.p)


def canonical_expected_stats(k: int, r: int, n: int) -> CanonicalExpectedStats:
    if k < 3 or r < 2 or n < k:
        raise ParameterError(f"need k >= 3, r >= 2, n >= k; got k={k}, r={r}, n={n}")
    c = 16 * k * k * r
    ln_n = math.log(n)
    p = math.sqrt(ln_n / n)
    cn = float(c * n)
    return CanonicalExpectedStats(
        k=k,
        r=r,
        n=n,
        c=c,
        p=p,
        family_extensions=c * n * ln_n,
        restricted_pairs=2.0 * n * ln_n,
        cycles_per_vertex=_ipow(cn, k - 1) * _ipow(p, k),
        cycles_per_vertex_prime=_ipow(cn, k - 2) * _ipow(p, k - 1),
    )
