"""The closed-form optimal level-set bound and its special-case oracles.

For a Carleson bound C >= 1 the function evaluated here is

    value(A, t) = 1                                       if t <= 0
                = min(1, A / ceil(t))                     if 0 < t <= floor(C)
                = (A / floor(C)) * ((C-1)/C)^(ceil(t) - floor(C))   otherwise

on the domain A in [0, C], t real.  It equals the supremum, over all
C-Carleson selections with root average A, of the normalized measure of
the set where the height function reaches t.  The fixed-parameter oracles
for C = 1, C = 2 and C = 16/5 are independent transcriptions kept solely
for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .dyadic import RationalLike, ceil_rational, floor_rational, to_fraction

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class CandidateParams:
    """Carleson bound C with its precomputed floor, fractional part and decay ratio."""

    C: Fraction
    floor_c: int
    frac_c: Fraction
    decay: Fraction

    @classmethod
    def from_constant(cls, C: RationalLike) -> "CandidateParams":
        c = to_fraction(C)
        if c < 1:
            raise ValueError(f"C must be >= 1, got {c}")
        fl = floor_rational(c)
        return cls(C=c, floor_c=fl, frac_c=c - fl, decay=(c - 1) / c)


@dataclass(frozen=True)
class BellmanPoint:
    """A point (average, threshold) in the domain [0, C] x R."""

    avg: Fraction
    lam: Fraction

    @classmethod
    def of(cls, avg: RationalLike, lam: RationalLike) -> "BellmanPoint":
        return cls(to_fraction(avg), to_fraction(lam))


def _require_domain(avg: Fraction, upper: Fraction) -> None:
    if not 0 <= avg <= upper:
        raise ValueError(f"average {avg} outside the domain [0, {upper}]")


def candidate_eval(params: CandidateParams, pt: BellmanPoint) -> Fraction:
    """Evaluate the closed-form bound exactly."""
    _require_domain(pt.avg, params.C)
    if pt.lam <= 0:
        return ONE
    m = ceil_rational(pt.lam)
    if pt.lam <= params.floor_c:
        return min(ONE, Fraction(pt.avg, m))
    # the exponent is >= 1 here, so the C = 1 case decays to exactly 0
    return (pt.avg / params.floor_c) * params.decay ** (m - params.floor_c)


def candidate_c1(pt: BellmanPoint) -> Fraction:
    """Fixed C = 1 oracle: pairwise-disjoint selections only."""
    _require_domain(pt.avg, ONE)
    if pt.lam <= 0:
        return ONE
    if pt.lam <= 1:
        return pt.avg
    return ZERO


def candidate_c2(pt: BellmanPoint) -> Fraction:
    """Fixed C = 2 oracle."""
    _require_domain(pt.avg, Fraction(2))
    if pt.lam <= 0:
        return ONE
    if pt.lam <= 1:
        return min(ONE, pt.avg)
    return pt.avg / (1 << (ceil_rational(pt.lam) - 1))


def candidate_c32(pt: BellmanPoint) -> Fraction:
    """Fixed C = 16/5 oracle, transcribed branch by branch."""
    _require_domain(pt.avg, Fraction(16, 5))
    if pt.lam <= 0:
        return ONE
    if pt.lam <= 3:
        return min(ONE, Fraction(pt.avg, ceil_rational(pt.lam)))
    n = ceil_rational(pt.lam) - 3
    return pt.avg * Fraction(5, 16) * Fraction(11, 15) * Fraction(11, 16) ** (n - 1)


def candidate_fn(params: CandidateParams):
    """The candidate as a plain (avg, lam) -> Fraction callable."""

    def fn(avg: Fraction, lam: Fraction) -> Fraction:
        return candidate_eval(params, BellmanPoint(avg, lam))

    return fn


def candidate_surface(params: CandidateParams, a_grid_denominator_exp: int,
                      lambda_range: Tuple[int, int]) -> List[Tuple[Fraction, int, Fraction]]:
    """Exact values over the dyadic average grid and an integer threshold range."""
    if a_grid_denominator_exp < 0:
        raise ValueError("grid exponent must be >= 0")
    lo, hi = lambda_range
    if lo > hi:
        raise ValueError(f"empty threshold range [{lo}, {hi}]")
    scale = 1 << a_grid_denominator_exp
    max_index = (params.C.numerator * scale) // params.C.denominator
    rows: List[Tuple[Fraction, int, Fraction]] = []
    for j in range(max_index + 1):
        avg = Fraction(j, scale)
        for lam in range(lo, hi + 1):
            rows.append((avg, lam, candidate_eval(params, BellmanPoint(avg, Fraction(lam)))))
    return rows
