"""Exact dynamic program for the largest level set at a fixed depth.

F_D(a, m) is the maximum, over depth-D sequences with Carleson constant at
most C and root average exactly a, of the normalized measure of the set
where the height reaches m.  Splitting at the root (select it or not, then
distribute the remaining average over the two halves) gives

    F_d(a, m) = max over g in {0, 1}, g <= a, and exact splits
                a = g + (a1 + a2) / 2   of
                (F_{d-1}(a1, m - g) + F_{d-1}(a2, m - g)) / 2,

with the obstacle F(., m <= 0) = 1 as the base.  The Carleson constraint
is hereditary: capping every state's average at min(C, depth + 1) enforces
it exactly, because an unselected node's average never exceeds the sup of
the selected subtree averages below it.

Internally a state at depth d stores its average as an integer numerator
at scale 2^d and its value as an integer leaf count out of 2^d, so the
whole recursion is big-int arithmetic; dyadic rationals appear only at the
API boundary.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from .candidate import BellmanPoint, CandidateParams, candidate_eval
from .dyadic import ROOT, DyadicRational, NodeAddress, RationalLike, ceil_rational, to_fraction
from .errors import AdmissibilityError, PrecisionError, ResourceLimitError
from .sequences import CarlesonSeq

DEFAULT_CELL_CAP = 1_000_000
DEFAULT_DEPTH_LIMIT = 12
CELL_CAP_ENV = "CARLEVEL_CELL_CAP"


def default_cell_cap() -> int:
    raw = os.environ.get(CELL_CAP_ENV)
    if raw is None:
        return DEFAULT_CELL_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{CELL_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ValueError(f"{CELL_CAP_ENV} must be positive")
    return cap


@dataclass(frozen=True)
class DPKey:
    depth: int
    average: DyadicRational
    level: int


@dataclass(frozen=True)
class DPCell:
    """A solved state: its value and the root choice achieving it.

    choice is (gamma, left average, right average) for an interior split,
    or None when the state is terminal (depth 0, an obstacle state, or a
    state whose value is identically 0 or 1 regardless of the split).
    """

    value: DyadicRational
    choice: Optional[Tuple[int, DyadicRational, DyadicRational]]


@dataclass(frozen=True)
class ConvergenceRow:
    depth: int
    value: DyadicRational
    gap: Fraction


class LevelSetDP:
    """Memoized solver for one Carleson bound C; reusable across depths."""

    def __init__(self, C: RationalLike, cell_cap: Optional[int] = None,
                 depth_limit: int = DEFAULT_DEPTH_LIMIT) -> None:
        self.C = to_fraction(C)
        if self.C < 1:
            raise ValueError(f"C must be >= 1, got {self.C}")
        self.cell_cap = default_cell_cap() if cell_cap is None else cell_cap
        self.depth_limit = depth_limit
        self.params = CandidateParams.from_constant(self.C)
        # state -> (count, gamma, left numerator); single-writer memo
        self._memo: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}
        self._caps: Dict[int, int] = {}

    # -- state space -----------------------------------------------------

    def _cap_num(self, d: int) -> int:
        """Largest admissible average numerator at depth d, scale 2^d."""
        cap = self._caps.get(d)
        if cap is None:
            cap = min((d + 1) << d, (self.C.numerator << d) // self.C.denominator)
            self._caps[d] = cap
        return cap

    def _check_key(self, depth: int, average: RationalLike, level: int) -> Tuple[int, int]:
        if depth < 0:
            raise ValueError("depth must be >= 0")
        f = to_fraction(average)
        if f > self.C:
            raise AdmissibilityError(f"average {f} exceeds the Carleson bound {self.C}")
        if f < 0 or f > depth + 1:
            raise ValueError(f"average {f} not reachable at depth {depth}")
        q = f.denominator
        if q & (q - 1) or q.bit_length() - 1 > depth:
            raise PrecisionError(f"average {f} not representable on the 2^-{depth} grid")
        return f.numerator << (depth - (q.bit_length() - 1)), level

    # -- core recursion ----------------------------------------------------

    def _count(self, d: int, n: int, m: int) -> int:
        """Number of level-d leaves reaching height m, maximized; in [0, 2^d]."""
        if m <= 0:
            return 1 << d
        if m > d + 1:
            return 0
        if d == 0:
            return 1 if n == 1 else 0
        key = (d, n, m)
        hit = self._memo.get(key)
        if hit is not None:
            return hit[0]
        full = 1 << d
        half = full >> 1
        child_cap = self._cap_num(d - 1)
        best = -1
        best_gamma = 0
        best_left = 0
        for gamma in (1, 0):
            if gamma and n < full:
                continue
            remaining = n - (gamma << d)
            lo = max(0, remaining - child_cap)
            hi = min(remaining // 2, child_cap)
            if lo > hi:
                continue
            mm = m - gamma
            if mm <= 0:
                best, best_gamma, best_left = full, gamma, hi
                break
            for n1 in range(lo, hi + 1):
                val = self._count(d - 1, n1, mm) + self._count(d - 1, remaining - n1, mm)
                if val > best:
                    best, best_gamma, best_left = val, gamma, n1
                    if best == full:
                        break
            if best == full:
                break
        if best < 0:
            raise AssertionError(f"infeasible state ({d}, {n}, {m}) reached")
        assert Fraction(best, full) <= candidate_eval(
            self.params, BellmanPoint(Fraction(n, full), Fraction(m)))
        if len(self._memo) >= self.cell_cap:
            raise ResourceLimitError(
                f"memo exceeded the cell cap of {self.cell_cap} states")
        self._memo[key] = (best, best_gamma, best_left)
        return best

    # -- witness reconstruction ----------------------------------------------

    def _greedy_selection(self, d: int, n: int) -> Set[NodeAddress]:
        """Any admissible depth-d selection with root average n / 2^d."""
        if n == 0:
            return set()
        if d == 0:
            return {ROOT}
        full = 1 << d
        gamma = 1 if n >= full else 0
        remaining = n - (gamma << d)
        child_cap = self._cap_num(d - 1)
        n1 = min(remaining, child_cap)
        n2 = remaining - n1
        assert n2 <= child_cap
        sel = self._shift(self._greedy_selection(d - 1, n1), left=True)
        sel |= self._shift(self._greedy_selection(d - 1, n2), left=False)
        if gamma:
            sel.add(ROOT)
        return sel

    @staticmethod
    def _shift(sel: Set[NodeAddress], left: bool) -> Set[NodeAddress]:
        offset = 0 if left else 1
        return {NodeAddress(a.level + 1, a.index + (offset << a.level)) for a in sel}

    def _build_selection(self, d: int, n: int, m: int) -> Set[NodeAddress]:
        if m <= 0 or m > d + 1 or n == 0:
            return self._greedy_selection(d, n)
        if d == 0:
            return {ROOT} if n == 1 else set()
        count, gamma, n1 = self._memo[(d, n, m)]
        remaining = n - (gamma << d)
        sel = self._shift(self._build_selection(d - 1, n1, m - gamma), left=True)
        sel |= self._shift(self._build_selection(d - 1, remaining - n1, m - gamma), left=False)
        if gamma:
            sel.add(ROOT)
        return sel

    # -- public surface ------------------------------------------------------

    def value(self, depth: int, average: RationalLike, level: int) -> DyadicRational:
        n, m = self._check_key(depth, average, level)
        return DyadicRational(self._count(depth, n, m), depth)

    def max_levelset(self, depth: int, average: RationalLike,
                     level: int) -> Tuple[DyadicRational, CarlesonSeq]:
        n, m = self._check_key(depth, average, level)
        count = self._count(depth, n, m)
        witness = CarlesonSeq(depth, self._build_selection(depth, n, m))
        return DyadicRational(count, depth), witness

    def cell(self, key: DPKey) -> DPCell:
        n, m = self._check_key(key.depth, key.average, key.level)
        count = self._count(key.depth, n, m)
        choice = None
        stored = self._memo.get((key.depth, n, m))
        if stored is not None:
            _, gamma, n1 = stored
            remaining = n - (gamma << key.depth)
            choice = (gamma,
                      DyadicRational(n1, key.depth - 1),
                      DyadicRational(remaining - n1, key.depth - 1))
        return DPCell(DyadicRational(count, key.depth), choice)

    def witness(self, key: DPKey) -> CarlesonSeq:
        n, m = self._check_key(key.depth, key.average, key.level)
        self._count(key.depth, n, m)
        return CarlesonSeq(key.depth, self._build_selection(key.depth, n, m))

    def table(self, depth: int, m_max: int) -> "DPTable":
        if depth > self.depth_limit:
            raise ValueError(f"depth {depth} exceeds the configured limit {self.depth_limit}")
        if m_max < 0:
            raise ValueError("m_max must be >= 0")
        cells: Dict[DPKey, DPCell] = {}
        for m in range(m_max + 1):
            for n in range(self._cap_num(depth) + 1):
                key = DPKey(depth, DyadicRational(n, depth), m)
                cells[key] = self.cell(key)
        return DPTable(C=self.C, depth=depth, m_max=m_max, cells=cells, engine=self)

    def convergence(self, average: RationalLike, level: int, depth_max: int,
                    depth_min: Optional[int] = None) -> List[ConvergenceRow]:
        """F_D at increasing depths with the exact gap below the closed form."""
        if depth_max > self.depth_limit:
            raise ValueError(f"depth {depth_max} exceeds the configured limit {self.depth_limit}")
        f = to_fraction(average)
        q = f.denominator
        if q & (q - 1):
            raise PrecisionError(f"average {f} is not dyadic")
        needed = max(q.bit_length() - 1, ceil_rational(f) - 1, 0)
        start = needed if depth_min is None else max(depth_min, needed)
        target = candidate_eval(self.params, BellmanPoint(f, Fraction(level)))
        rows: List[ConvergenceRow] = []
        for depth in range(start, depth_max + 1):
            val = self.value(depth, f, level)
            rows.append(ConvergenceRow(depth=depth, value=val,
                                       gap=target - val.as_fraction()))
        return rows


@dataclass(frozen=True, eq=False)
class DPTable:
    C: Fraction
    depth: int
    m_max: int
    cells: Dict[DPKey, DPCell]
    engine: LevelSetDP

    def rows(self) -> List[Tuple[Fraction, int, Fraction]]:
        out = [(key.average.as_fraction(), key.level, cell.value.as_fraction())
               for key, cell in self.cells.items()]
        out.sort()
        return out


def dp_max_levelset(C: RationalLike, depth: int, average: RationalLike, level: int,
                    cell_cap: Optional[int] = None) -> Tuple[DyadicRational, CarlesonSeq]:
    return LevelSetDP(C, cell_cap=cell_cap).max_levelset(depth, average, level)


def dp_table(C: RationalLike, depth: int, m_max: int,
             cell_cap: Optional[int] = None,
             depth_limit: int = DEFAULT_DEPTH_LIMIT) -> DPTable:
    return LevelSetDP(C, cell_cap=cell_cap, depth_limit=depth_limit).table(depth, m_max)


def convergence_report(C: RationalLike, average: RationalLike, level: int,
                       depth_max: int, depth_min: Optional[int] = None,
                       cell_cap: Optional[int] = None) -> List[ConvergenceRow]:
    return LevelSetDP(C, cell_cap=cell_cap).convergence(average, level, depth_max,
                                                        depth_min=depth_min)


def reconstruct_witness(table: DPTable, key: DPKey) -> CarlesonSeq:
    if key not in table.cells:
        raise KeyError(f"no cell for {key} in this table")
    return table.engine.witness(key)
