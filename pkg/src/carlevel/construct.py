"""Constructions of sequences realizing a prescribed root average exactly.

For a target in [0, 1) the selection comes straight from the binary
expansion: walking down the tree, a 1-bit selects the right child of the
current interval and the walk continues in the left child, a 0-bit moves
the walk into the right child.  The selected intervals are pairwise
disjoint with total relative measure equal to the target.

For targets >= 1 a "roof" of fully selected generations supplies the
integer part, and the fractional construction is replicated inside every
interval of the roof's last generation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Set

from .dyadic import ROOT, DyadicRational, NodeAddress, RationalLike, to_fraction
from .errors import AdmissibilityError, PrecisionError
from .sequences import CarlesonSeq


def binary_expansion(a: RationalLike, depth: int) -> List[int]:
    """Bits b_1..b_depth with a = sum of b_m / 2^m; requires 0 <= a < 1."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    f = to_fraction(a)
    if not 0 <= f < 1:
        raise ValueError(f"binary expansion needs a value in [0, 1), got {f}")
    try:
        dy = DyadicRational.from_fraction(f)
    except ValueError:
        raise PrecisionError(f"{f} has no finite binary expansion") from None
    if dy.log2_denominator > depth:
        raise PrecisionError(
            f"{f} needs {dy.log2_denominator} bits, only {depth} available")
    scaled = dy.numerator << (depth - dy.log2_denominator)
    return [(scaled >> (depth - 1 - k)) & 1 for k in range(depth)]


def construct_fractional(a: RationalLike, depth: int) -> CarlesonSeq:
    """A pairwise-disjoint selection of total relative measure a in [0, 1)."""
    bits = binary_expansion(a, depth)
    selected: Set[NodeAddress] = set()
    cursor = ROOT
    for bit in bits:
        left, right = cursor.children()
        if bit:
            selected.add(right)
            cursor = left
        else:
            cursor = right
    return CarlesonSeq(depth, selected)


def _fractional_addresses(frac: Fraction) -> List[NodeAddress]:
    """Selection pattern for a fractional target, relative to a subtree root."""
    if frac == 0:
        return []
    nbits = DyadicRational.from_fraction(frac).log2_denominator
    return sorted(construct_fractional(frac, nbits).selected)


def _partition_staircase(depth: int) -> Set[NodeAddress]:
    # right child at each level plus the final leftmost cell: a partition of
    # the main interval into depth + 1 disjoint pieces of total measure 1
    sel = {NodeAddress(k, 1) for k in range(1, depth + 1)}
    sel.add(NodeAddress(depth, 0))
    return sel


def construct_admissible(a: RationalLike, C: RationalLike, depth: int,
                         style: str = "roof") -> CarlesonSeq:
    """Build a sequence with root average exactly a and Carleson constant <= C.

    The integer part of a is realized by selecting every address in levels
    0..floor(a)-1; the fractional part, which must be dyadic and fit in
    depth - floor(a) bits, is realized by identical disjoint constructions
    inside each level-(floor(a)-1) address (inside the root when a < 1).

    style="partition" gives the alternative all-disjoint realization of
    a = 1 that covers the main interval without selecting it.
    """
    target = to_fraction(a)
    bound = to_fraction(C)
    if bound < 1:
        raise ValueError("C must be >= 1")
    if target < 0 or target > bound:
        raise AdmissibilityError(f"average {target} outside [0, {bound}]")
    if depth < 0:
        raise ValueError("depth must be >= 0")

    if style == "partition":
        if target != 1:
            raise ValueError("partition style only realizes average 1")
        if depth < 1:
            raise ValueError("partition style needs depth >= 1")
        return CarlesonSeq(depth, _partition_staircase(depth))
    if style != "roof":
        raise ValueError(f"unknown style {style!r}")

    whole = target.numerator // target.denominator
    frac = target - whole
    if depth < whole:
        raise ValueError(f"depth {depth} too small for integer part {whole}")
    if frac:
        q = frac.denominator
        if q & (q - 1):
            raise PrecisionError(f"fractional part {frac} is not dyadic")
        if q.bit_length() - 1 > depth - whole:
            raise PrecisionError(
                f"fractional part {frac} needs {q.bit_length() - 1} bits, "
                f"only {depth - whole} available below the roof")

    selected: Set[NodeAddress] = set()
    for level in range(whole):
        for index in range(1 << level):
            selected.add(NodeAddress(level, index))

    if frac:
        pattern = _fractional_addresses(frac)
        if whole == 0:
            bases = [ROOT]
        else:
            bases = [NodeAddress(whole - 1, i) for i in range(1 << (whole - 1))]
        for base in bases:
            for rel in pattern:
                selected.add(NodeAddress(base.level + rel.level,
                                         (base.index << rel.level) + rel.index))

    return CarlesonSeq(depth, selected)
