"""Coverage sets stored as Python integers used as fixed-width bit vectors.

Bit ``i`` set means point of interest ``i`` is covered. Python ints give
union/intersection/subset tests in a handful of machine words and hash
cheaply, which the search relies on for its memo tables.
"""

from __future__ import annotations

from typing import Iterable

CoverageSet = int

EMPTY: CoverageSet = 0


def from_indices(indices: Iterable[int]) -> CoverageSet:
    bits = 0
    for i in indices:
        if i < 0:
            raise ValueError(f"negative POI index {i}")
        bits |= 1 << int(i)
    return bits


def to_indices(bits: CoverageSet) -> list[int]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return out


def full(k: int) -> CoverageSet:
    """Set containing every index in ``0..k-1``."""
    return (1 << k) - 1


def popcount(bits: CoverageSet) -> int:
    return bits.bit_count()


def is_subset(a: CoverageSet, b: CoverageSet) -> bool:
    """True iff ``a`` is a subset of ``b``."""
    return a & ~b == 0
