"""Partitions viewed as lattice cell sets, with diagonal coordinates.

A partition is a weakly decreasing tuple of positive integers.  Its cells are
the lattice points (i, j) with 0 <= j < len(mu) and 0 <= i < mu[j]; the first
coordinate runs along the t1 axis, so the cylinder character of mu is
sum t1^i t2^j over cells.  The diagonal coordinate is delta = i - j, and
(delta; j) denotes the cell (delta + j, j).
"""

from __future__ import annotations

from math import factorial
from typing import Dict, Iterator, List, Tuple

Partition = Tuple[int, ...]


def check_partition(parts) -> Partition:
    mu = tuple(int(p) for p in parts)
    if any(p <= 0 for p in mu):
        raise ValueError(f"partition parts must be positive: {mu}")
    if any(mu[i] < mu[i + 1] for i in range(len(mu) - 1)):
        raise ValueError(f"parts must be weakly decreasing: {mu}")
    return mu


def size(mu: Partition) -> int:
    return sum(mu)


def length(mu: Partition) -> int:
    return len(mu)


def cells(mu: Partition) -> List[Tuple[int, int]]:
    """Cells (i, j) in canonical row-major order (part by part)."""
    return [(i, j) for j, part in enumerate(mu) for i in range(part)]


def conjugate(mu: Partition) -> Partition:
    if not mu:
        return ()
    return tuple(sum(1 for p in mu if p > i) for i in range(mu[0]))


def arm(mu: Partition, cell: Tuple[int, int]) -> int:
    """Cells strictly beyond (i, j) along the t1 axis within its part."""
    i, j = cell
    return mu[j] - 1 - i

def leg(mu: Partition, cell: Tuple[int, int]) -> int:
    """Cells strictly beyond (i, j) along the t2 axis within its column."""
    i, j = cell
    return conjugate(mu)[i] - 1 - j


def diagonals(mu: Partition) -> Dict[int, List[int]]:
    """Map delta -> increasing j values with (delta; j) = (delta+j, j) in mu."""
    out: Dict[int, List[int]] = {}
    for i, j in cells(mu):
        out.setdefault(i - j, []).append(j)
    for js in out.values():
        js.sort()
    return out


def zee(mu: Partition) -> int:
    """prod(parts) * |Aut(mu)|, the standard partition symmetry factor."""
    prod = 1
    for p in mu:
        prod *= p
    return prod * aut_size(mu)


def aut_size(mu: Partition) -> int:
    counts: Dict[int, int] = {}
    for p in mu:
        counts[p] = counts.get(p, 0) + 1
    out = 1
    for c in counts.values():
        out *= factorial(c)
    return out


def enumerate_partitions(d: int) -> List[Partition]:
    """All partitions of d in descending lexicographic order."""
    if d < 0:
        raise ValueError("d must be nonnegative")

    def gen(remaining: int, cap: int) -> Iterator[Partition]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return list(gen(d, d))
