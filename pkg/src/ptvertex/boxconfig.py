"""Box configurations: the torus-fixed loci of the one-leg vertex.

A configuration is a partition mu together with a depth function h on its
cells.  The depth records how far the fixed-point module extends below the
cylinder; validity is equivalent to h being nonnegative and weakly
increasing toward larger i and larger j.  That characterization is derived,
so an independent module-closure oracle is provided and exercised in tests
as the authority.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from . import partitions as pt
from .partitions import Partition


@dataclass(frozen=True)
class BoxConfig:
    """Partition plus depths, stored in canonical row-major cell order."""

    mu: Partition
    depths: Tuple[int, ...]

    def __post_init__(self):
        cs = pt.cells(self.mu)
        if len(cs) != len(self.depths):
            raise ValueError("one depth per cell required")
        if not depths_valid(self.mu, dict(zip(cs, self.depths))):
            raise ValueError(f"invalid depth function {self.depths} on {self.mu}")

    @staticmethod
    def from_map(mu: Partition, h: Dict[Tuple[int, int], int]) -> "BoxConfig":
        return BoxConfig(mu, tuple(h[c] for c in pt.cells(mu)))

    def depth(self, cell: Tuple[int, int]) -> int:
        return self.depths[pt.cells(self.mu).index(cell)]

    def depth_map(self) -> Dict[Tuple[int, int], int]:
        return dict(zip(pt.cells(self.mu), self.depths))

    @property
    def length(self) -> int:
        """Number of boxes below the cylinder, sum of all depths."""
        return sum(self.depths)

    def rows(self) -> List[str]:
        return [f"cell ({i},{j})  depth {h}"
                for (i, j), h in zip(pt.cells(self.mu), self.depths)]


def depths_valid(mu: Partition, h: Dict[Tuple[int, int], int]) -> bool:
    """Depth monotonicity: h grows weakly with i and with j, and h >= 0."""
    for (i, j), v in h.items():
        if v < 0:
            return False
        if (i - 1, j) in h and h[(i - 1, j)] > v:
            return False
        if (i, j - 1) in h and h[(i, j - 1)] > v:
            return False
    return True


def enumerate_box_configs(mu: Partition, ell: int) -> List[BoxConfig]:
    """All configurations on mu of total depth ell.

    Deterministic order: lexicographic on the flattened depth tuple in
    canonical cell order.
    """
    mu = pt.check_partition(mu)
    cs = pt.cells(mu)
    if not cs:
        return [] if ell else [BoxConfig((), ())]
    out: List[BoxConfig] = []

    def rec(idx: int, remaining: int, chosen: Dict[Tuple[int, int], int]):
        if idx == len(cs):
            if remaining == 0:
                out.append(BoxConfig(mu, tuple(chosen[c] for c in cs)))
            return
        i, j = cs[idx]
        lo = 0
        if (i - 1, j) in chosen:
            lo = max(lo, chosen[(i - 1, j)])
        if (i, j - 1) in chosen:
            lo = max(lo, chosen[(i, j - 1)])
        for v in range(lo, remaining + 1):
            chosen[(i, j)] = v
            rec(idx + 1, remaining - v, chosen)
        chosen.pop((i, j), None)

    rec(0, ell, {})
    return out


def oracle_accepts(mu: Partition, h: Dict[Tuple[int, int], int]) -> bool:
    """Module-closure check on a raw depth map (need not be monotone).

    The boxes below the cylinder span Q = {(i, j, k) : cell in mu,
    -h(i,j) <= k <= -1} inside the localized cylinder module modulo its
    canonical generator.  Q supports a fixed stable pair exactly when it is
    closed under multiplication by the three coordinate directions, where
    stepping off mu kills the element and stepping up to k >= 0 lands on the
    cylinder part.
    """
    if any(v < 0 for v in h.values()):
        return False
    boxes = {(i, j, k) for (i, j), v in h.items() for k in range(-v, 0)}
    for (i, j, k) in boxes:
        for (di, dj, dk) in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            tgt = (i + di, j + dj, k + dk)
            if (tgt[0], tgt[1]) not in h:
                continue  # x1/x2 step leaves the cylinder: the product is zero
            if tgt[2] >= 0:
                continue  # lands on the canonical cylinder part
            if tgt not in boxes:
                return False
    return True


def validate_config_oracle(config: BoxConfig) -> bool:
    """Closure oracle on a constructed configuration."""
    return oracle_accepts(config.mu, config.depth_map())


def brute_force_depths(mu: Partition, ell: int) -> List[Tuple[int, ...]]:
    """All depth tuples with sum ell accepted by the closure oracle."""
    cs = pt.cells(mu)
    accepted = []

    def rec(idx: int, remaining: int, prefix: List[int]):
        if idx == len(cs):
            if remaining == 0 and oracle_accepts(mu, dict(zip(cs, prefix))):
                accepted.append(tuple(prefix))
            return
        for v in range(remaining + 1):
            prefix.append(v)
            rec(idx + 1, remaining - v, prefix)
            prefix.pop()

    rec(0, ell, [])
    return accepted


@dataclass(frozen=True)
class FProfile:
    """Grouping key for cancellation classes.

    For specialization parameter a, the profile stores per diagonal the
    weakly decreasing exponents e_delta(j) in (1/a)Z obtained from
    (1 - t3) F_U after t3 = (t1 t2)^(1/a).
    """

    mu: Partition
    a: int
    exponents: Tuple[Tuple[int, Tuple[Fraction, ...]], ...]  # (delta, e-values desc)

    @staticmethod
    def make(mu: Partition, a: int, by_diag: Dict[int, List[Fraction]]) -> "FProfile":
        packed = tuple(
            (delta, tuple(sorted((Fraction(v) for v in vals), reverse=True)))
            for delta, vals in sorted(by_diag.items())
        )
        return FProfile(tuple(mu), a, packed)

    def diagonal(self, delta: int) -> Tuple[Fraction, ...]:
        for d, vals in self.exponents:
            if d == delta:
                return vals
        raise KeyError(delta)

    def e(self, delta: int, j: int) -> Fraction:
        """Exponent e_delta(j); j indexes the cells of the diagonal."""
        vals = self.diagonal(delta)
        js = pt.diagonals(self.mu)[delta]
        return vals[js.index(j)]

    def deltas(self) -> List[int]:
        return [d for d, _ in self.exponents]

    def render(self) -> str:
        parts = []
        for d, vals in self.exponents:
            parts.append(f"d{d}:" + ",".join(str(v) for v in vals))
        return f"a={self.a} " + " ".join(parts)


def f_profile(config: BoxConfig, a: int) -> FProfile:
    """Profile of a configuration: substitute, group by diagonal, sort.

    Each cell (delta; j) with depth h contributes exponent j - h/a; sorting
    within a diagonal makes the profile the canonical class label.
    """
    if a < 1:
        raise ValueError("a must be a positive integer")
    by_diag: Dict[int, List[Fraction]] = {}
    for (i, j), h in config.depth_map().items():
        by_diag.setdefault(i - j, []).append(Fraction(j) - Fraction(h, a))
    return FProfile.make(config.mu, a, by_diag)
