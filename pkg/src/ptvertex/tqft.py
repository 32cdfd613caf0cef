"""Gluing, rational reconstruction in q, and the reference closed forms.

Rational forms carry the conjectured denominator shape q^k * prod
(1 - (-q)^r)^(m_r) with r at most the degree; fitting enumerates denominator
exponents in increasing size and certifies a candidate by exact convolution
against held-out series orders, so a successful fit reproduces every known
coefficient and a failure is a finding about the series, not a numerical
artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import partitions as pt
from .errors import NoFit, Underdetermined
from .hilbert import gram_closed_form, gram_inverse_entry
from .partitions import Partition
from .polys import MPoly
from .qseries import QSeries
from .ratfunc import RationalFunction, S1, S2


@dataclass(frozen=True)
class RationalQ:
    """num(q) / (q^q_pow * prod (1 - (-q)^r)^cyclo[r]) with exact coefficients."""

    num: Tuple[Tuple[int, RationalFunction], ...]   # (power, coefficient), sorted
    q_pow: int
    cyclo: Tuple[Tuple[int, int], ...]              # (r, multiplicity), sorted

    @staticmethod
    def make(num: Dict[int, RationalFunction], q_pow: int,
             cyclo: Dict[int, int]) -> "RationalQ":
        packed = tuple(sorted((n, c) for n, c in num.items() if not c.is_zero()))
        return RationalQ(packed, q_pow, tuple(sorted((r, m) for r, m in cyclo.items() if m)))

    def num_dict(self) -> Dict[int, RationalFunction]:
        return dict(self.num)

    def cyclo_dict(self) -> Dict[int, int]:
        return dict(self.cyclo)

    def is_zero(self) -> bool:
        return not self.num

    def num_degree(self) -> int:
        return max((n for n, _ in self.num), default=0)

    def expand(self, max_order: int) -> QSeries:
        """Laurent expansion up to and including q^max_order."""
        coeffs: Dict[int, RationalFunction] = dict(self.num)
        top = max_order + self.q_pow
        for r, m in self.cyclo:
            for _ in range(m):
                # (1 - (-q)^r)^(-1): c'_n = c_n + (-1)^r c'_(n-r)
                out: Dict[int, RationalFunction] = {}
                lo = min(coeffs, default=0)
                for n in range(lo, top + 1):
                    val = coeffs.get(n, RationalFunction.zero())
                    prev = out.get(n - r)
                    if prev is not None:
                        val = val + prev * ((-1) ** r)
                    if not val.is_zero():
                        out[n] = val
                coeffs = out
        lo = min(list(self.num_dict()) + [0]) - self.q_pow
        return QSeries(lo, max_order,
                       {n - self.q_pow: c for n, c in coeffs.items()
                        if n - self.q_pow <= max_order})

    def to_json_dict(self) -> dict:
        num = []
        for n, c in self.num:
            a, b = c.render_pair()
            num.append({"n": n, "coeff": {"num": a, "den": b}})
        return {"num": num, "q_pow": self.q_pow,
                "cyclo": {str(r): m for r, m in self.cyclo}}

    def render(self) -> str:
        if not self.num:
            return "0"
        num = " + ".join(
            (f"({c})" + ("" if n == 0 else ("*q" if n == 1 else f"*q^{n}")))
            for n, c in self.num)
        dens = []
        if self.q_pow:
            dens.append("q" if self.q_pow == 1 else f"q^{self.q_pow}")
        for r, m in self.cyclo:
            f = f"(1 - (-q)^{r})"
            dens.append(f if m == 1 else f + f"^{m}")
        if not dens:
            return num
        return f"[{num}] / [{'*'.join(dens)}]"


def stationary_reference_series(d: int) -> RationalQ:
    """The closed-form basic stationary series in degree d.

    (q^d/d!) ((s1+s2)/(s1 s2)) (1/2) sum_{i<=d} (1+(-q)^i)/(1-(-q)^i).
    """
    if d < 1:
        raise ValueError("d must be positive")
    scale = RationalFunction.from_factors(
        Fraction(1, 2 * factorial(d)), [S1 + S2], [S1, S2])
    total: Dict[int, Fraction] = {}
    for i in range(1, d + 1):
        term = {0: Fraction(1)}
        term[i] = term.get(i, Fraction(0)) + Fraction((-1) ** i)   # 1 + (-q)^i
        for j in range(1, d + 1):
            if j == i:
                continue
            new: Dict[int, Fraction] = {}
            for n, c in term.items():
                new[n] = new.get(n, Fraction(0)) + c
                new[n + j] = new.get(n + j, Fraction(0)) - c * ((-1) ** j)
            term = new
        for n, c in term.items():
            total[n] = total.get(n, Fraction(0)) + c
    num = {d + n: scale * c for n, c in total.items() if c}
    return RationalQ.make(num, 0, {i: 1 for i in range(1, d + 1)})


def functional_equation_check(F: RationalQ, delta: int, eta_size: int,
                              eta_len: int, ins_sum: int) -> bool:
    """Exact check of F(1/q) = (-1)^(delta+|eta|-len(eta)+sum i) q^(-delta) F(q)."""
    sign = (-1) ** (delta + eta_size - eta_len + ins_sum)
    return _functional_equation(F, delta, sign, substitute=None)


def functional_equation_check_literal(F: RationalQ, delta: int, eta_size: int,
                                      eta_len: int, ins_sum: int) -> Optional[bool]:
    """The variant reading with both weight slots set to the second weight.

    Returns None when the substitution hits a vanishing denominator, making
    the literal-text form ill-defined for this series.
    """
    sign = (-1) ** (delta + eta_size - eta_len + ins_sum)
    try:
        return _functional_equation(F, delta, sign, substitute={0: S2})
    except ZeroDivisionError:
        return None


def _functional_equation(F: RationalQ, delta: int, sign: int, substitute) -> bool:
    if F.is_zero():
        return True
    num = F.num_dict()
    deg = max(num)
    R = sum(r * m for r, m in F.cyclo)
    M = sum(m for _, m in F.cyclo)
    shift = 2 * F.q_pow + R + delta - deg
    lhs_sign = (-1) ** (M + R)
    orders = set(num)
    orders.update(deg - n + shift for n in num)
    for n in orders:
        mirrored = num.get(deg - (n - shift), RationalFunction.zero()) * lhs_sign
        if substitute is not None:
            mirrored = mirrored.subs_poly(substitute)
        direct = num.get(n, RationalFunction.zero()) * sign
        if not mirrored == direct:
            return False
    return True


def fit_rational(series: QSeries, d: int, num_degree: int) -> RationalQ:
    """Fit the denominator ansatz to a truncated series.

    Orders below the series window are taken to be structurally zero (true
    of every series produced here).  Candidate denominators are enumerated
    in increasing total degree; a candidate is accepted when the convolution
    of the series with it is supported in degrees <= num_degree, which makes
    the held-out orders (everything above num_degree) exact predictions.
    Raises Underdetermined without >= 3 held-out orders, NoFit when the
    ansatz cannot match.
    """
    if d < 1:
        raise ValueError("d must be positive")
    n0, n1 = series.min_order, series.max_order
    if n1 - max(num_degree, n0 - 1) < 3:
        raise Underdetermined(
            f"window [{n0}, {n1}] leaves fewer than 3 verification orders "
            f"beyond numerator degree {num_degree}")
    budget = n1 - n0
    best: Optional[Tuple[int, ...]] = None
    for mvec in _denominator_candidates(d, budget):
        tail = _convolve_tail(series, mvec, num_degree)
        if tail is None:
            continue
        best = mvec
        break
    if best is None:
        raise NoFit(f"no denominator within the degree-{d} ansatz matches")
    support = _convolve_full(series, best)
    min_n = min(support, default=0)
    k = max(0, -min_n)
    num = {n + k: c for n, c in support.items()}
    fit = RationalQ.make(num, k, {r + 1: m for r, m in enumerate(best) if m})
    # safety: the fit must reproduce the entire known window
    if not fit.expand(n1).agrees_with(series):
        raise NoFit("internal: accepted fit fails to reproduce the series")
    return fit


def _denominator_candidates(d: int, budget: int):
    """All (m_1..m_d) ordered by total degree, then total count, then lex."""
    out = []
    ranges = []

    def rec(r: int, prefix: Tuple[int, ...], degree: int):
        if r > d:
            out.append((degree, sum(prefix), prefix))
            return
        m = 0
        while degree + r * m <= budget:
            rec(r + 1, prefix + (m,), degree + r * m)
            m += 1

    rec(1, (), 0)
    out.sort()
    for _, _, prefix in out:
        yield prefix


def _denominator_poly(mvec: Sequence[int]) -> Dict[int, int]:
    poly = {0: 1}
    for r, m in enumerate(mvec, start=1):
        for _ in range(m):
            new: Dict[int, int] = {}
            for n, c in poly.items():
                new[n] = new.get(n, 0) + c
                new[n + r] = new.get(n + r, 0) - c * ((-1) ** r)
            poly = {n: c for n, c in new.items() if c}
    return poly


def _convolve_tail(series: QSeries, mvec: Sequence[int], num_degree: int):
    """True tail check: series * denominator must vanish above num_degree."""
    dpoly = _denominator_poly(mvec)
    for n in range(max(num_degree + 1, series.min_order), series.max_order + 1):
        total = RationalFunction.zero()
        for j, c in dpoly.items():
            if series.min_order <= n - j <= series.max_order:
                total = total + series.coefficient(n - j) * c
            elif n - j > series.max_order:
                return None  # insufficient data to evaluate this order
        if not total.is_zero():
            return None
    return True


def _convolve_full(series: QSeries, mvec: Sequence[int]) -> Dict[int, RationalFunction]:
    dpoly = _denominator_poly(mvec)
    out: Dict[int, RationalFunction] = {}
    for n in range(series.min_order, series.max_order + 1):
        total = RationalFunction.zero()
        for j, c in dpoly.items():
            if series.min_order <= n - j <= series.max_order:
                total = total + series.coefficient(n - j) * c
        if not total.is_zero():
            out[n] = total
    return out


# -- gluing ------------------------------------------------------------------------------


@dataclass(frozen=True)
class GluingBlock:
    """Relative series block keyed by tuples of boundary partitions."""

    d: int
    slots: int
    entries: Dict[Tuple[Partition, ...], QSeries] = field(default_factory=dict)

    def __post_init__(self):
        for key in self.entries:
            if len(key) != self.slots:
                raise ValueError("boundary tuple arity mismatch")
            for eta in key:
                if pt.size(eta) != self.d:
                    raise ValueError("boundary partitions must have size d")

    def entry(self, key) -> Optional[QSeries]:
        return self.entries.get(tuple(tuple(x) for x in key))


def identity_block(d: int, min_order: int, max_order: int) -> GluingBlock:
    """The gluing identity: entries q^d * (closed-form pairing)."""
    entries = {}
    for mu in pt.enumerate_partitions(d):
        for nu in pt.enumerate_partitions(d):
            if mu == nu:
                entries[(mu, nu)] = QSeries(min_order, max_order,
                                            {d: gram_closed_form(mu, nu)})
            else:
                entries[(mu, nu)] = QSeries.zero(min_order, max_order)
    return GluingBlock(d, 2, entries)


def glue_series(left: GluingBlock, right: GluingBlock, d: int) -> GluingBlock:
    """Compose along the shared boundary with the inverse pairing and q^-d.

    The last slot of the left block is summed against the first slot of the
    right block; missing entries count as zero.
    """
    if left.d != d or right.d != d:
        raise ValueError("blocks must share the same degree")
    mus = pt.enumerate_partitions(d)
    out: Dict[Tuple[Partition, ...], QSeries] = {}
    prefixes = {key[:-1] for key in left.entries}
    suffixes = {key[1:] for key in right.entries}
    for prefix in sorted(prefixes):
        for suffix in sorted(suffixes):
            total: Optional[QSeries] = None
            for mu in mus:
                ls = left.entries.get(prefix + (mu,))
                rs = right.entries.get((mu,) + suffix)
                if ls is None or rs is None:
                    continue
                term = (ls * rs).scale(gram_inverse_entry(mu)).shift(-d)
                total = term if total is None else total + term
            if total is not None:
                out[prefix + suffix] = total
    return GluingBlock(d, left.slots + right.slots - 2, out)
