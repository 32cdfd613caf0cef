"""The one-leg descendent vertex: characters, weights, series, specialization.

The vertex character of a configuration is assembled from the closed
fraction form of the fixed-point character and reduced exactly; the
descendent weight is its Euler class times Chern character factors.  The
specialization s3 = (s1+s2)/a is evaluated per profile class by summing the
class first and cancelling the u3 = s1 + s2 - a*s3 factors by exact
polynomial division, never term by term.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple

from . import partitions as pt
from .boxconfig import BoxConfig, FProfile, enumerate_box_configs, f_profile
from .errors import PoleSurvived
from .partitions import Partition
from .polys import MPoly
from .qseries import QSeries
from .ratfunc import NVARS, RationalFunction, S1, S2, S3
from .tcharacter import TCharacter, chern_character_eval, euler_class

InsertionList = Tuple[int, ...]

_T1 = (1, 0, 0)
_T2 = (0, 1, 0)
_T3 = (0, 0, 1)


def degree_constant(ins: InsertionList, d: int, eta: Partition) -> int:
    """The dimension constant sum(i_j) + d - len(eta) attached to a cap series."""
    return sum(ins) + d - len(eta)


def cylinder_character(mu: Partition) -> TCharacter:
    """sum over cells of t1^i t2^j."""
    return TCharacter({(i, j, 0): 1 for (i, j) in pt.cells(mu)})


def cylinder_and_edge_characters(mu: Partition) -> Tuple[TCharacter, TCharacter]:
    """The cylinder character and the redistributed edge character.

    The edge character is -F - bar(F)/(t1 t2) + F bar(F)(1-t1)(1-t2)/(t1 t2),
    a Laurent polynomial of rank -2|mu|.
    """
    f = cylinder_character(mu)
    if f.is_zero():
        return f, TCharacter.zero()
    fbar = f.bar()
    inv_t1t2 = TCharacter.monomial((-1, -1, 0))
    one_minus = TCharacter({(0, 0, 0): 1, _T1: -1}) * TCharacter({(0, 0, 0): 1, _T2: -1})
    g = (-f) - fbar * inv_t1t2 + f * fbar * one_minus * inv_t1t2
    return f, g.as_polynomial()


def edge_weight(mu: Partition) -> RationalFunction:
    """Euler class of the edge character (q-normalization applied at assembly)."""
    _, g = cylinder_and_edge_characters(mu)
    return euler_class(g)


def outer_character(config: BoxConfig) -> TCharacter:
    """(1 - t3) F_U: one monomial t1^i t2^j t3^(-h) per cell."""
    return TCharacter({(i, j, -h): 1
                       for (i, j), h in config.depth_map().items()})


def vertex_character(config: BoxConfig) -> TCharacter:
    """The Laurent-polynomial vertex character of a fixed locus.

    Assembled as F - bar(F)/(t1 t2 t3) + F bar(F)(1-t1)(1-t2)(1-t3)/(t1 t2 t3)
    plus the edge redistribution term G/(1-t3), where F is the full
    fixed-point character (1-t3)^(-1) * outer character.  Raises
    NotPolynomial if the fraction does not reduce, which never happens on a
    validated configuration.
    """
    fprime = outer_character(config)
    f = fprime.divide_by_factor(_T3)
    fbar = f.bar()
    inv = TCharacter.monomial((-1, -1, -1))
    one_minus = (TCharacter({(0, 0, 0): 1, _T1: -1})
                 * TCharacter({(0, 0, 0): 1, _T2: -1})
                 * TCharacter({(0, 0, 0): 1, _T3: -1}))
    _, g = cylinder_and_edge_characters(config.mu)
    v = f - fbar * inv + f * fbar * one_minus * inv + g.divide_by_factor(_T3)
    return v.as_polynomial()


@lru_cache(maxsize=None)
def _euler_neg_vertex(mu: Partition, depths) -> RationalFunction:
    return euler_class(-1 * vertex_character(BoxConfig(mu, depths)))


@lru_cache(maxsize=None)
def _chern_factor(mu: Partition, depths, i: int) -> RationalFunction:
    one_minus = (TCharacter({(0, 0, 0): 1, _T1: -1})
                 * TCharacter({(0, 0, 0): 1, _T2: -1}))
    ch_arg = outer_character(BoxConfig(mu, depths)) * one_minus
    return chern_character_eval(ch_arg, 2 + i)


def descendent_weight(config: BoxConfig, ins: InsertionList) -> RationalFunction:
    """e(-V) times the Chern character factors of the insertions.

    Both parts are memoized per configuration, so sweeping insertion lists
    or specialization parameters does not redo the Euler product.
    """
    weight = _euler_neg_vertex(config.mu, config.depths)
    for i in ins:
        weight = weight * _chern_factor(config.mu, config.depths, i)
    return weight


def _weight_task(args):
    mu, depths, ins = args
    return descendent_weight(BoxConfig(mu, depths), ins)


def weights_for_length(mu: Partition, ins: InsertionList, ell: int,
                       jobs: int = 1) -> List[Tuple[BoxConfig, RationalFunction]]:
    """Descendent weights of all configurations of a given total depth.

    The per-configuration map is embarrassingly parallel; results are
    returned in enumeration order regardless of the worker count.
    """
    configs = enumerate_box_configs(mu, ell)
    if jobs > 1 and len(configs) > 1:
        try:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                weights = list(pool.map(_weight_task,
                                        [(c.mu, c.depths, tuple(ins)) for c in configs],
                                        chunksize=max(1, len(configs) // jobs)))
            return list(zip(configs, weights))
        except OSError:
            pass  # pool unavailable in this environment; fall back to serial
    return [(c, descendent_weight(c, tuple(ins))) for c in configs]


def insertion_prefactor(k: int) -> RationalFunction:
    """(1/(s1 s2))^k from pushing k point insertions off the vertex."""
    return RationalFunction.from_factors(1, [], [S1, S2] * k)


def vertex_series(mu: Partition, ins: InsertionList, qmax: int,
                  jobs: int = 1) -> QSeries:
    """Descendent vertex series: coefficient of q^n sums weights of depth n-|mu|."""
    mu = pt.check_partition(mu)
    d = pt.size(mu)
    if qmax < d:
        raise ValueError(f"qmax must be at least |mu| = {d}")
    pref = insertion_prefactor(len(ins))
    coeffs: Dict[int, RationalFunction] = {}
    for n in range(d, qmax + 1):
        total = RationalFunction.zero()
        for _, w in weights_for_length(mu, ins, n - d, jobs=jobs):
            total = total + w
        coeffs[n] = total * pref
    return QSeries(d, qmax, coeffs)


# -- specialization at s3 = (s1+s2)/a ---------------------------------------------


def u3_form(a: int) -> MPoly:
    """The canonical vanishing form s1 + s2 - a*s3."""
    return MPoly.linear((1, 1, -a))


@lru_cache(maxsize=None)
def _s1_plus_s2_power(n: int) -> MPoly:
    return (S1 + S2) ** n


def _u3_coefficient(num: MPoly, a: int, k: int) -> MPoly:
    """Coefficient of u3^k in num(s1, s2, (s1+s2-u3)/a), as a poly in s1, s2.

    Extracting one coefficient binomially is far cheaper than performing the
    full substitution: a term c * s1^e1 s2^e2 s3^e3 contributes
    c * binom(e3, k) (-1)^k a^(-e3) * s1^e1 s2^e2 (s1+s2)^(e3-k).
    """
    out = MPoly.zero(NVARS)
    for (e1, e2, e3), c in num.terms.items():
        if e3 < k:
            continue
        scale = Fraction(c * comb(e3, k) * (-1) ** k, a ** e3)
        term = MPoly(NVARS, {(e1, e2, 0): scale}) * _s1_plus_s2_power(e3 - k)
        out = out + term
    return out


def evaluate_at_u3_zero(rf: RationalFunction, a: int) -> RationalFunction:
    """Evaluate at s3 = (s1+s2)/a, cancelling u3 factors by exact division.

    With u3 = s1 + s2 - a*s3, regularity requires the numerator to vanish
    along u3 = 0 to at least the order m of the denominator; the value is
    then the u3^m numerator coefficient over the remaining factors at u3 = 0.
    Raises PoleSurvived otherwise.
    """
    u3 = u3_form(a)
    m = 0
    others: List[Tuple[MPoly, int]] = []
    for f, e in rf.den.items():
        if f == u3:
            m = e
        else:
            others.append((f, e))
    if rf.num.is_zero():
        return RationalFunction.zero()
    for k in range(m):
        if not _u3_coefficient(rf.num, a, k).is_zero():
            raise PoleSurvived(
                f"pole of order {m - k} at u3 = 0 (a = {a}); "
                "a grouped coefficient failed to cancel")
    num = _u3_coefficient(rf.num, a, m)
    at_eval = {2: MPoly.linear((Fraction(1, a), Fraction(1, a), 0))}
    den_factors: List[MPoly] = []
    for f, e in others:
        g = f.subs(at_eval)
        if g.is_zero():
            raise PoleSurvived(f"denominator factor {f} vanishes identically at u3 = 0")
        den_factors.extend([g] * e)
    return RationalFunction.from_factors(1, [num], den_factors)


def group_sums_raw(mu: Partition, ins: InsertionList, a: int, ell: int,
                   jobs: int = 1) -> Dict[FProfile, RationalFunction]:
    """Per-profile sums of descendent weights, before specialization."""
    out: Dict[FProfile, RationalFunction] = {}
    for config, w in weights_for_length(mu, ins, ell, jobs=jobs):
        key = f_profile(config, a)
        out[key] = out.get(key, RationalFunction.zero()) + w
    return out


def group_sum_by_profile(mu: Partition, ins: InsertionList, a: int, ell: int,
                         jobs: int = 1) -> Dict[FProfile, RationalFunction]:
    """Per-profile class sums evaluated at s3 = (s1+s2)/a.

    Each class sum must be regular at u3 = 0 even when individual weights
    are not; PoleSurvived here falsifies the cancellation property.
    """
    return {key: evaluate_at_u3_zero(raw, a)
            for key, raw in group_sums_raw(mu, ins, a, ell, jobs=jobs).items()}


def contributing_length_bound(mu: Partition, a: int) -> int:
    """Largest total depth a contributing profile can reach.

    Outside the four degenerate cases the profile exponents obey
    e_delta(max) >= -m0 - 1 - max(delta, 0) and are weakly decreasing, so
    every cell depth is bounded by a * (j + m0 + 1 + max(delta, 0)).
    """
    mu = pt.check_partition(mu)
    if not mu:
        return 0
    diag = pt.diagonals(mu)
    m0 = max(diag[0])
    total = 0
    for delta, js in diag.items():
        for j in js:
            total += a * (j + m0 + 1 + max(delta, 0))
    return total


@dataclass(frozen=True)
class PolynomialityReport:
    mu: Partition
    ins: InsertionList
    a: int
    qmax: int
    classifier_bound: int          # largest q-order allowed a nonzero coefficient
    largest_nonzero_order: int     # -1 when the series vanishes identically
    tail_all_zero: bool            # orders beyond the bound all vanished

    def lines(self) -> List[str]:
        out = [
            f"mu={list(self.mu)} ins={list(self.ins)} a={self.a} qmax={self.qmax}",
            f"classifier bound: q^{self.classifier_bound}",
            f"largest nonzero order: "
            + (f"q^{self.largest_nonzero_order}" if self.largest_nonzero_order >= 0
               else "none (series is 0)"),
            f"tail beyond bound vanishes: {self.tail_all_zero}",
        ]
        return out


def specialize_and_check(mu: Partition, ins: InsertionList, a: int, qmax: int,
                         jobs: int = 1) -> Tuple[QSeries, PolynomialityReport]:
    """Specialized vertex series over (s1, s2) plus the polynomiality report."""
    mu = pt.check_partition(mu)
    if a < 1:
        raise ValueError("a must be a positive integer")
    d = pt.size(mu)
    pref = insertion_prefactor(len(ins))
    coeffs: Dict[int, RationalFunction] = {}
    for n in range(d, qmax + 1):
        groups = group_sum_by_profile(mu, ins, a, n - d, jobs=jobs)
        total = RationalFunction.zero()
        for value in groups.values():
            total = total + value
        coeffs[n] = total * pref
    series = QSeries(d, qmax, coeffs)
    bound = d + contributing_length_bound(mu, a)
    nonzero = series.support()
    largest = max(nonzero) if nonzero else -1
    tail_ok = all(n <= bound for n in nonzero)
    report = PolynomialityReport(mu, tuple(ins), a, qmax, bound, largest, tail_ok)
    return series, report


def assemble_cap_leading(d: int, eta: Partition, ins: InsertionList) -> RationalFunction:
    """Leading q^d coefficient of the capped series via localization.

    Sums vertex leading coefficients times edge weights times the classical
    pairing of the fixed-point class with the Nakajima boundary class; the
    edge q-normalization q^(-d) cancels the vertex q^d against the rubber
    leading term, so no q bookkeeping remains.
    """
    from . import hilbert
    eta = pt.check_partition(eta)
    if pt.size(eta) != d:
        raise ValueError("eta must be a partition of d")
    total = RationalFunction.zero()
    for mu in pt.enumerate_partitions(d):
        lead = vertex_series(mu, tuple(ins), d).coefficient(d)
        if lead.is_zero():
            continue
        total = total + lead * edge_weight(mu) * hilbert.pairing_fixed_nakajima(mu, eta)
    return total
