"""Equivariant intersection theory on the Hilbert scheme of plane points.

Fixed points are indexed by partitions with tangent weights from the arm/leg
formula; the boundary basis is expanded over fixed points through integral
symmetric-function transitions with the deformation parameter tied to
-s2/s1.  The handful of convention choices (parameter orientation, partition
transposition, a global sign) are not guessed: they are calibrated against
two closed-form pairing targets, and a CalibrationFailed error is raised if
no choice reproduces them.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import partitions as pt
from .errors import CalibrationFailed, RankDeficient
from .partitions import Partition
from .polys import MPoly
from .ratfunc import NVARS, RationalFunction, S1, S2
from .tcharacter import TCharacter, chern_character_eval

# -- univariate exact arithmetic in the deformation parameter ---------------------


class UPoly:
    """Dense univariate polynomial over the rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Fraction]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> "UPoly":
        return UPoly([Fraction(c)])

    @staticmethod
    def x() -> "UPoly":
        return UPoly([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly([
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)])

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UPoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.coeffs[-1]
        while len(rem) >= len(other.coeffs):
            c = rem[-1] / dlead
            k = len(rem) - len(other.coeffs)
            q[k] = c
            for i, b in enumerate(other.coeffs):
                rem[k + i] -= c * b
            while rem and rem[-1] == 0:
                rem.pop()
            if not rem:
                break
        return UPoly(q), UPoly(rem)

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return UPoly([c / lead for c in self.coeffs])

    def gcd(self, other) -> "UPoly":
        a, b = self, other
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic()

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)


class UFrac:
    """Element of the rational function field in one parameter."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly = None, reduce: bool = True):
        if den is None:
            den = UPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError
        if reduce and not num.is_zero():
            g = num.gcd(den)
            if g.degree() > 0:
                num, _ = num.divmod(g)
                den, _ = den.divmod(g)
        if num.is_zero():
            den = UPoly.const(1)
        lead = den.coeffs[-1]
        if lead != 1:
            num = num * (Fraction(1) / lead)
            den = den.monic()
        self.num = num
        self.den = den

    @staticmethod
    def const(c) -> "UFrac":
        return UFrac(UPoly.const(c))

    @staticmethod
    def x_power(k: int) -> "UFrac":
        return UFrac(UPoly([0] * k + [1]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        return UFrac(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self):
        return UFrac(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UFrac(self.num * other, self.den, reduce=False)
        return UFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError
        return UFrac(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))


# -- symmetric-function transitions ------------------------------------------------


def _power_sum_poly(nvars: int, k: int) -> MPoly:
    terms = {}
    for i in range(nvars):
        exp = [0] * nvars
        exp[i] = k
        terms[tuple(exp)] = 1
    return MPoly(nvars, terms)


def _p_lambda_poly(nvars: int, lam: Partition) -> MPoly:
    out = MPoly.const(nvars, 1)
    for k in lam:
        out = out * _power_sum_poly(nvars, k)
    return out


def _invert_matrix(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@dataclass
class JackData:
    """Orthogonal triangular basis data over the one-parameter field."""

    parts: List[Partition]                      # ascending, dominance-compatible
    vectors: Dict[Partition, Dict[Partition, UFrac]]   # basis element in the p-basis
    norms: Dict[Partition, UFrac]
    p_coeffs: Dict[Partition, Dict[Partition, UFrac]]  # p_eta over the basis


def _p_inner(a: Dict[Partition, UFrac], b: Dict[Partition, UFrac]) -> UFrac:
    total = UFrac.const(0)
    for rho, ca in a.items():
        cb = b.get(rho)
        if cb is None or ca.is_zero() or cb.is_zero():
            continue
        weight = UFrac.x_power(len(rho)) * Fraction(pt.zee(rho))
        total = total + ca * cb * weight
    return total


def _hook_product(lam: Partition, shifted: bool) -> UPoly:
    """prod over cells of (alpha*arm + leg + 1) or (alpha*(arm+1) + leg)."""
    out = UPoly.const(1)
    for cell in pt.cells(lam):
        a = pt.arm(lam, cell)
        l = pt.leg(lam, cell)
        if shifted:
            out = out * UPoly([Fraction(l), Fraction(a + 1)])
        else:
            out = out * UPoly([Fraction(l + 1), Fraction(a)])
    return out


_JACK_CACHE: Dict[int, JackData] = {}


def jack_data(d: int) -> JackData:
    """Gram-Schmidt basis of monomial symmetric functions, checked against hooks.

    The resulting family is unitriangular over the monomial basis in a
    dominance-compatible order and orthogonal for the deformed power-sum
    pairing; its norms must match the closed hook-product form, otherwise
    the transition conventions are broken.
    """
    if d in _JACK_CACHE:
        return _JACK_CACHE[d]
    parts = list(reversed(pt.enumerate_partitions(d)))
    nvars = d
    reps = {lam: tuple(list(lam) + [0] * (nvars - len(lam))) for lam in parts}
    p_to_m = [[Fraction(_p_lambda_poly(nvars, lam).coefficient(reps[mu]))
               for mu in parts] for lam in parts]
    m_to_p = _invert_matrix(p_to_m)
    m_vectors = {
        mu: {parts[r]: UFrac.const(m_to_p[c][r]) for r in range(len(parts))
             if m_to_p[c][r] != 0}
        for c, mu in enumerate(parts)
    }
    vectors: Dict[Partition, Dict[Partition, UFrac]] = {}
    norms: Dict[Partition, UFrac] = {}
    for lam in parts:
        v = dict(m_vectors[lam])
        for mu in parts:
            if mu == lam:
                break
            c = _p_inner(v, vectors[mu]) / norms[mu]
            if c.is_zero():
                continue
            for rho, w in vectors[mu].items():
                cur = v.get(rho, UFrac.const(0))
                v[rho] = cur - c * w
        v = {rho: w for rho, w in v.items() if not w.is_zero()}
        vectors[lam] = v
        norms[lam] = _p_inner(v, v)
        closed = UFrac(_hook_product(lam, shifted=True),
                       _hook_product(lam, shifted=False))
        if not norms[lam] == closed:
            raise CalibrationFailed(
                f"basis norm for {lam} disagrees with the hook closed form")
    p_coeffs: Dict[Partition, Dict[Partition, UFrac]] = {}
    for eta in parts:
        weight = UFrac.x_power(len(eta)) * Fraction(pt.zee(eta))
        p_coeffs[eta] = {
            lam: (vectors[lam].get(eta, UFrac.const(0)) * weight) / norms[lam]
            for lam in parts
        }
    data = JackData(parts, vectors, norms, p_coeffs)
    _JACK_CACHE[d] = data
    return data


# -- fixed points ----------------------------------------------------------------------


def fixed_point_tangent_weights(mu: Partition) -> List[MPoly]:
    """The 2|mu| tangent weights of the Hilbert scheme at a monomial ideal.

    Arm/leg form; the product identity against the edge weight is the
    acceptance oracle, individual signs are an internal convention.
    """
    mu = pt.check_partition(mu)
    out = []
    for cell in pt.cells(mu):
        a = pt.arm(mu, cell)
        l = pt.leg(mu, cell)
        out.append(MPoly.linear((-(a + 1), l, 0)))
        out.append(MPoly.linear((a, -(l + 1), 0)))
    return out


def tangent_euler(mu: Partition) -> RationalFunction:
    out = RationalFunction.one()
    for w in fixed_point_tangent_weights(mu):
        out = out * RationalFunction.from_poly(w)
    return out


def gram_closed_form(eta: Partition, rho: Partition) -> RationalFunction:
    """The closed-form boundary pairing: diagonal with sign and symmetry factor."""
    if tuple(eta) != tuple(rho):
        return RationalFunction.zero()
    d = pt.size(eta)
    ell = len(eta)
    sign = (-1) ** (d - ell)
    return RationalFunction.from_factors(
        Fraction(sign, pt.zee(eta)), [], [S1, S2] * ell)


def gram_inverse_entry(mu: Partition) -> RationalFunction:
    """g^{mu mu} of the inverse pairing matrix (the pairing is diagonal)."""
    d = pt.size(mu)
    ell = len(mu)
    sign = (-1) ** (d - ell)
    poly = MPoly.const(NVARS, sign * pt.zee(mu)) * (S1 * S2) ** ell
    return RationalFunction.from_poly(poly)


# -- calibrated transition ----------------------------------------------------------------


@dataclass
class Transition:
    d: int
    mus: List[Partition]
    convention: Tuple[str, bool, int]          # (alpha tag, transpose, global sign)
    tangent: Dict[Partition, List[MPoly]]
    etan: Dict[Partition, RationalFunction]
    inv_etan: Dict[Partition, RationalFunction]   # kept factored for reduction
    restriction: Dict[Partition, Dict[Partition, RationalFunction]]  # C_eta at mu

    def coefficient_matrix(self) -> Dict[Partition, Dict[Partition, RationalFunction]]:
        """C_eta = sum over mu of coeff * (fixed point class)."""
        return {
            eta: {mu: self.restriction[eta][mu] * self.inv_etan[mu] for mu in self.mus}
            for eta in self.mus
        }


def _rational_root_split(p: UPoly) -> Tuple[List[Fraction], UPoly]:
    """Peel off rational roots: p = (x - r_1)...(x - r_k) * remainder."""
    roots: List[Fraction] = []
    while p.degree() >= 1:
        root = _find_rational_root(p)
        if root is None:
            break
        roots.append(root)
        p, rem = p.divmod(UPoly([-root, 1]))
        assert rem.is_zero()
    return roots, p


def _find_rational_root(p: UPoly) -> Optional[Fraction]:
    if p.coeffs[0] == 0:
        return Fraction(0)
    scale = 1
    for c in p.coeffs:
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    ints = [int(c * scale) for c in p.coeffs]
    for pn in _divisors(ints[0]):
        for qn in _divisors(ints[-1]):
            for cand in (Fraction(pn, qn), Fraction(-pn, qn)):
                if _upoly_eval(p, cand) == 0:
                    return cand
    return None


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _divisors(n: int):
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0]


def _upoly_eval(p: UPoly, x: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(p.coeffs):
        total = total * x + c
    return total


def _ufrac_to_rational(uf: UFrac, alpha_tag: str) -> RationalFunction:
    """Substitute the calibrated parameter value into a one-parameter fraction.

    Denominator factors are split at rational roots first so the resulting
    atoms are linear forms and cancel syntactically downstream.
    """
    if alpha_tag == "-s2/s1":
        top, bottom = S2, S1
    elif alpha_tag == "-s1/s2":
        top, bottom = S1, S2
    else:
        raise ValueError(alpha_tag)

    def homogenize(p: UPoly) -> MPoly:
        deg = p.degree() if not p.is_zero() else 0
        out = MPoly.zero(NVARS)
        for i, c in enumerate(p.coeffs):
            if c:
                out = out + MPoly.const(NVARS, c * (-1) ** i) * top ** i * bottom ** (deg - i)
        return out

    def linear_at(root: Fraction) -> MPoly:
        # the factor (alpha - root) at alpha = -top/bottom, cleared by bottom
        return -top - bottom * root

    num_roots, num_rest = _rational_root_split(uf.num)
    den_roots, den_rest = _rational_root_split(uf.den)
    num_factors = [linear_at(r) for r in num_roots] + [homogenize(num_rest)]
    den_factors = [linear_at(r) for r in den_roots] + (
        [homogenize(den_rest)] if den_rest.degree() >= 1 or den_rest.coeffs[0] != 1 else [])
    # balance the bottom-variable clearing: each linear split contributed
    # bottom^1 while homogenize(rest) contributes bottom^(deg rest)
    num_deg = len(num_roots) + (num_rest.degree() if not num_rest.is_zero() else 0)
    den_deg = len(den_roots) + den_rest.degree()
    gap = num_deg - den_deg
    if gap > 0:
        den_factors.extend([bottom] * gap)
    elif gap < 0:
        num_factors.extend([bottom] * (-gap))
    return RationalFunction.from_factors(1, num_factors, den_factors)


def _alpha_value_factors(alpha_tag: str) -> Tuple[MPoly, MPoly, int]:
    """(numerator variable, denominator variable, sign) of the parameter value."""
    if alpha_tag == "-s2/s1":
        return S2, S1, -1
    return S1, S2, -1


class _FactoredSquare:
    """Signed multiset of canonical linear factors plus a rational scalar."""

    def __init__(self):
        self.scalar = Fraction(1)
        self.factors: Dict[MPoly, int] = {}

    def mul_form(self, form: MPoly, exponent: int):
        canon, scale = form.content_normalized()
        self.scalar *= Fraction(scale) ** exponent
        if canon.is_constant():
            self.scalar *= Fraction(canon.constant_value()) ** exponent
        else:
            self.factors[canon] = self.factors.get(canon, 0) + exponent
            if self.factors[canon] == 0:
                del self.factors[canon]

    def sqrt(self) -> Optional[RationalFunction]:
        if any(e % 2 for e in self.factors.values()):
            return None
        if self.scalar <= 0:
            return None
        num, den = self.scalar.numerator, self.scalar.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        out = RationalFunction.from_scalar(Fraction(rn, rd))
        for f, e in self.factors.items():
            half = e // 2
            if half >= 0:
                out = out * RationalFunction.from_poly(f) ** half
            else:
                out = out * RationalFunction.from_factors(1, [], [f] * (-half))
        return out


def _isqrt_exact(n: int) -> Optional[int]:
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


def _hook_linear_factors(lam: Partition, alpha_tag: str):
    """Per-cell linear factors of the basis norm at the parameter value.

    The norm is prod (alpha(a+1) + l) / (alpha a + l + 1); at alpha =
    -num/den each hook factor becomes a linear form over the common
    denominator variable, which cancels between the two products.
    """
    top_var, bottom_var, sign = _alpha_value_factors(alpha_tag)
    nums, dens = [], []
    for cell in pt.cells(lam):
        a = pt.arm(lam, cell)
        l = pt.leg(lam, cell)
        # alpha*(a+1) + l -> (l*bottom + sign*(a+1)*top) / bottom
        nums.append(bottom_var * l + top_var * (sign * (a + 1)))
        dens.append(bottom_var * (l + 1) + top_var * (sign * a))
    return nums, dens


def _build_transition(d: int) -> Transition:
    """Search the small convention space and calibrate against closed forms."""
    jack = jack_data(d)
    mus = pt.enumerate_partitions(d)
    tangent = {mu: fixed_point_tangent_weights(mu) for mu in mus}
    etan = {mu: tangent_euler(mu) for mu in mus}
    inv_etan = {mu: RationalFunction.from_factors(1, [], tangent[mu]) for mu in mus}

    failures = []
    for alpha_tag in ("-s2/s1", "-s1/s2"):
        for transpose in (True, False):
            trans = _try_convention(d, jack, mus, tangent, etan, inv_etan,
                                    alpha_tag, transpose)
            if trans is not None:
                return trans
            failures.append((alpha_tag, transpose))
    raise CalibrationFailed(
        f"no transition convention matched the closed-form targets at d = {d}; "
        f"tried {failures}")


def _try_convention(d, jack: JackData, mus, tangent, etan, inv_etan,
                    alpha_tag: str, transpose: bool) -> Optional[Transition]:
    jidx = {mu: (pt.conjugate(mu) if transpose else mu) for mu in mus}

    # s(mu)^2 = (-1)^d (s1 s2)^(2d) * norm(jack index) / e(tangent)
    smu: Dict[Partition, RationalFunction] = {}
    for mu in mus:
        sq = _FactoredSquare()
        sq.scalar = Fraction((-1) ** d)
        sq.mul_form(S1, 2 * d)
        sq.mul_form(S2, 2 * d)
        nums, dens = _hook_linear_factors(jidx[mu], alpha_tag)
        for f in nums:
            sq.mul_form(f, 1)
        for f in dens:
            sq.mul_form(f, -1)
        for w in tangent[mu]:
            sq.mul_form(w, -1)
        root = sq.sqrt()
        if root is None:
            return None
        smu[mu] = root

    # u(eta)^2 = g_(eta eta) / ((-1)^d (s1 s2)^(2d) zee(eta) alpha^len(eta))
    ueta: Dict[Partition, RationalFunction] = {}
    for eta in mus:
        sq = _FactoredSquare()
        ell = len(eta)
        sq.scalar = Fraction((-1) ** (d - ell), pt.zee(eta))             # g numerator
        sq.mul_form(S1, -ell)
        sq.mul_form(S2, -ell)
        sq.scalar *= Fraction((-1) ** d, pt.zee(eta))                    # 1/(sign zee)
        sq.mul_form(S1, -2 * d)
        sq.mul_form(S2, -2 * d)
        top_var, bottom_var, sign = _alpha_value_factors(alpha_tag)
        sq.scalar *= Fraction(sign) ** ell
        sq.mul_form(top_var, -ell)
        sq.mul_form(bottom_var, ell)
        root = sq.sqrt()
        if root is None:
            return None
        ueta[eta] = root

    def restrictions(epsilon: int) -> Dict[Partition, Dict[Partition, RationalFunction]]:
        out: Dict[Partition, Dict[Partition, RationalFunction]] = {}
        for eta in mus:
            row = {}
            coeffs = jack.p_coeffs[eta]
            for mu in mus:
                c = coeffs[jidx[mu]]
                if c.is_zero():
                    row[mu] = RationalFunction.zero()
                    continue
                value = _ufrac_to_rational(c, alpha_tag)
                row[mu] = value * ueta[eta] * smu[mu] * etan[mu] * epsilon
            out[eta] = row
        return out

    for epsilon in (1, -1):
        rest = restrictions(epsilon)
        trans = Transition(d, mus, (alpha_tag, transpose, epsilon),
                           tangent, etan, inv_etan, rest)
        if _passes_quick_targets(trans):
            return trans
    return None


def _passes_quick_targets(trans: Transition) -> bool:
    """Cheap closed-form targets driving the convention search.

    The single-column descendent pairing 1/d! fixes the global sign in every
    degree; the full pairing matrix fixes everything squared.
    """
    d = trans.d
    s1s2 = RationalFunction.from_poly(S1 * S2)
    target = RationalFunction.from_scalar(Fraction(1, factorial(d)))
    if not s1s2 * _pairing(trans, (d - 1,), (d,)) == target:
        return False
    if d == 1:
        return True
    for eta in trans.mus:
        for rho in trans.mus:
            if _nakajima_pairing(trans, eta, rho) != gram_closed_form(eta, rho):
                return False
    return True


def _nakajima_pairing(trans: Transition, eta, rho) -> RationalFunction:
    total = RationalFunction.zero()
    for mu in trans.mus:
        a = trans.restriction[tuple(eta)][mu]
        b = trans.restriction[tuple(rho)][mu]
        if a.is_zero() or b.is_zero():
            continue
        total = total + a * b * trans.inv_etan[mu]
    return total


def _pairing(trans: Transition, ins, eta) -> RationalFunction:
    total = RationalFunction.zero()
    pref = RationalFunction.from_factors(1, [], [S1, S2] * len(ins))
    for mu in trans.mus:
        c = trans.restriction[tuple(eta)][mu]
        if c.is_zero():
            continue
        term = c * trans.inv_etan[mu]
        for k in ins:
            term = term * descendent_class_at_fixed_point(k, mu)
        total = total + term
    return total * pref


_TRANSITIONS: Dict[int, Transition] = {}


def transition(d: int) -> Transition:
    """The calibrated transition for degree d, cached in memory and on disk."""
    if d in _TRANSITIONS:
        return _TRANSITIONS[d]
    cached = _load_cached(d)
    if cached is not None:
        _TRANSITIONS[d] = cached
        return cached
    trans = _build_transition(d)
    _TRANSITIONS[d] = trans
    _store_cached(trans)
    return trans


def nakajima_transition(d: int) -> Dict[Partition, Dict[Partition, RationalFunction]]:
    """Expansion coefficients of each boundary class over fixed-point classes."""
    if d < 1:
        raise ValueError("d must be positive")
    return transition(d).coefficient_matrix()


def nakajima_pairing(eta: Partition, rho: Partition) -> RationalFunction:
    eta, rho = pt.check_partition(eta), pt.check_partition(rho)
    if pt.size(eta) != pt.size(rho):
        return RationalFunction.zero()
    return _nakajima_pairing(transition(pt.size(eta)), eta, rho)


def pairing_fixed_nakajima(mu: Partition, eta: Partition) -> RationalFunction:
    """Intersection pairing of a fixed-point class with a boundary class."""
    mu, eta = pt.check_partition(mu), pt.check_partition(eta)
    return transition(pt.size(mu)).restriction[eta][mu]


def descendent_class_at_fixed_point(k: int, mu: Partition) -> RationalFunction:
    """Chern-character descendent restricted to a fixed point (no pushforward factor)."""
    if k < 0:
        raise ValueError("descendent index must be nonnegative")
    mu = tuple(mu)
    if not mu:
        return RationalFunction.zero()
    taut = TCharacter({(i, j, 0): 1 for (i, j) in pt.cells(mu)})
    one_minus = (TCharacter({(0, 0, 0): 1, (1, 0, 0): -1})
                 * TCharacter({(0, 0, 0): 1, (0, 1, 0): -1}))
    return chern_character_eval(taut * one_minus, 2 + k)


def hilb_descendent_pairing(ins: Sequence[int], eta: Partition) -> RationalFunction:
    """Localization pairing of descendent insertions against a boundary class.

    Includes one 1/(s1 s2) pushforward normalization per insertion, so
    s1 s2 <tau_(c-1) | (c)> = 1/c! holds on the nose.
    """
    eta = pt.check_partition(eta)
    d = pt.size(eta)
    return _pairing(transition(d), tuple(ins), eta)


@dataclass
class CorrespondenceMatrix:
    d: int
    rows: List[Partition]            # descendent monomials tau_(mu_i - 1)
    cols: List[Partition]            # boundary classes
    entries: Dict[Tuple[Partition, Partition], RationalFunction]

    def entry(self, row, col) -> RationalFunction:
        return self.entries[(tuple(row), tuple(col))]


def correspondence_matrix(d: int) -> CorrespondenceMatrix:
    """Leading pairings of descendent monomials against boundary classes.

    Asserts length-triangularity and maximal rank; raises RankDeficient when
    the matrix is singular.
    """
    if d < 1:
        raise ValueError("d must be positive")
    order = sorted(pt.enumerate_partitions(d), key=lambda m: (len(m), m))
    entries = {}
    for mu in order:
        ins = tuple(part - 1 for part in mu)
        for eta in order:
            entries[(mu, eta)] = hilb_descendent_pairing(ins, eta)
    mat = CorrespondenceMatrix(d, order, order, entries)
    for mu in order:
        for eta in order:
            if len(mu) > len(eta) and not entries[(mu, eta)].is_zero():
                raise RankDeficient(
                    f"expected vanishing entry for row {mu} vs column {eta}")
        if entries[(mu, mu)].is_zero():
            raise RankDeficient(f"vanishing diagonal entry at {mu}")
    _assert_full_rank(mat)
    return mat


def _assert_full_rank(mat: CorrespondenceMatrix):
    # A nonzero determinant at one rational point certifies full rank.
    for s1v, s2v in ((Fraction(7), Fraction(3)), (Fraction(11), Fraction(5)),
                     (Fraction(13), Fraction(2))):
        try:
            numeric = [[mat.entries[(mu, eta)].eval((s1v, s2v, Fraction(0)))
                        for eta in mat.cols] for mu in mat.rows]
        except ZeroDivisionError:
            continue
        det = _det_fraction(numeric)
        if det != 0:
            return
        raise RankDeficient(f"correspondence matrix singular at d = {mat.d}")
    raise RankDeficient("could not certify rank at any sample point")


def _det_fraction(rows: List[List[Fraction]]) -> Fraction:
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                m[r] = [v - f * w for v, w in zip(m[r], m[c])]
    return det


# -- disk cache --------------------------------------------------------------------------


def _cache_dir() -> Optional[str]:
    return os.environ.get("PTVERTEX_CACHE")


def _poly_to_json(p: MPoly):
    return [[list(e), str(Fraction(c))] for e, c in p.sorted_terms()]


def _poly_from_json(data) -> MPoly:
    return MPoly(NVARS, {tuple(e): Fraction(c) for e, c in data})


def _rf_to_json(rf: RationalFunction):
    return {"num": _poly_to_json(rf.num),
            "den": [[_poly_to_json(f), e] for f, e in rf.den.items()]}


def _rf_from_json(data) -> RationalFunction:
    num = _poly_from_json(data["num"])
    den = {_poly_from_json(f): e for f, e in data["den"]}
    return RationalFunction(num, den, reduce=False)


_CACHE_VERSION = 1


def _load_cached(d: int) -> Optional[Transition]:
    root = _cache_dir()
    if not root:
        return None
    path = os.path.join(root, f"transition_d{d}.json")
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("version") != _CACHE_VERSION or data.get("d") != d:
            return None
        mus = [tuple(m) for m in data["mus"]]
        tangent = {tuple(m): [_poly_from_json(w) for w in ws]
                   for m, ws in data["tangent"]}
        etan = {tuple(m): _rf_from_json(v) for m, v in data["etan"]}
        restriction = {
            tuple(eta): {tuple(m): _rf_from_json(v) for m, v in row}
            for eta, row in data["restriction"]
        }
        inv_etan = {mu: RationalFunction.from_factors(1, [], ws)
                    for mu, ws in tangent.items()}
        return Transition(d, mus, tuple(data["convention"]), tangent, etan,
                          inv_etan, restriction)
    except (KeyError, ValueError, OSError):
        return None


def _store_cached(trans: Transition):
    root = _cache_dir()
    if not root:
        return
    try:
        os.makedirs(root, exist_ok=True)
        data = {
            "version": _CACHE_VERSION,
            "d": trans.d,
            "convention": list(trans.convention),
            "mus": [list(m) for m in trans.mus],
            "tangent": [[list(m), [_poly_to_json(w) for w in ws]]
                        for m, ws in trans.tangent.items()],
            "etan": [[list(m), _rf_to_json(v)] for m, v in trans.etan.items()],
            "restriction": [[list(eta), [[list(m), _rf_to_json(v)]
                                         for m, v in row.items()]]
                            for eta, row in trans.restriction.items()],
        }
        path = os.path.join(root, f"transition_d{trans.d}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh)
    except OSError:
        pass
