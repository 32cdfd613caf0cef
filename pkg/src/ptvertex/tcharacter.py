"""Torus characters: integer Laurent expressions in t1, t2, t3.

A TCharacter is numerator/denominator where the numerator is an integer
Laurent polynomial (exponents may be rational, living in a (1/a)-lattice
after the v-coordinate change) and the denominator is a multiset of factors
of the form (1 - monomial).  Fraction simplification is exact; a character
with an empty factor multiset is flagged polynomial.

The ascending expansion is a truncated view for diagnostics only; all
arithmetic stays in closed fraction form so cancellations are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .errors import NotPolynomial, ZeroWeight
from .polys import MPoly, norm_scalar
from .ratfunc import NVARS, RationalFunction, euler_product

Exp3 = Tuple  # 3-tuple of int/Fraction exponents


def _exp(e) -> Exp3:
    return tuple(norm_scalar(Fraction(x)) if not isinstance(x, int) else x for x in e)


def _exp_add(a: Exp3, b: Exp3) -> Exp3:
    return tuple(norm_scalar(x + y) for x, y in zip(a, b))


def _exp_neg(a: Exp3) -> Exp3:
    return tuple(-x for x in a)


def _exp_positive(w: Exp3) -> bool:
    """Graded-lex positivity used to orient denominator factors."""
    total = sum(w)
    if total != 0:
        return total > 0
    return w > (0,) * len(w)


class TCharacter:
    """Integer-coefficient Laurent fraction in three torus variables."""

    __slots__ = ("num", "den")

    def __init__(self, num: Mapping[Exp3, int] = None, den: Mapping[Exp3, int] = None):
        self.num: Dict[Exp3, int] = {}
        if num:
            for e, c in num.items():
                if c:
                    e = _exp(e)
                    self.num[e] = self.num.get(e, 0) + c
            self.num = {e: c for e, c in self.num.items() if c}
        self.den: Dict[Exp3, int] = dict(den) if den else {}
        if not self.num:
            self.den = {}
        self._normalize_factors()

    def _normalize_factors(self):
        fixed: Dict[Exp3, int] = {}
        for w, m in self.den.items():
            w = _exp(w)
            if all(x == 0 for x in w):
                raise ZeroDivisionError("denominator factor (1 - 1) is zero")
            if not _exp_positive(w):
                # 1/(1 - t^w) = -t^(-w) / (1 - t^(-w))
                for _ in range(m):
                    self.num = {_exp_add(e, _exp_neg(w)): -c for e, c in self.num.items()}
                w = _exp_neg(w)
            fixed[w] = fixed.get(w, 0) + m
        self.den = fixed

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero() -> "TCharacter":
        return TCharacter()

    @staticmethod
    def monomial(e, coeff: int = 1) -> "TCharacter":
        return TCharacter({_exp(e): coeff})

    @staticmethod
    def one() -> "TCharacter":
        return TCharacter.monomial((0, 0, 0))

    # -- views ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return not self.den

    def rank(self):
        """Sum of numerator coefficients (the character evaluated at t = 1).

        Only meaningful for polynomial characters.
        """
        return sum(self.num.values())

    def monomials(self):
        """Sorted (exponent, coefficient) pairs of a polynomial character."""
        self._require_polynomial()
        return sorted(self.num.items(), key=lambda t: tuple(Fraction(x) for x in t[0]))

    def _require_polynomial(self):
        if self.den:
            raise NotPolynomial(f"character retains denominator factors {sorted(self.den)}")

    # -- arithmetic ---------------------------------------------------------------

    def _mul_num_by_factor(self, num: Dict[Exp3, int], w: Exp3) -> Dict[Exp3, int]:
        """Multiply a numerator dict by (1 - t^w)."""
        out = dict(num)
        for e, c in num.items():
            shifted = _exp_add(e, w)
            nc = out.get(shifted, 0) - c
            if nc:
                out[shifted] = nc
            else:
                out.pop(shifted, None)
        return {e: c for e, c in out.items() if c}

    def __add__(self, other: "TCharacter") -> "TCharacter":
        lcm: Dict[Exp3, int] = dict(self.den)
        for w, m in other.den.items():
            lcm[w] = max(lcm.get(w, 0), m)
        a = dict(self.num)
        for w, m in lcm.items():
            for _ in range(m - self.den.get(w, 0)):
                a = self._mul_num_by_factor(a, w)
        b = dict(other.num)
        for w, m in lcm.items():
            for _ in range(m - other.den.get(w, 0)):
                b = self._mul_num_by_factor(b, w)
        for e, c in b.items():
            a[e] = a.get(e, 0) + c
        return TCharacter(a, lcm).simplify()

    def __neg__(self) -> "TCharacter":
        out = TCharacter.zero()
        out.num = {e: -c for e, c in self.num.items()}
        out.den = dict(self.den)
        return out

    def __sub__(self, other: "TCharacter") -> "TCharacter":
        return self + (-other)

    def __mul__(self, other) -> "TCharacter":
        if isinstance(other, int):
            out = TCharacter.zero()
            out.num = {e: c * other for e, c in self.num.items() if c * other}
            out.den = dict(self.den) if out.num else {}
            return out
        num: Dict[Exp3, int] = {}
        for e1, c1 in self.num.items():
            for e2, c2 in other.num.items():
                e = _exp_add(e1, e2)
                num[e] = num.get(e, 0) + c1 * c2
        den = dict(self.den)
        for w, m in other.den.items():
            den[w] = den.get(w, 0) + m
        return TCharacter(num, den).simplify()

    __rmul__ = __mul__

    def divide_by_factor(self, w) -> "TCharacter":
        """Return self / (1 - t^w) in fraction form."""
        den = dict(self.den)
        w = _exp(w)
        den[w] = den.get(w, 0) + 1
        out = TCharacter.zero()
        out.num = dict(self.num)
        out.den = den
        out._normalize_factors()
        return out

    def bar(self) -> "TCharacter":
        """The involution t_i -> 1/t_i."""
        num = {_exp_neg(e): c for e, c in self.num.items()}
        den = {_exp_neg(w): m for w, m in self.den.items()}
        return TCharacter(num, den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TCharacter):
            return NotImplemented
        diff = self - other
        return diff.is_zero()

    def __hash__(self):
        s = self.simplify()
        return hash((frozenset(s.num.items()), frozenset(s.den.items())))

    # -- simplification -------------------------------------------------------------

    def _try_divide(self, num: Dict[Exp3, int], w: Exp3) -> Optional[Dict[Exp3, int]]:
        """Exact quotient num / (1 - t^w), or None.

        Numerator terms are grouped into lines e + Z*w; on each line the
        quotient of sum(c_k X^k) by (1 - X) exists iff the coefficients sum
        to zero, with partial sums as quotient coefficients.
        """
        idx = next(i for i, x in enumerate(w) if x != 0)
        lines: Dict[Exp3, Dict[int, int]] = {}
        for e, c in num.items():
            lam = Fraction(e[idx]) / Fraction(w[idx])
            k = int(lam // 1)
            rep = _exp_add(e, tuple(-k * x for x in w))
            lines.setdefault(rep, {})[k] = c
        out: Dict[Exp3, int] = {}
        for rep, coeffs in lines.items():
            if sum(coeffs.values()) != 0:
                return None
            lo, hi = min(coeffs), max(coeffs)
            running = 0
            for k in range(lo, hi):
                running += coeffs.get(k, 0)
                if running:
                    out[_exp_add(rep, tuple(k * x for x in w))] = running
        return out

    def simplify(self) -> "TCharacter":
        """Cancel denominator factors that divide the numerator exactly."""
        num = dict(self.num)
        den: Dict[Exp3, int] = {}
        for w, m in self.den.items():
            while m > 0:
                q = self._try_divide(num, w)
                if q is None:
                    break
                num = q
                m -= 1
            if m:
                den[w] = m
        out = TCharacter.zero()
        out.num = num
        out.den = den if num else {}
        return out

    def as_polynomial(self) -> "TCharacter":
        """Fully simplified character; raises NotPolynomial if a factor remains."""
        s = self.simplify()
        s._require_polynomial()
        return s

    # -- expansion view ---------------------------------------------------------------

    def ascending_expansion(self, order) -> "TCharacter":
        """Truncated expansion in ascending total degree (diagnostic view).

        Every denominator factor must have positive total degree for the
        geometric expansion to converge degree-wise.
        """
        order = Fraction(order)
        terms = dict(self.num)
        if not terms:
            return TCharacter.zero()
        for w, m in self.den.items():
            degw = sum(Fraction(x) for x in w)
            if degw <= 0:
                raise NotPolynomial("factor with non-ascending monomial cannot be expanded")
            for _ in range(m):
                lo = min(sum(Fraction(x) for x in e) for e in terms)
                kmax = int((order - lo) / degw) + 1
                new: Dict[Exp3, int] = {}
                for e, c in terms.items():
                    for k in range(kmax + 1):
                        shifted = _exp_add(e, tuple(k * x for x in w))
                        if sum(Fraction(x) for x in shifted) > order:
                            break
                        new[shifted] = new.get(shifted, 0) + c
                terms = {e: c for e, c in new.items() if c}
        terms = {e: c for e, c in terms.items()
                 if sum(Fraction(x) for x in e) <= order}
        out = TCharacter.zero()
        out.num = terms
        return out

    # -- coordinate changes --------------------------------------------------------------

    def map_exponents(self, matrix: Sequence[Sequence[Fraction]]) -> "TCharacter":
        """Apply a linear map to every exponent vector (rows act on exponents)."""
        def apply(e):
            return _exp(tuple(sum(Fraction(row[i]) * e[i] for i in range(3)) for row in matrix))

        num: Dict[Exp3, int] = {}
        for e, c in self.num.items():
            k = apply(e)
            num[k] = num.get(k, 0) + c
        den: Dict[Exp3, int] = {}
        for w, m in self.den.items():
            k = apply(w)
            den[k] = den.get(k, 0) + m
        return TCharacter(num, den)

    def to_v_coordinates(self, a: int) -> "TCharacter":
        """Rewrite in v1 = t1, v2 = t1*t2, v3 = t1*t2*t3^(-a).

        A monomial t1^i t2^j t3^k becomes v1^(i-j) v2^(j + k/a) v3^(-k/a).
        """
        return self.map_exponents((
            (1, -1, 0),
            (0, 1, Fraction(1, a)),
            (0, 0, Fraction(-1, a)),
        ))

    # -- rendering ----------------------------------------------------------------------

    def render(self, varnames=("t1", "t2", "t3")) -> str:
        if not self.num:
            return "0"

        def mono(e):
            parts = []
            for v, x in zip(varnames, e):
                if x == 0:
                    continue
                parts.append(v if x == 1 else f"{v}^{x}")
            return "*".join(parts) if parts else "1"

        pieces = []
        for e, c in sorted(self.num.items(), key=lambda t: tuple(Fraction(x) for x in t[0]),
                           reverse=True):
            mag = abs(c)
            body = mono(e) if mag == 1 and mono(e) != "1" else (
                str(mag) if mono(e) == "1" else f"{mag}*{mono(e)}")
            pieces.append(("-" if c < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        if self.den:
            dens = []
            for w, m in sorted(self.den.items()):
                f = f"(1 - {mono(w)})"
                dens.append(f if m == 1 else f + f"^{m}")
            text = f"({text}) / ({'*'.join(dens)})"
        return text

    def __repr__(self):
        return f"TCharacter({self.render()})"


def simplify_character(char: TCharacter) -> TCharacter:
    """Reduce a character fraction; flags the result polynomial when it is."""
    return char.simplify()


DEFAULT_WEIGHTS = None  # filled below; linear forms s1, s2, s3


def _weight_form(e: Exp3, weights) -> MPoly:
    form = MPoly.zero(NVARS)
    for x, w in zip(e, weights):
        if x != 0:
            form = form + w * Fraction(x)
    return form


def euler_class(char: TCharacter, weights=None) -> RationalFunction:
    """Euler class prod (w . s)^(n_w) of a polynomial character.

    `weights` assigns a linear form to each torus variable (default
    s1, s2, s3); passing (u1, u2, u3) forms evaluates in v-coordinates.
    """
    poly = char.as_polynomial()
    if weights is None:
        weights = _default_weights()
    factors = []
    for e, c in poly.num.items():
        form = _weight_form(e, weights)
        if form.is_zero():
            raise ZeroWeight(f"monomial {e} with coefficient {c} has zero weight")
        factors.append((form, c))
    return euler_product(factors)


def chern_character_eval(char: TCharacter, k: int, weights=None) -> RationalFunction:
    """Degree-k piece of the Chern character: sum n_w (w . s)^k / k!."""
    if k < 0:
        raise ValueError("chern degree must be nonnegative")
    poly = char.as_polynomial()
    if weights is None:
        weights = _default_weights()
    total = MPoly.zero(NVARS)
    for e, c in poly.num.items():
        form = _weight_form(e, weights)
        total = total + form ** k * c
    from math import factorial
    return RationalFunction(total * Fraction(1, factorial(k)))


def _default_weights():
    global DEFAULT_WEIGHTS
    if DEFAULT_WEIGHTS is None:
        DEFAULT_WEIGHTS = tuple(MPoly.variable(NVARS, i) for i in range(3))
    return DEFAULT_WEIGHTS
