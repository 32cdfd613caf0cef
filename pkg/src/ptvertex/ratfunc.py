"""Exact rational functions in the equivariant weights s1, s2, s3.

A value is numerator/denominator with the denominator kept as a multiset of
canonical irreducible-in-practice factors (every denominator produced by an
Euler class is a product of linear forms).  Keeping the factorization makes
common denominators, cancellation, and the s3 = (s1+s2)/a specialization
exact multiset operations plus exact polynomial division; no general
multivariate gcd is ever needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from .polys import MPoly, Scalar, norm_scalar

NVARS = 3
VARNAMES = ("s1", "s2", "s3")

S1 = MPoly.variable(NVARS, 0)
S2 = MPoly.variable(NVARS, 1)
S3 = MPoly.variable(NVARS, 2)


class RationalFunction:
    """num / prod(factor**mult) with canonical content-normalized factors."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: Mapping[MPoly, int] = None, reduce: bool = True):
        if den is None:
            den = {}
        if num.is_zero():
            den = {}
        self.num = num
        self.den = dict(den)
        if reduce:
            self._reduce()

    # -- construction ----------------------------------------------------------

    @staticmethod
    def from_scalar(c: Scalar) -> "RationalFunction":
        return RationalFunction(MPoly.const(NVARS, c))

    @staticmethod
    def from_poly(p: MPoly) -> "RationalFunction":
        return RationalFunction(p)

    @staticmethod
    def one() -> "RationalFunction":
        return RationalFunction.from_scalar(1)

    @staticmethod
    def zero() -> "RationalFunction":
        return RationalFunction(MPoly.zero(NVARS))

    @staticmethod
    def from_factors(scalar: Scalar, num_factors, den_factors) -> "RationalFunction":
        """Build scalar * prod(num_factors) / prod(den_factors) exactly.

        Denominator factors are content-normalized and their monomial content
        is split off into single-variable atoms, so cancellation by exact
        division sees the finest factors we know about.
        """
        num = MPoly.const(NVARS, scalar)
        for f in num_factors:
            num = num * f
        den: dict = {}
        for f in den_factors:
            canon, scale = f.content_normalized()
            if canon.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            num = num * (1 / Fraction(scale))
            mins = [min(e[i] for e in canon.terms) for i in range(canon.nvars)]
            if any(mins):
                canon = MPoly(canon.nvars,
                              {tuple(a - b for a, b in zip(e, mins)): c
                               for e, c in canon.terms.items()})
                for i, m in enumerate(mins):
                    if m:
                        v = MPoly.variable(canon.nvars, i)
                        den[v] = den.get(v, 0) + m
            if canon.is_constant():
                num = num * (1 / Fraction(canon.constant_value()))
            else:
                den[canon] = den.get(canon, 0) + 1
        return RationalFunction(num, den)

    # -- normalization -----------------------------------------------------------

    def _reduce(self):
        if self.num.is_zero():
            self.den = {}
            return
        newden = {}
        for f, e in self.den.items():
            while e > 0:
                q = self.num.exact_div(f)
                if q is None:
                    break
                self.num = q
                e -= 1
            if e:
                newden[f] = e
        self.den = newden

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    @property
    def numerator(self) -> MPoly:
        return self.num

    @property
    def denominator(self) -> MPoly:
        """The denominator expanded to a single polynomial."""
        out = MPoly.const(NVARS, 1)
        for f, e in self.den.items():
            out = out * f ** e
        return out

    # -- arithmetic ----------------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MPoly):
            return RationalFunction(other)
        return RationalFunction.from_scalar(other)

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        lcm: dict = dict(self.den)
        for f, e in other.den.items():
            lcm[f] = max(lcm.get(f, 0), e)
        a = self.num
        for f, e in lcm.items():
            gap = e - self.den.get(f, 0)
            if gap:
                a = a * f ** gap
        b = other.num
        for f, e in lcm.items():
            gap = e - other.den.get(f, 0)
            if gap:
                b = b * f ** gap
        return RationalFunction(a + b, lcm)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction.zero()
            return RationalFunction(self.num * other, self.den, reduce=False)
        other = self._coerce(other)
        if not other.den and self.den and \
                all(f.total_degree() == 1 for f in self.den):
            # Linear atoms are irreducible and both sides are reduced, so
            # any cancellation must come from the incoming polynomial alone.
            onum = other.num
            den = {}
            for f, e in self.den.items():
                while e > 0:
                    q = onum.exact_div(f)
                    if q is None:
                        break
                    onum = q
                    e -= 1
                if e:
                    den[f] = e
            return RationalFunction(self.num * onum, den, reduce=False)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RationalFunction(self.num * other.num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        num = MPoly.const(NVARS, 1)
        for f, e in self.den.items():
            num = num * f ** e
        return RationalFunction.from_factors(1, [num], [self.num])

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalFunction.one()
        for _ in range(k):
            out = out * self
        return out

    # -- comparison -------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, (RationalFunction, MPoly, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        # Cross-multiplication avoids needing unique factorization.
        return (self.num * other.denominator - other.num * self.denominator).is_zero()

    def __hash__(self):
        # Hash on the fully reduced pair; equal-but-unreduced values are rare
        # enough here that collisions only cost an __eq__ call.
        return hash((self.num, frozenset(self.den.items())))

    # -- evaluation --------------------------------------------------------------------

    def eval(self, values: Sequence[Scalar]) -> Fraction:
        den = Fraction(1)
        for f, e in self.den.items():
            v = Fraction(f.eval(values))
            if v == 0:
                raise ZeroDivisionError("denominator vanishes at the given point")
            den *= v ** e
        return Fraction(self.num.eval(values)) / den

    def subs_poly(self, replacements: Mapping[int, MPoly]) -> "RationalFunction":
        """Substitute polynomials for variables; denominators must stay nonzero."""
        num = self.num.subs(replacements)
        den_factors = []
        for f, e in self.den.items():
            g = f.subs(replacements)
            if g.is_zero():
                raise ZeroDivisionError("denominator factor vanishes under substitution")
            den_factors.extend([g] * e)
        return RationalFunction.from_factors(1, [num], den_factors)

    # -- rendering -----------------------------------------------------------------------

    def render_pair(self):
        """(numerator, denominator) strings with integer coefficients."""
        num, nscale = self.num.content_normalized()
        den, dscale = self.denominator.content_normalized()
        ratio = Fraction(nscale) / Fraction(dscale)
        num = num * ratio.numerator
        den = den * ratio.denominator
        return num.render(VARNAMES), den.render(VARNAMES)

    def __str__(self):
        num, den = self.render_pair()
        if den == "1":
            return num
        return f"({num})/({den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def linear_form(c1: Scalar, c2: Scalar, c3: Scalar) -> MPoly:
    """The linear polynomial c1*s1 + c2*s2 + c3*s3."""
    return MPoly.linear((c1, c2, c3))


def euler_product(factors) -> RationalFunction:
    """prod(form**mult) over (linear form, signed multiplicity) pairs.

    Proportional forms are aggregated first so opposite multiplicities
    cancel before anything is expanded.
    """
    merged: dict = {}
    scalar = Fraction(1)
    for form, mult in factors:
        if mult == 0:
            continue
        canon, scale = form.content_normalized()
        scalar *= Fraction(scale) ** mult
        merged[canon] = merged.get(canon, 0) + mult
    num = []
    den = []
    for canon, mult in merged.items():
        if mult > 0:
            num.extend([canon] * mult)
        elif mult < 0:
            den.extend([canon] * (-mult))
    return RationalFunction.from_factors(scalar, num, den)
