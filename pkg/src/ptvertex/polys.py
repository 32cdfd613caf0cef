"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a dictionary mapping integer exponent tuples to exact
coefficients.  Coefficients are Python ``int`` where possible and
``fractions.Fraction`` otherwise; arithmetic never leaves exact rationals.
The zero polynomial has an empty term dict.

Monomials are ordered by graded lexicographic order with earlier variables
stronger (s1 > s2 > s3), which fixes canonical printing and exact division.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Scalar = Union[int, Fraction]
Exponent = tuple  # tuple[int, ...], one entry per variable


def norm_scalar(c: Scalar) -> Scalar:
    """Collapse integral fractions to int; leave everything else alone."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def grlex_key(exp: Exponent):
    """Sort key for graded lex order (total degree first, then lex)."""
    return (sum(exp), exp)


class MPoly:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, Scalar]):
        clean = {}
        for exp, c in terms.items():
            c = norm_scalar(c)
            if c != 0:
                clean[exp] = c
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars, {})

    @staticmethod
    def const(nvars: int, c: Scalar) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, idx: int) -> "MPoly":
        exp = [0] * nvars
        exp[idx] = 1
        return MPoly(nvars, {tuple(exp): 1})

    @staticmethod
    def linear(coeffs: Sequence[Scalar], constant: Scalar = 0) -> "MPoly":
        """Linear form sum(coeffs[i] * x_i) + constant."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c != 0:
                exp = [0] * n
                exp[i] = 1
                terms[tuple(exp)] = c
        if constant != 0:
            terms[(0,) * n] = constant
        return MPoly(n, terms)

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Scalar:
        """Value of a constant polynomial (the empty poly is 0)."""
        if not self.terms:
            return 0
        (exp, c), = self.terms.items()
        if any(e != 0 for e in exp):
            raise ValueError("polynomial is not constant")
        return c

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, idx: int) -> int:
        if not self.terms:
            return 0
        return max(exp[idx] for exp in self.terms)

    def min_degree_in(self, idx: int) -> int:
        if not self.terms:
            return 0
        return min(exp[idx] for exp in self.terms)

    def leading_term(self):
        """(exponent, coefficient) of the grlex-largest monomial."""
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def coefficient(self, exp: Exponent) -> Scalar:
        return self.terms.get(tuple(exp), 0)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MPoly.zero(self.nvars)
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.nvars, other)

    # -- division ------------------------------------------------------------

    def exact_div(self, divisor: "MPoly") -> Optional["MPoly"]:
        """Quotient self/divisor if the division is exact, else None.

        Each reduction step cancels the current grlex-leading remainder term
        and only introduces strictly smaller monomials, so a max-heap of
        candidate leading exponents visits every term once.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        if divisor.total_degree() > self.total_degree():
            return None
        import heapq
        lt_exp, lt_c = divisor.leading_term()
        tail = [(dexp, dc) for dexp, dc in divisor.terms.items() if dexp != lt_exp]
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        while heap:
            negdeg, negexp = heapq.heappop(heap)
            exp = tuple(-x for x in negexp)
            c = rem.get(exp, 0)
            if c == 0:
                continue
            if any(a < b for a, b in zip(exp, lt_exp)):
                return None
            del rem[exp]
            qexp = tuple(a - b for a, b in zip(exp, lt_exp))
            qc = norm_scalar(Fraction(c, lt_c) if isinstance(c, int)
                             and isinstance(lt_c, int) else c / lt_c)
            quot[qexp] = qc
            for dexp, dc in tail:
                sexp = tuple(a + b for a, b in zip(qexp, dexp))
                old = rem.get(sexp, 0)
                nc = old - qc * dc
                if nc == 0:
                    rem.pop(sexp, None)
                else:
                    if sexp not in rem:
                        heapq.heappush(heap, (-sum(sexp), tuple(-x for x in sexp)))
                    rem[sexp] = nc
        return MPoly(self.nvars, quot) if not rem else None

    # -- substitution and evaluation ------------------------------------------

    def eval(self, values: Sequence[Scalar]) -> Scalar:
        """Evaluate at rational values, one per variable."""
        total: Scalar = 0
        for exp, c in self.terms.items():
            term = c
            for e, v in zip(exp, values):
                if e:
                    term *= v ** e
            total += term
        return norm_scalar(Fraction(total)) if isinstance(total, Fraction) else total

    def subs(self, replacements: Mapping[int, "MPoly"]) -> "MPoly":
        """Substitute polynomials for selected variables."""
        powers = {i: [MPoly.const(self.nvars, 1)] for i in replacements}
        out = MPoly.zero(self.nvars)
        for exp, c in self.terms.items():
            term = MPoly.const(self.nvars, c)
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                if i in replacements:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * replacements[i])
                    term = term * cache[e]
                else:
                    term = term * MPoly(self.nvars, {self._unit(i, e): 1})
            out = out + term
        return out

    def _unit(self, idx: int, e: int) -> Exponent:
        exp = [0] * self.nvars
        exp[idx] = e
        return tuple(exp)

    def shift_var_out(self, idx: int, amount: int) -> "MPoly":
        """Divide by x_idx**amount (all exponents must allow it)."""
        out = {}
        for exp, c in self.terms.items():
            assert exp[idx] >= amount
            new = list(exp)
            new[idx] -= amount
            out[tuple(new)] = c
        return MPoly(self.nvars, out)

    # -- canonical content normalization --------------------------------------

    def content_normalized(self):
        """Split self = scalar * primitive with integer coefficients.

        The primitive part has integer coefficients of content 1 and positive
        leading (grlex) coefficient.  Returns (primitive, scalar); the zero
        polynomial returns (0, 1).
        """
        if self.is_zero():
            return self, Fraction(1)
        from math import gcd
        den_lcm = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        num_gcd = 0
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, int(c * den_lcm))
        _, lead = self.leading_term()
        sign = -1 if lead < 0 else 1
        scale = Fraction(sign * num_gcd, den_lcm)
        prim = MPoly(self.nvars, {e: norm_scalar(c / scale) for e, c in self.terms.items()})
        return prim, scale

    # -- hashing / comparison / rendering --------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        return isinstance(other, MPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash",
                               hash(frozenset((e, Fraction(c)) for e, c in self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in descending grlex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def render(self, varnames: Sequence[str]) -> str:
        """Canonical text form, e.g. ``2*s1^2*s2 - s1*s3 + 1``."""
        if self.is_zero():
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(varnames, exp) if e != 0
            )
            frac = Fraction(c)
            mag = abs(frac)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if frac < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MPoly({self.render([f'x{i}' for i in range(self.nvars)])})"


def mpoly_from_pairs(nvars: int, pairs: Iterable) -> MPoly:
    """Build from (exponent-tuple, coefficient) pairs, summing duplicates."""
    terms: dict = {}
    for exp, c in pairs:
        exp = tuple(exp)
        terms[exp] = terms.get(exp, 0) + c
    return MPoly(nvars, terms)
