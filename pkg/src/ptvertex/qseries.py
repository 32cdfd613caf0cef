"""Truncated Laurent series in q with exact rational-function coefficients.

Orders outside the window [min_order, max_order] are semantically unknown,
never assumed zero; arithmetic tracks the common valid window.
"""

from __future__ import annotations

from typing import Callable, Dict, Mapping

from .ratfunc import RationalFunction


class QSeries:
    __slots__ = ("min_order", "max_order", "coeffs")

    def __init__(self, min_order: int, max_order: int,
                 coeffs: Mapping[int, RationalFunction]):
        if max_order < min_order:
            raise ValueError("empty series window")
        self.min_order = min_order
        self.max_order = max_order
        self.coeffs: Dict[int, RationalFunction] = {
            n: c for n, c in coeffs.items()
            if min_order <= n <= max_order and not c.is_zero()
        }

    @staticmethod
    def zero(min_order: int, max_order: int) -> "QSeries":
        return QSeries(min_order, max_order, {})

    def coefficient(self, n: int) -> RationalFunction:
        if not self.min_order <= n <= self.max_order:
            raise KeyError(f"order {n} outside known window "
                           f"[{self.min_order}, {self.max_order}]")
        return self.coeffs.get(n, RationalFunction.zero())

    def known_orders(self):
        return range(self.min_order, self.max_order + 1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        lo = max(self.min_order, other.min_order)
        hi = min(self.max_order, other.max_order)
        out = {}
        for n in range(lo, hi + 1):
            out[n] = self.coefficient(n) + other.coefficient(n)
        return QSeries(lo, hi, out)

    def __neg__(self) -> "QSeries":
        return QSeries(self.min_order, self.max_order,
                       {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, factor) -> "QSeries":
        return QSeries(self.min_order, self.max_order,
                       {n: c * factor for n, c in self.coeffs.items()})

    def shift(self, k: int) -> "QSeries":
        """Multiply by q**k."""
        return QSeries(self.min_order + k, self.max_order + k,
                       {n + k: c for n, c in self.coeffs.items()})

    def __mul__(self, other: "QSeries") -> "QSeries":
        # The product is trustworthy only where every contributing pair of
        # orders is known on both sides.
        lo = self.min_order + other.min_order
        hi = min(self.max_order + other.min_order,
                 other.max_order + self.min_order)
        out: Dict[int, RationalFunction] = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                n = n1 + n2
                if lo <= n <= hi:
                    out[n] = out.get(n, RationalFunction.zero()) + c1 * c2
        return QSeries(lo, hi, out)

    def map_coefficients(self, fn: Callable[[RationalFunction], RationalFunction],
                         drop_window=None) -> "QSeries":
        lo, hi = drop_window or (self.min_order, self.max_order)
        return QSeries(lo, hi, {n: fn(c) for n, c in self.coeffs.items()
                                if lo <= n <= hi})

    def agrees_with(self, other: "QSeries") -> bool:
        """Exact equality on the intersection of the known windows."""
        lo = max(self.min_order, other.min_order)
        hi = min(self.max_order, other.max_order)
        return all(self.coefficient(n) == other.coefficient(n)
                   for n in range(lo, hi + 1))

    # -- emission -----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        orders = []
        for n in sorted(self.coeffs):
            num, den = self.coeffs[n].render_pair()
            orders.append({"n": n, "coeff": {"num": num, "den": den}})
        return {"var": "q", "min_order": self.min_order,
                "max_order": self.max_order, "orders": orders}

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for n in sorted(self.coeffs):
            c = str(self.coeffs[n])
            qpow = "1" if n == 0 else ("q" if n == 1 else f"q^{n}")
            if c == "1":
                terms.append(qpow)
            else:
                terms.append(f"({c})*{qpow}" if n != 0 else c)
        return " + ".join(terms)

    def __repr__(self):
        return f"QSeries[{self.min_order}..{self.max_order}]({self.render()})"
