"""Parsing of the canonical text formats emitted by the package.

The canonical polynomial format has integer decimal coefficients and
monomials in fixed variable order (``2*s1^2*s2 - s1*s3 + 1``); series and
rational-form JSON wrap coefficient strings in {"num": ..., "den": ...}.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict

from .polys import MPoly
from .qseries import QSeries
from .ratfunc import NVARS, VARNAMES, RationalFunction

_TERM_RE = re.compile(
    r"^(?P<coeff>\d+)?(?P<stars>\*?)(?P<monos>(?:s[123](?:\^\d+)?)(?:\*s[123](?:\^\d+)?)*)?$")


def parse_poly(text: str) -> MPoly:
    """Inverse of MPoly.render for the three weight variables."""
    text = text.strip()
    if text in ("0", "-0", ""):
        return MPoly.zero(NVARS)
    text = text.replace("- ", "-").replace("+ ", "+")
    pieces = text.split()
    terms: Dict[tuple, int] = {}
    for piece in pieces:
        sign = 1
        if piece.startswith("+"):
            piece = piece[1:]
        elif piece.startswith("-"):
            sign = -1
            piece = piece[1:]
        m = _TERM_RE.match(piece)
        if not m or (m.group("coeff") is None and not m.group("monos")):
            raise ValueError(f"cannot parse polynomial term {piece!r}")
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        exp = [0, 0, 0]
        if m.group("monos"):
            for factor in m.group("monos").split("*"):
                if "^" in factor:
                    var, power = factor.split("^")
                    exp[VARNAMES.index(var)] += int(power)
                else:
                    exp[VARNAMES.index(factor)] += 1
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + sign * coeff
    return MPoly(NVARS, terms)


def parse_coeff(data: dict) -> RationalFunction:
    num = parse_poly(data["num"])
    den = parse_poly(data["den"])
    if den == MPoly.const(NVARS, 1):
        return RationalFunction(num)
    return RationalFunction.from_factors(1, [num], [den])


def coeff_json(rf: RationalFunction) -> dict:
    num, den = rf.render_pair()
    return {"num": num, "den": den}


def qseries_from_json(data: dict) -> QSeries:
    if data.get("var", "q") != "q":
        raise ValueError("expected a series in q")
    coeffs = {entry["n"]: parse_coeff(entry["coeff"]) for entry in data["orders"]}
    lo = data.get("min_order", min(coeffs, default=0))
    hi = data.get("max_order", max(coeffs, default=0))
    return QSeries(lo, hi, coeffs)


def rationalq_from_json(data: dict):
    from .tqft import RationalQ
    num = {entry["n"]: parse_coeff(entry["coeff"]) for entry in data["num"]}
    cyclo = {int(r): int(m) for r, m in data.get("cyclo", {}).items()}
    return RationalQ.make(num, int(data.get("q_pow", 0)), cyclo)


def gluing_block_to_json(block) -> dict:
    entries = []
    for key in sorted(block.entries):
        entries.append({
            "boundary": [list(eta) for eta in key],
            "series": block.entries[key].to_json_dict(),
        })
    return {"d": block.d, "slots": block.slots, "entries": entries}


def gluing_block_from_json(data: dict):
    from .tqft import GluingBlock
    entries = {}
    for entry in data["entries"]:
        key = tuple(tuple(int(p) for p in eta) for eta in entry["boundary"])
        entries[key] = qseries_from_json(entry["series"])
    return GluingBlock(int(data["d"]), int(data["slots"]), entries)
