"""Permutation model of the cancellation classes at s3 = (s1+s2)/a.

Fixed loci sharing a profile are parametrized by admissible diagonal
permutations; the evaluation of a class sum at u3 = 0 reduces to alternating
permutation sums of a low-degree polynomial psi that matches the pole factor
phi on admissible permutations and vanishes on inadmissible ones.  psi is
built from phi's factor families by polynomial division on permutation point
sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import partitions as pt
from .boxconfig import BoxConfig, FProfile, depths_valid
from .errors import DivisionByZero, HypothesisFailed
from .partitions import Partition
from .polys import MPoly


# -- diagonal permutations --------------------------------------------------------


@dataclass(frozen=True)
class DiagonalPermutation:
    """One permutation of mu_delta per nonempty diagonal.

    images[k] holds sigma_delta(js[k]) where js is mu_delta in increasing
    order; each entry is itself a tuple aligned with the sorted diagonals.
    """

    mu: Partition
    images: Tuple[Tuple[int, ...], ...]

    def _diagonals(self) -> List[Tuple[int, List[int]]]:
        return sorted(pt.diagonals(self.mu).items())

    def apply(self, delta: int, j: int) -> int:
        for (d, js), imgs in zip(self._diagonals(), self.images):
            if d == delta:
                return imgs[js.index(j)]
        raise KeyError(delta)

    def invert(self, delta: int, j: int) -> int:
        for (d, js), imgs in zip(self._diagonals(), self.images):
            if d == delta:
                return js[imgs.index(j)]
        raise KeyError(delta)

    def sign(self) -> int:
        total = 1
        for (_, js), imgs in zip(self._diagonals(), self.images):
            perm = [js.index(v) for v in imgs]
            total *= _perm_sign(perm)
        return total

    def is_identity(self) -> bool:
        return all(tuple(js) == imgs
                   for (_, js), imgs in zip(self._diagonals(), self.images))


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycle = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


def enumerate_sym(mu: Partition) -> List[DiagonalPermutation]:
    """All elements of the product of diagonal symmetric groups."""
    diag = sorted(pt.diagonals(mu).items())
    pools = [list(itertools.permutations(js)) for _, js in diag]
    return [DiagonalPermutation(tuple(mu), tuple(choice))
            for choice in itertools.product(*pools)]


def identity_sym(mu: Partition) -> DiagonalPermutation:
    diag = sorted(pt.diagonals(mu).items())
    return DiagonalPermutation(tuple(mu), tuple(tuple(js) for _, js in diag))


def sym0_size(f: FProfile) -> int:
    """Order of the stabilizer permuting equal profile exponents."""
    from math import factorial
    out = 1
    for _, vals in f.exponents:
        run = 1
        for k in range(1, len(vals)):
            if vals[k] == vals[k - 1]:
                run += 1
            else:
                out *= factorial(run)
                run = 1
        out *= factorial(run)
    return out


# -- admissibility ------------------------------------------------------------------


def _profile_es(f: FProfile) -> Dict[int, Dict[int, Fraction]]:
    """e_delta(j) keyed by diagonal and cell index j."""
    diag = pt.diagonals(f.mu)
    out: Dict[int, Dict[int, Fraction]] = {}
    for delta, vals in f.exponents:
        js = diag[delta]
        if len(js) != len(vals):
            raise ValueError("profile shape does not match the partition")
        out[delta] = dict(zip(js, vals))
    return out


def admissible_h(sigma: DiagonalPermutation, f: FProfile) -> Optional[BoxConfig]:
    """The configuration with h(delta; j) = a (j - e_delta(sigma^(-1) j)), if valid."""
    es = _profile_es(f)
    a = f.a
    h: Dict[Tuple[int, int], int] = {}
    for delta, ej in es.items():
        for j in ej:
            val = a * (Fraction(j) - ej[sigma.invert(delta, j)])
            if val.denominator != 1 or val < 0:
                return None
            h[(delta + j, j)] = int(val)
    if not depths_valid(f.mu, h):
        return None
    return BoxConfig.from_map(f.mu, h)


def admissible_bullets(sigma: DiagonalPermutation, f: FProfile) -> bool:
    """The three-condition form of admissibility (tested against admissible_h)."""
    es = _profile_es(f)
    if 0 in es:
        for j, e in es[0].items():
            if e > 0 and sigma.apply(0, j) == 0:
                return False
    deltas = sorted(es)
    for delta in deltas:
        if delta + 1 not in es:
            continue
        for j1, e1 in es[delta + 1].items():
            for j2, e2 in es[delta].items():
                if e1 > e2 and sigma.apply(delta + 1, j1) == sigma.apply(delta, j2):
                    return False
        for j1, e1 in es[delta].items():
            for j2, e2 in es[delta + 1].items():
                if e1 > e2 + 1 and sigma.apply(delta, j1) == sigma.apply(delta + 1, j2) + 1:
                    return False
    return True


# -- sigma polynomials ----------------------------------------------------------------


@dataclass(frozen=True)
class SigmaVars:
    """Variable order (delta, j) for polynomials in the values sigma_delta(j)."""

    mu: Partition
    order: Tuple[Tuple[int, int], ...]

    @staticmethod
    def for_partition(mu: Partition) -> "SigmaVars":
        cells = []
        for delta, js in sorted(pt.diagonals(mu).items()):
            cells.extend((delta, j) for j in js)
        return SigmaVars(tuple(mu), tuple(cells))

    def index(self, delta: int, j: int) -> int:
        return self.order.index((delta, j))

    @property
    def nvars(self) -> int:
        return len(self.order)

    def values_of(self, sigma: DiagonalPermutation) -> List[int]:
        return [sigma.apply(delta, j) for delta, j in self.order]


@dataclass(frozen=True)
class SigmaPoly:
    """Polynomial in the permutation values, with its variable order attached."""

    vars: SigmaVars
    poly: MPoly

    def eval_at(self, sigma: DiagonalPermutation):
        return self.poly.eval(self.vars.values_of(sigma))

    def degree(self) -> int:
        return self.poly.total_degree()

    def __mul__(self, other: "SigmaPoly") -> "SigmaPoly":
        assert self.vars == other.vars
        return SigmaPoly(self.vars, self.poly * other.poly)

    def __add__(self, other: "SigmaPoly") -> "SigmaPoly":
        assert self.vars == other.vars
        return SigmaPoly(self.vars, self.poly + other.poly)


def sigma_variable(sv: SigmaVars, delta: int, j: int) -> SigmaPoly:
    return SigmaPoly(sv, MPoly.variable(sv.nvars, sv.index(delta, j)))


def sigma_constant(sv: SigmaVars, c) -> SigmaPoly:
    return SigmaPoly(sv, MPoly.const(sv.nvars, c))


# -- the pole factor phi -----------------------------------------------------------------


def _phi_factor_lists(f: FProfile):
    """Numerator/denominator factor families of phi.

    Factors are ('var', cell), ('negvar1', cell), ('diff', cell1, cell2,
    shift) standing for sigma(cell1) - sigma(cell2) - shift, or
    ('const', value).
    """
    es = _profile_es(f)
    deltas = sorted(es)
    num: list = []
    den: list = []
    if 0 in es:
        for j, e in es[0].items():
            if e > 0:
                num.append(("var", (0, j)))
            if e < -1:
                num.append(("negvar1", (0, j)))
        for j in es[0]:
            if j > 0:
                den.append(("const", j))
    for delta in deltas:
        js = sorted(es[delta])
        for j1 in js:
            for j2 in js:
                if es[delta][j1] > es[delta][j2]:
                    den.append(("diff", (delta, j1), (delta, j2), 0))
                if j1 > j2:
                    num.append(("const", j1 - j2))
                if es[delta][j1] > es[delta][j2] + 1:
                    den.append(("diff", (delta, j1), (delta, j2), 1))
                if j1 > j2 + 1:
                    num.append(("const", j1 - j2 - 1))
        if delta + 1 not in es:
            continue
        for j1 in sorted(es[delta + 1]):
            for j2 in js:
                if es[delta + 1][j1] > es[delta][j2]:
                    num.append(("diff", (delta + 1, j1), (delta, j2), 0))
                if j1 > j2:
                    den.append(("const", j1 - j2))
        for j1 in js:
            for j2 in sorted(es[delta + 1]):
                if es[delta][j1] > es[delta + 1][j2] + 1:
                    num.append(("diff", (delta, j1), (delta + 1, j2), 1))
                if j1 > j2 + 1:
                    den.append(("const", j1 - j2 - 1))
    return num, den


def _factor_value(factor, sigma: DiagonalPermutation) -> Fraction:
    kind = factor[0]
    if kind == "const":
        return Fraction(factor[1])
    if kind == "var":
        return Fraction(sigma.apply(*factor[1]))
    if kind == "negvar1":
        return Fraction(-sigma.apply(*factor[1]) - 1)
    (d1, j1), (d2, j2), shift = factor[1], factor[2], factor[3]
    return Fraction(sigma.apply(d1, j1) - sigma.apply(d2, j2) - shift)


def _factor_poly(factor, sv: SigmaVars) -> MPoly:
    kind = factor[0]
    n = sv.nvars
    if kind == "const":
        return MPoly.const(n, factor[1])
    if kind == "var":
        return MPoly.variable(n, sv.index(*factor[1]))
    if kind == "negvar1":
        return -MPoly.variable(n, sv.index(*factor[1])) - MPoly.const(n, 1)
    (d1, j1), (d2, j2), shift = factor[1], factor[2], factor[3]
    out = MPoly.variable(n, sv.index(d1, j1)) - MPoly.variable(n, sv.index(d2, j2))
    if shift:
        out = out - MPoly.const(n, shift)
    return out


def phi(sigma: DiagonalPermutation, f: FProfile) -> Fraction:
    """Evaluate the pole factor at a permutation."""
    num, den = _phi_factor_lists(f)
    top = Fraction(1)
    for factor in num:
        top *= _factor_value(factor, sigma)
    bottom = Fraction(1)
    for factor in den:
        v = _factor_value(factor, sigma)
        if v == 0:
            raise DivisionByZero(f"phi denominator factor {factor} vanishes at sigma")
        bottom *= v
    return top / bottom


def phi_fraction(f: FProfile) -> Tuple[SigmaPoly, SigmaPoly]:
    """phi as an expanded numerator/denominator pair of sigma polynomials."""
    sv = SigmaVars.for_partition(f.mu)
    num, den = _phi_factor_lists(f)
    top = MPoly.const(sv.nvars, 1)
    for factor in num:
        top = top * _factor_poly(factor, sv)
    bottom = MPoly.const(sv.nvars, 1)
    for factor in den:
        bottom = bottom * _factor_poly(factor, sv)
    return SigmaPoly(sv, top), SigmaPoly(sv, bottom)


def phi_degree(f: FProfile) -> int:
    num, den = _phi_factor_lists(f)
    deg = lambda fac: 1 if fac[0] in ("var", "negvar1", "diff") else 0
    return sum(deg(x) for x in num) - sum(deg(x) for x in den)


def kappa0(f: FProfile) -> int:
    """Maximal pole order of a class weight along u3 = 0 (may be negative)."""
    return -phi_degree(f)


def kappa0_from_config(config: BoxConfig, a: int) -> int:
    """Cross-check path: sum of pure-v3 coefficients of the vertex character."""
    from .vertexcore import vertex_character
    v = vertex_character(config).to_v_coordinates(a)
    total = 0
    for (x, y, z), c in v.num.items():
        if x == 0 and y == 0:
            if z == 0:
                raise ValueError("vertex character contains a constant monomial")
            total += c
    return total


# -- division on permutation point sets -----------------------------------------------


def _permutation_points(n: int, m: int):
    for xs in itertools.permutations(range(1, n + 1)):
        for ys in itertools.permutations(range(1, m + 1)):
            yield xs + ys


def _staircase_exponents(n: int, m: int, max_degree: int):
    """Exponents a with a_i <= n-i (x block), b_j <= m-j (y block), |a|+|b| <= D.

    These span the functions on the permutation point set degree by degree,
    so restricting interpolation to them loses nothing.
    """
    ranges = [range(min(n - i, max_degree) + 1) for i in range(1, n + 1)]
    ranges += [range(min(m - j, max_degree) + 1) for j in range(1, m + 1)]
    for exp in itertools.product(*ranges):
        if sum(exp) <= max_degree:
            yield exp


def _solve_exact(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """One exact solution of a (possibly over/under-determined) linear system."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(aug)) if aug[k][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = Fraction(1) / Fraction(aug[r][c])
        aug[r] = [v * inv for v in aug[r]]
        for k in range(len(aug)):
            if k != r and aug[k][c] != 0:
                factor = aug[k][c]
                aug[k] = [v - factor * w for v, w in zip(aug[k], aug[r])]
        pivots.append(c)
        r += 1
        if r == len(aug):
            break
    for k in range(r, len(aug)):
        if aug[k][ncols] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for row, c in enumerate(pivots):
        solution[c] = Fraction(aug[row][ncols])
    return solution


def division_form(a_seq: Sequence[int], nvars: int) -> MPoly:
    """The product of (x_j - x_i + 1) over 1 <= j <= a_i."""
    out = MPoly.const(nvars, 1)
    for i, ai in enumerate(a_seq, start=1):
        for j in range(1, ai + 1):
            out = out * (MPoly.variable(nvars, j - 1)
                         - MPoly.variable(nvars, i - 1)
                         + MPoly.const(nvars, 1))
    return out


def check_division_spec(a_seq: Sequence[int]):
    for i, ai in enumerate(a_seq, start=1):
        if not 0 <= ai < i:
            raise ValueError(f"need 0 <= a_i < i, got a_{i} = {ai}")
    if any(a_seq[k] > a_seq[k + 1] for k in range(len(a_seq) - 1)):
        raise ValueError("a-sequence must be weakly increasing")


def poly_division_on_points(a_seq: Sequence[int], G: MPoly, m: int) -> MPoly:
    """Divide G by the staircase form F on the permutation point set.

    Points are permutations of (1..n) in the x block times permutations of
    (1..m) in the y block.  If G vanishes wherever F does, returns H with
    G = F H on every point and deg(H) <= deg(G) - deg(F); otherwise raises
    HypothesisFailed.
    """
    check_division_spec(a_seq)
    n = len(a_seq)
    if G.nvars != n + m:
        raise ValueError(f"G must have {n + m} variables")
    F = division_form(a_seq, n + m)
    targets = []
    for p in _permutation_points(n, m):
        fv = Fraction(F.eval(p))
        gv = Fraction(G.eval(p))
        if fv == 0:
            if gv != 0:
                raise HypothesisFailed(
                    f"G does not vanish at {p} although F does")
        else:
            targets.append((p, gv / fv))
    if all(v == 0 for _, v in targets):
        return MPoly.zero(n + m)
    max_degree = G.total_degree() - F.total_degree()
    if max_degree < 0:
        raise HypothesisFailed("deg(G) < deg(F) with nonzero quotient values")
    monomials = list(_staircase_exponents(n, m, max_degree))
    rows = []
    rhs = []
    for p, v in targets:
        rows.append([Fraction(1) * _eval_monomial(exp, p) for exp in monomials])
        rhs.append(v)
    solution = _solve_exact(rows, rhs)
    if solution is None:
        raise HypothesisFailed("degree-bounded reconstruction is infeasible; "
                               "this would falsify the division property")
    return MPoly(n + m, {exp: c for exp, c in zip(monomials, solution) if c != 0})


def _eval_monomial(exp, point) -> Fraction:
    out = 1
    for e, v in zip(exp, point):
        if e:
            out *= v ** e
    return Fraction(out)


# -- psi ------------------------------------------------------------------------------


def _equal_pairs_poly(f: FProfile, sv: SigmaVars) -> MPoly:
    """prod over equal-exponent pairs j1 > j2 of (sigma(j1) - sigma(j2))."""
    es = _profile_es(f)
    out = MPoly.const(sv.nvars, 1)
    for delta, ej in es.items():
        js = sorted(ej)
        for k1, j1 in enumerate(js):
            for j2 in js[:k1]:
                if ej[j1] == ej[j2]:
                    out = out * (MPoly.variable(sv.nvars, sv.index(delta, j1))
                                 - MPoly.variable(sv.nvars, sv.index(delta, j2)))
    return out


def _r_delta_factors(f: FProfile, delta: int):
    """Factor list of R_delta (mixed products between diagonals delta, delta+1)."""
    es = _profile_es(f)
    out = []
    for j1 in sorted(es[delta + 1]):
        for j2 in sorted(es[delta]):
            if es[delta + 1][j1] > es[delta][j2]:
                out.append((("diff", (delta + 1, j1), (delta, j2), 0)))
    for j1 in sorted(es[delta]):
        for j2 in sorted(es[delta + 1]):
            if es[delta][j1] > es[delta + 1][j2] + 1:
                out.append((("diff", (delta, j1), (delta + 1, j2), 1)))
    return out


def _s_delta_pairs(f: FProfile, delta: int):
    """(j1, j2) pairs of the intra-diagonal obstruction factors of S_delta."""
    es = _profile_es(f)
    js = sorted(es[delta])
    return [(j1, j2) for j1 in js for j2 in js
            if es[delta][j1] > es[delta][j2] + 1]


def _t_delta(f: FProfile, delta: int, sv: SigmaVars) -> MPoly:
    """R_delta / S_delta as a polynomial via division on points.

    Variables are reindexed per diagonal with the opposite ordering
    x_i = sigma(B - i + 1) - A + 1, which puts S_delta in staircase form up
    to a sign.
    """
    diag = pt.diagonals(f.mu)
    xs = diag[delta]
    ys = diag[delta + 1]
    n, m = len(xs), len(ys)
    A, B = xs[0], xs[-1]
    A2, B2 = ys[0], ys[-1]

    def x_of(j: int) -> int:
        return B - j + 1  # index of the x variable carrying sigma_delta(j)

    def y_of(j: int) -> int:
        return B2 - j + 1

    small = n + m

    def small_var_for(cell):
        d, j = cell
        if d == delta:
            return MPoly.variable(small, x_of(j) - 1) + MPoly.const(small, A - 1)
        return MPoly.variable(small, n + y_of(j) - 1) + MPoly.const(small, A2 - 1)

    # a-sequence of the staircase form matching S_delta
    pairs = _s_delta_pairs(f, delta)
    a_seq = []
    for i in range(1, n + 1):
        j1 = B - i + 1
        count = sum(1 for (p1, p2) in pairs if p1 == j1)
        a_seq.append(count)
    sign = (-1) ** len(pairs)

    g = MPoly.const(small, 1)
    for factor in _r_delta_factors(f, delta):
        _, c1, c2, shift = factor
        g = g * (small_var_for(c1) - small_var_for(c2) - MPoly.const(small, shift))
    h = poly_division_on_points(a_seq, g, m)

    # back to the shared sigma variables
    replacements = {}
    for i in range(1, n + 1):
        j = B - i + 1
        replacements[i - 1] = (MPoly.variable(sv.nvars, sv.index(delta, j))
                               - MPoly.const(sv.nvars, A - 1))
    for i in range(1, m + 1):
        j = B2 - i + 1
        replacements[n + i - 1] = (MPoly.variable(sv.nvars, sv.index(delta + 1, j))
                                   - MPoly.const(sv.nvars, A2 - 1))
    lifted = MPoly.zero(sv.nvars)
    for exp, c in h.terms.items():
        term = MPoly.const(sv.nvars, c)
        for idx, e in enumerate(exp):
            for _ in range(e):
                term = term * replacements[idx]
        lifted = lifted + term
    return lifted * sign


def psi_construct(f: FProfile) -> SigmaPoly:
    """The polynomial matching sgn * phi on admissible permutations.

    psi = X P Q R_min prod T_delta, where X collects the constant factors,
    the sign from cancelling intra-diagonal differences, and the
    equal-exponent products; it vanishes at every inadmissible permutation.
    """
    sv = SigmaVars.for_partition(f.mu)
    es = _profile_es(f)
    deltas = sorted(es)

    # constant factors and the cancellation sign, evaluated at the identity
    num, den = _phi_factor_lists(f)
    const_num = Fraction(1)
    for factor in num:
        if factor[0] == "const":
            const_num *= factor[1]
    const_den = Fraction(1)
    intra_den_id = Fraction(1)
    ident = identity_sym(f.mu)
    for factor in den:
        if factor[0] == "const":
            const_den *= factor[1]
        elif factor[2][0] == factor[1][0] and factor[3] == 0:
            intra_den_id *= _factor_value(factor, ident)
    equal_poly = _equal_pairs_poly(f, sv)
    intra_num_id = Fraction(1)
    for delta, ej in es.items():
        js = sorted(ej)
        for k1, j1 in enumerate(js):
            for j2 in js[:k1]:
                intra_num_id *= j1 - j2
    equal_id = Fraction(equal_poly.eval(sv.values_of(ident)))
    sign = (intra_num_id / intra_den_id) / equal_id
    if sign not in (1, -1):
        raise HypothesisFailed(f"intra-diagonal cancellation sign is {sign}, not +-1")
    # remaining constants: numerator j1-j2-1 family over denominator families
    shifted_num_id = const_num / intra_num_id  # leaves the (j1 - j2 - 1) products
    scalar = sign * shifted_num_id / const_den

    out = equal_poly * scalar
    if 0 in es:
        for j, e in es[0].items():
            if e < -1:
                out = out * (-MPoly.variable(sv.nvars, sv.index(0, j))
                             - MPoly.const(sv.nvars, 1))
            if e > 0:
                out = out * MPoly.variable(sv.nvars, sv.index(0, j))
    for delta in deltas[:-1]:
        if delta == deltas[0]:
            g = MPoly.const(sv.nvars, 1)
            for factor in _r_delta_factors(f, delta):
                g = g * _factor_poly(factor, sv)
            out = out * g
        else:
            out = out * _t_delta(f, delta, sv)
    return SigmaPoly(sv, out)


def psi_degree_bound(f: FProfile) -> int:
    """-kappa0 + sum over diagonals of |mu_delta| choose 2."""
    diag = pt.diagonals(f.mu)
    return -kappa0(f) + sum(len(js) * (len(js) - 1) // 2 for js in diag.values())


def vanishing_sum_check(f: FProfile, Z: SigmaPoly) -> bool:
    """Whether sum over Sym of sgn * psi * Z vanishes exactly."""
    psi = psi_construct(f)
    total = Fraction(0)
    for sigma in enumerate_sym(f.mu):
        total += sigma.sign() * Fraction(psi.eval_at(sigma)) * Fraction(Z.eval_at(sigma))
    return total == 0


# -- case classification -----------------------------------------------------------------


@dataclass(frozen=True)
class CaseLabel:
    label: str                    # I, II, III(i), III(ii), IV, contributing
    detail: str = ""
    bounds: Tuple = ()            # (J, {delta: lower bound}) for contributing

    def __str__(self):
        return self.label


def classify_f(f: FProfile) -> CaseLabel:
    """First matching degeneration case, or a bound certificate.

    Cases I and III(i) have empty classes; II, III(ii), and IV admit a
    degree-reduced psi so their evaluations vanish; the remaining profiles
    are the finitely many possibly-contributing ones.
    """
    es = _profile_es(f)
    deltas = sorted(es)
    J = max(max(ej) for ej in es.values())
    for delta in deltas:
        for j, e in es[delta].items():
            if e > J:
                return CaseLabel("I", f"e_{delta}({j}) = {e} > {J}")
    if 0 in es:
        js = sorted(es[0])
        for idx, i in enumerate(js):
            e = es[0][i]
            if e < -1 and (idx == 0 or e < es[0][js[idx - 1]] - 1):
                return CaseLabel("II", f"e_0({i}) = {e}")
    for delta in deltas:
        if delta < 0 or delta + 1 not in es:
            continue
        m_lo = max(es[delta])
        m_hi = max(es[delta + 1])
        if es[delta + 1][m_hi] + 1 < es[delta][m_lo]:
            if m_hi == m_lo - 1:
                return CaseLabel("III(i)", f"delta = {delta}")
            return CaseLabel("III(ii)", f"delta = {delta}")
    for delta in deltas:
        if delta >= 0 or delta + 1 not in es:
            continue
        m_lo = max(es[delta])
        m_hi = max(es[delta + 1])
        if es[delta][m_lo] < es[delta + 1][m_hi]:
            return CaseLabel("IV", f"delta = {delta}")
    m0 = max(es[0]) if 0 in es else 0
    lower = {delta: Fraction(-m0 - 1 - max(delta, 0)) for delta in deltas}
    for delta in deltas:
        m_d = max(es[delta])
        if not (es[delta][m_d] >= lower[delta] and
                all(e <= J for e in es[delta].values())):
            raise AssertionError("contributing profile violates its certificate")
    return CaseLabel("contributing", bounds=(Fraction(J), tuple(sorted(lower.items()))))


def count_nonvanishing_permutations(a_seq: Sequence[int]):
    """Count permutations where the staircase form survives.

    Returns (product formula, brute-force count or None); the two must agree
    for n <= 8 where the brute force runs.
    """
    check_division_spec(a_seq)
    n = len(a_seq)
    formula = 1
    for i, ai in enumerate(a_seq, start=1):
        formula *= i - ai
    brute = None
    if n <= 8:
        brute = 0
        for perm in itertools.permutations(range(1, n + 1)):
            ok = True
            for i in range(1, n + 1):
                for j in range(1, a_seq[i - 1] + 1):
                    if perm[i - 1] - 1 == perm[j - 1]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                brute += 1
        if brute != formula:
            raise AssertionError(
                f"count formula {formula} disagrees with brute force {brute}")
    return formula, brute
