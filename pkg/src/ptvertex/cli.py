"""Batch front-end: argument parsing, dispatch, deterministic emission.

Exit codes: 0 success, 1 usage error, 2 falsified invariant (a pole
survived, a calibration or rank check failed), 3 no fit / underdetermined.
A JSON config file may supply any flag; explicit flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import cancellation as cx
from . import hilbert as hb
from . import partitions as pt
from . import tqft
from . import vertexcore as vc
from .boxconfig import enumerate_box_configs, f_profile, validate_config_oracle
from .errors import (CalibrationFailed, HypothesisFailed, NoFit, NotPolynomial,
                     PoleSurvived, RankDeficient, Underdetermined)
from .ratfunc import RationalFunction, S1, S2
from .textio import (coeff_json, gluing_block_from_json, gluing_block_to_json,
                     qseries_from_json, rationalq_from_json)

USAGE_EXIT = 1
INVARIANT_EXIT = 2
NOFIT_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _parts(text: str):
    if not text:
        return ()
    return tuple(int(x) for x in text.split(","))


def _build_parser() -> _Parser:
    parser = _Parser(prog="ptvertex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file supplying default flags")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        return p

    p = add("vertex", "descendent vertex series, optionally specialized")
    p.add_argument("--mu", required=True, help="partition, comma parts")
    p.add_argument("--ins", default="", help="insertion indices, comma list")
    p.add_argument("--a", type=int, default=0, help="specialize at s3=(s1+s2)/a")
    p.add_argument("--qmax", type=int, required=True)

    p = add("configs", "enumerate box configurations")
    p.add_argument("--mu", required=True)
    p.add_argument("--ell", type=int, required=True)

    p = add("cancel-check", "per-profile cancellation report")
    p.add_argument("--mu", required=True)
    p.add_argument("--ins", default="")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)

    p = add("count-perms", "surviving permutation count for an a-sequence")
    p.add_argument("--a", required=True, help="a-sequence, comma list")

    p = add("hilb-pairing", "descendent/boundary pairing on the Hilbert scheme")
    p.add_argument("--c", type=int, default=0, help="shorthand for ins=(c-1), eta=(c)")
    p.add_argument("--ins", default=None)
    p.add_argument("--eta", default=None)

    p = add("corr-matrix", "relative/descendent correspondence matrix")
    p.add_argument("--d", type=int, required=True)

    p = add("glue", "glue two series blocks along a boundary")
    p.add_argument("--left", required=True, help="block JSON file")
    p.add_argument("--right", required=True,
                   help="block JSON file, or 'identity'")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--qmax", type=int, default=None,
                   help="window top for the identity block")

    p = add("fit", "fit the rational denominator ansatz to a series")
    p.add_argument("--series", required=True, help="series JSON file, '-' for stdin")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--numdeg", type=int, required=True)

    p = add("func-eq", "check the functional equation on a rational form")
    p.add_argument("--ratq", required=True, help="rational-form JSON file, '-' for stdin")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--eta-size", type=int, required=True)
    p.add_argument("--eta-len", type=int, required=True)
    p.add_argument("--ins-sum", type=int, required=True)

    p = add("stationary-ref", "closed-form stationary reference series")
    p.add_argument("--d", type=int, required=True)

    add("selftest", "run the fast invariant suite")
    return parser


def _inject_config(argv: List[str]) -> List[str]:
    """Prepend flags from a --config JSON file so explicit flags win."""
    if not argv:
        return argv
    config_path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
    if not config_path:
        return argv
    with open(config_path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    injected = []
    for key, value in sorted(data.items()):
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        injected.extend([f"--{key}", str(value)])
    return [argv[0]] + injected + argv[1:]


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(obj):
    _emit(json.dumps(obj, indent=2, sort_keys=True))


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


# -- commands ---------------------------------------------------------------------


def _cmd_vertex(args) -> int:
    mu = _parts(args.mu)
    ins = _parts(args.ins)
    if args.a:
        series, report = vc.specialize_and_check(mu, ins, args.a, args.qmax,
                                                 jobs=args.jobs)
        if args.format == "json":
            _emit_json({"report": {
                "mu": list(mu), "ins": list(ins), "a": args.a, "qmax": args.qmax,
                "classifier_bound": report.classifier_bound,
                "largest_nonzero_order": report.largest_nonzero_order,
                "tail_all_zero": report.tail_all_zero,
            }, "series": series.to_json_dict()})
        elif args.format == "csv":
            rows = [("n", "num", "den")]
            for n in series.known_orders():
                a, b = series.coefficient(n).render_pair()
                rows.append((n, a, b))
            _emit(_csv_text(rows))
        else:
            for line in report.lines():
                _emit(line)
            _emit("series: " + series.render())
        return 0 if report.tail_all_zero else INVARIANT_EXIT
    series = vc.vertex_series(mu, ins, args.qmax, jobs=args.jobs)
    if args.format == "json":
        _emit_json(series.to_json_dict())
    elif args.format == "csv":
        rows = [("n", "num", "den")]
        for n in series.known_orders():
            a, b = series.coefficient(n).render_pair()
            rows.append((n, a, b))
        _emit(_csv_text(rows))
    else:
        _emit("series: " + series.render())
    return 0


def _cmd_configs(args) -> int:
    mu = _parts(args.mu)
    configs = enumerate_box_configs(mu, args.ell)
    for c in configs:
        assert validate_config_oracle(c)
    if args.format == "json":
        _emit_json([{"mu": list(mu), "depths": list(c.depths)} for c in configs])
    elif args.format == "csv":
        rows = [("index",) + tuple(f"h({i},{j})" for i, j in pt.cells(mu))]
        for k, c in enumerate(configs):
            rows.append((k,) + c.depths)
        _emit(_csv_text(rows))
    else:
        _emit(f"{len(configs)} configurations of total depth {args.ell} on {list(mu)}")
        for c in configs:
            _emit("  " + " ".join(c.rows()))
    return 0


def _cmd_cancel_check(args) -> int:
    mu = _parts(args.mu)
    ins = _parts(args.ins)
    raw = vc.group_sums_raw(mu, ins, args.a, args.ell, jobs=args.jobs)
    rows = []
    for f in sorted(raw, key=lambda p: p.render()):
        label = str(cx.classify_f(f))
        k0 = cx.kappa0(f)
        value = vc.evaluate_at_u3_zero(raw[f], args.a)
        rows.append((f.render(), label, k0, value))
    if args.format == "json":
        _emit_json([{"profile": r[0], "case": r[1], "kappa0": r[2],
                     "value": coeff_json(r[3])} for r in rows])
    elif args.format == "csv":
        out = [("profile", "case", "kappa0", "num", "den")]
        for r in rows:
            a, b = r[3].render_pair()
            out.append((r[0], r[1], r[2], a, b))
        _emit(_csv_text(out))
    else:
        _emit(f"profiles at mu={list(mu)} ins={list(ins)} a={args.a} depth {args.ell}:")
        for r in rows:
            _emit(f"  [{r[1]:>7}] kappa0={r[2]:>2}  {r[0]}  ->  {r[3]}")
    return 0


def _cmd_count_perms(args) -> int:
    seq = _parts(args.a)
    formula, brute = cx.count_nonvanishing_permutations(seq)
    if args.format == "json":
        _emit_json({"a": list(seq), "count": formula, "brute_force": brute})
    else:
        _emit(str(formula))
    return 0


def _cmd_hilb_pairing(args) -> int:
    if args.c:
        ins = (args.c - 1,)
        eta = (args.c,)
    else:
        if args.ins is None or args.eta is None:
            raise SystemExit(USAGE_EXIT)
        ins = _parts(args.ins)
        eta = _parts(args.eta)
    value = hb.hilb_descendent_pairing(ins, eta)
    normalized = value * RationalFunction.from_poly(S1 * S2) ** len(ins)
    if args.format == "json":
        _emit_json({"ins": list(ins), "eta": list(eta),
                    "pairing": coeff_json(value),
                    "normalized": coeff_json(normalized)})
    else:
        _emit(f"pairing = {value}")
        _emit(f"(s1*s2)^{len(ins)} * pairing = {normalized}")
    return 0


def _cmd_corr_matrix(args) -> int:
    mat = hb.correspondence_matrix(args.d)
    if args.format == "json":
        _emit_json({
            "d": args.d,
            "rows": [list(m) for m in mat.rows],
            "cols": [list(m) for m in mat.cols],
            "entries": [{"row": list(mu), "col": list(eta),
                         "value": coeff_json(mat.entry(mu, eta))}
                        for mu in mat.rows for eta in mat.cols],
        })
    elif args.format == "csv":
        rows = [("row", "col", "num", "den")]
        for mu in mat.rows:
            for eta in mat.cols:
                a, b = mat.entry(mu, eta).render_pair()
                rows.append(("+".join(map(str, mu)), "+".join(map(str, eta)), a, b))
        _emit(_csv_text(rows))
    else:
        _emit(f"correspondence matrix d={args.d}: "
              "length-triangular with nonzero diagonal, full rank")
        for mu in mat.rows:
            cells = ", ".join(str(mat.entry(mu, eta)) for eta in mat.cols)
            _emit(f"  row tau[{list(mu)}]: {cells}")
    return 0


def _cmd_glue(args) -> int:
    with open(args.left, "r", encoding="utf-8") as fh:
        left = gluing_block_from_json(json.load(fh))
    if args.right == "identity":
        lo = min(s.min_order for s in left.entries.values()) if left.entries else 0
        hi = args.qmax if args.qmax is not None else (
            max(s.max_order for s in left.entries.values()) if left.entries else 0)
        right = tqft.identity_block(args.d, lo, hi + args.d)
    else:
        with open(args.right, "r", encoding="utf-8") as fh:
            right = gluing_block_from_json(json.load(fh))
    glued = tqft.glue_series(left, right, args.d)
    _emit_json(gluing_block_to_json(glued))
    return 0


def _read_json_arg(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_fit(args) -> int:
    series = qseries_from_json(_read_json_arg(args.series))
    fit = tqft.fit_rational(series, args.d, args.numdeg)
    if args.format == "text":
        _emit(fit.render())
    else:
        _emit_json(fit.to_json_dict())
    return 0


def _cmd_func_eq(args) -> int:
    ratq = rationalq_from_json(_read_json_arg(args.ratq))
    evident = tqft.functional_equation_check(
        ratq, args.delta, args.eta_size, args.eta_len, args.ins_sum)
    literal = tqft.functional_equation_check_literal(
        ratq, args.delta, args.eta_size, args.eta_len, args.ins_sum)
    if args.format == "json":
        _emit_json({"holds": evident, "literal_variant": literal})
    else:
        _emit(f"functional equation holds: {evident}")
        _emit(f"literal-text variant (both slots second weight): {literal}")
    return 0


def _cmd_stationary_ref(args) -> int:
    ref = tqft.stationary_reference_series(args.d)
    if args.format == "text":
        _emit(ref.render())
    else:
        _emit_json(ref.to_json_dict())
    return 0


def _cmd_selftest(args) -> int:
    import random
    rng = random.Random(args.seed)
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report, do not crash
            checks.append((name, False, f"{type(exc).__name__}: {exc}"))

    from .tcharacter import TCharacter, chern_character_eval, euler_class

    def t_exact():
        g = vc.cylinder_and_edge_characters((1,))[1]
        assert euler_class(g) == RationalFunction.from_factors(1, [], [S1, S2])
        assert chern_character_eval(
            TCharacter({(1, 1, 0): 1}), 2) == RationalFunction.from_poly(
                (S1 + S2) * (S1 + S2)) * Fraction(1, 2)
    check("exact algebra examples", t_exact)

    def t_configs():
        from .boxconfig import brute_force_depths
        for mu in [(1,), (2,), (2, 1), (3,)]:
            for ell in range(0, 5):
                enum = [c.depths for c in enumerate_box_configs(mu, ell)]
                assert enum == brute_force_depths(mu, ell)
    check("box configurations match the closure oracle", t_configs)

    def t_vertex():
        series, report = vc.specialize_and_check((1,), (), 1, 6)
        assert series.support() == [1, 2] and report.tail_all_zero
        series, _ = vc.specialize_and_check((1,), (), 2, 6)
        assert [str(series.coefficient(n)) for n in (1, 2, 3)] == ["1", "2", "1"]
    check("specialized vertex closed forms", t_vertex)

    def t_edge():
        for d in range(1, 5):
            for mu in pt.enumerate_partitions(d):
                assert vc.edge_weight(mu) * hb.tangent_euler(mu) == RationalFunction.one()
    check("edge weight inverts the tangent product", t_edge)

    def t_hilb():
        for d in (1, 2, 3):
            for eta in pt.enumerate_partitions(d):
                for rho in pt.enumerate_partitions(d):
                    assert hb.nakajima_pairing(eta, rho) == hb.gram_closed_form(eta, rho)
        s1s2 = RationalFunction.from_poly(S1 * S2)
        for c in (1, 2, 3):
            from math import factorial
            assert s1s2 * hb.hilb_descendent_pairing((c - 1,), (c,)) == \
                RationalFunction.from_scalar(Fraction(1, factorial(c)))
    check("boundary pairings and descendent targets", t_hilb)

    def t_counts():
        for n in range(1, 6):
            seqs = [[0]]
            for i in range(2, n + 1):
                seqs = [s + [a] for s in seqs for a in range(s[-1], i)]
            for seq in seqs:
                cx.count_nonvanishing_permutations(tuple(seq))
    check("permutation count formula vs brute force", t_counts)

    def t_division():
        from .polys import MPoly
        for _ in range(10):
            n = rng.randint(1, 3)
            m = rng.randint(0, 2)
            a_seq = [0]
            for i in range(2, n + 1):
                a_seq.append(rng.randint(a_seq[-1], i - 1))
            F = cx.division_form(a_seq, n + m)
            R = MPoly(n + m, {tuple(rng.randint(0, 1) for _ in range(n + m)):
                              rng.randint(-3, 3) for _ in range(3)})
            G = F * R
            H = cx.poly_division_on_points(a_seq, G, m)
            for p in cx._permutation_points(n, m):
                assert Fraction(G.eval(p)) == Fraction(F.eval(p)) * Fraction(H.eval(p))
            assert H.total_degree() <= max(G.total_degree() - F.total_degree(), 0)
    check("division on permutation point sets", t_division)

    def t_fit():
        ref = tqft.stationary_reference_series(1)
        series = ref.expand(13)
        fit = tqft.fit_rational(series, 1, 2)
        assert fit.expand(13).agrees_with(series)
        assert tqft.functional_equation_check(ref, 2, 1, 1, 1)
    check("rational fit and functional equation", t_fit)

    def t_kk449():
        mu = (2, 2)
        for ell in range(0, 3):
            raw = vc.group_sums_raw(mu, (0,), 1, ell)
            for f, total in raw.items():
                sym_sum = RationalFunction.zero()
                for sigma in cx.enumerate_sym(mu):
                    cfg = cx.admissible_h(sigma, f)
                    if cfg is not None:
                        sym_sum = sym_sum + vc.descendent_weight(cfg, (0,))
                assert sym_sum * Fraction(1, cx.sym0_size(f)) == total
    check("profile sums match the permutation model", t_kk449)

    failed = 0
    for name, ok, msg in checks:
        _emit(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({msg})" if msg else ""))
        failed += 0 if ok else 1
    _emit(f"{len(checks) - failed}/{len(checks)} selftest groups passed")
    return 0 if failed == 0 else INVARIANT_EXIT


_COMMANDS = {
    "vertex": _cmd_vertex,
    "configs": _cmd_configs,
    "cancel-check": _cmd_cancel_check,
    "count-perms": _cmd_count_perms,
    "hilb-pairing": _cmd_hilb_pairing,
    "corr-matrix": _cmd_corr_matrix,
    "glue": _cmd_glue,
    "fit": _cmd_fit,
    "func-eq": _cmd_func_eq,
    "stationary-ref": _cmd_stationary_ref,
    "selftest": _cmd_selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"ptvertex: bad config file: {exc}\n")
        return USAGE_EXIT
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PoleSurvived, RankDeficient, CalibrationFailed, NotPolynomial,
            HypothesisFailed) as exc:
        sys.stderr.write(f"ptvertex: falsified invariant: {exc}\n")
        return INVARIANT_EXIT
    except (NoFit, Underdetermined) as exc:
        sys.stderr.write(f"ptvertex: {exc}\n")
        return NOFIT_EXIT
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"ptvertex: {exc}\n")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
