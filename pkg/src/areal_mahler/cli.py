"""Command line entry point: ``areal-mahler <subcommand> ...``.

Output is JSON (``--json``) or ``key: value`` text. Floats are written with 15
significant digits so identical inputs give byte-identical output. The Monte
Carlo seed defaults to ``DEFAULT_SEED``; the ``AREAL_MAHLER_SEED`` environment
variable overrides it and ``--seed`` overrides both.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from dataclasses import asdict, is_dataclass

import numpy as np

from . import approximation, arithmetic, composition, measures, multivariate, zeros
from .errors import ArealMahlerError, DegreeMismatch, DomainError, ParseError
from .poly import IntPoly, find_roots, format_poly, parse_int_poly, parse_poly
from .quadrature import QuadratureConfig

DEFAULT_SEED = 20240601
SEARCH_COLUMNS = ["coeffs", "degree", "mahler", "areal", "cyclotomic"]
ZEROS_COLUMNS = ["n", "degree", "mahler_root", "areal_root", "min_modulus", "max_modulus", "angular_discrepancy"]
APPROX_COLUMNS = ["N", "bergman_distance", "hardy_distance", "hardy_gap", "tail_bound"]


# ---------------------------------------------------------------- output

def _clean(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(f"{x:.15g}") if math.isfinite(x) else None
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(x.real), _clean(x.imag)]
    if isinstance(x, IntPoly):
        return list(x.coeffs)
    if is_dataclass(x) and not isinstance(x, type):
        return _clean(asdict(x))
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_clean(v) for v in x]
    return x


def dumps(payload) -> str:
    return json.dumps(_clean(payload), sort_keys=True)


def _emit(args, payload):
    if args.json:
        print(dumps(payload))
        return
    for k, v in _clean(payload).items():
        print(f"{k}: {json.dumps(v)}")


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt_cell(r[c]) for c in columns])


def _fmt_cell(v):
    v = _clean(v)
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    return "" if v is None else v


def _progress(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("AREAL_MAHLER_SEED")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ParseError(f"AREAL_MAHLER_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _cfg(args) -> QuadratureConfig:
    return QuadratureConfig(angular_nodes=args.angular_nodes, radial_nodes=args.radial_nodes)


# ---------------------------------------------------------------- subcommands

def cmd_measure(args):
    p = parse_poly(args.poly)
    if p.is_zero():
        raise DomainError("zero polynomial")
    rep = measures.measure_report(p)
    out = {
        "degree": rep.degree, "mahler": rep.mahler, "areal": rep.areal, "ratio": rep.ratio,
        "bounds": asdict(rep.bounds_ok), "interior_roots": rep.interior_roots,
        "integer_case": rep.integer_case,
    }
    if args.oracle:
        cfg = _cfg(args)
        out["mahler_oracle"] = measures.mahler_oracle(p, cfg)
        out["areal_oracle"] = measures.areal_oracle(p, cfg)
    if args.p is not None:
        cfg = _cfg(args)
        out["bergman_norm"] = measures.bergman_p_norm(p, args.p, cfg)
        out["hardy_norm"] = measures.hardy_p_norm(p, args.p, cfg)
    _emit(args, out)
    return 0


def cmd_compose(args):
    lam = parse_poly(args.lam)
    p = parse_poly(args.poly)
    n = args.n
    mult = composition.SzegoMultiplier(lam, n)
    out = {"n": n, "composition": format_poly(composition.szego_compose(mult, p, n))}
    checks = {}
    want = args.check
    if want in ("all", "dbs"):
        checks["debruijn_springer"] = composition.check_debruijn_springer(mult, p, n)
    if want in ("all", "areal"):
        checks["areal_composition"] = composition.check_areal_composition(mult, p, n)
    if want in ("all", "deriv") and p.degree >= 1:
        d = composition.derivative_bounds(p)
        checks["z_derivative"] = d.z_derivative
        checks["derivative"] = d.derivative
    if want in ("all", "coeff"):
        checks["coefficients"] = [{"k": c.k, "areal": c.areal, "mahler": c.mahler}
                                  for c in composition.coefficient_bounds(p)]
    if want in ("all", "antideriv") and p.degree >= 1:
        a = composition.antiderivative_bound(p)
        checks["antiderivative"] = {"check": a.check, "lambda_by_roots": a.lambda_by_roots,
                                    "lambda_by_product": a.lambda_by_product, "agree": a.agree}
    out["checks"] = _with_holds(checks)
    out["all_hold"] = _all_hold(checks)
    _emit(args, out)
    return 0


def _with_holds(obj):
    if isinstance(obj, composition.InequalityCheck):
        return {"lhs": obj.lhs, "rhs": obj.rhs, "slack": obj.slack, "holds": obj.holds}
    if isinstance(obj, dict):
        return {k: _with_holds(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_with_holds(v) for v in obj]
    return obj


def _all_hold(obj) -> bool:
    if isinstance(obj, composition.InequalityCheck):
        return obj.holds
    if isinstance(obj, dict):
        return all(_all_hold(v) for k, v in obj.items() if k != "agree") and obj.get("agree", True)
    if isinstance(obj, list):
        return all(_all_hold(v) for v in obj)
    return True


def cmd_classify(args):
    p = parse_int_poly(args.poly)
    c = arithmetic.classify(p)
    _emit(args, {"poly": p, "kind": c.kind, "areal_is_one": c.areal_is_one, "mahler_is_one": c.mahler_is_one,
                 "witness": c.witness, "mahler": c.mahler, "areal": c.areal,
                 "is_cyclotomic": arithmetic.is_cyclotomic(p)})
    return 0


def cmd_search(args):
    _progress(args, f"searching degree <= {args.max_degree}, height <= {args.height}")
    recs = arithmetic.lehmer_search(args.max_degree, args.height, budget=args.budget, workers=args.workers)
    rows = [{"coeffs": r.poly, "degree": r.degree, "mahler": r.mahler, "areal": r.areal,
             "cyclotomic": r.is_cyclotomic} for r in recs]
    if args.csv:
        _write_csv(args.csv, SEARCH_COLUMNS, rows)
    top_areal = arithmetic.minimal_noncyclotomic(recs, args.top, "areal")
    top_mahler = arithmetic.minimal_noncyclotomic(recs, args.top, "mahler")
    conv = lambda rs: [{"coeffs": r.poly, "degree": r.degree, "mahler": r.mahler, "areal": r.areal} for r in rs]
    _emit(args, {"records": len(recs), "cyclotomic": sum(r.is_cyclotomic for r in recs),
                 "min_areal_noncyclotomic": conv(top_areal), "min_mahler_noncyclotomic": conv(top_mahler)})
    return 0


def cmd_zeros(args):
    if args.poly is not None:
        p = parse_poly(args.poly)
        r = find_roots(p)
        st = zeros.zero_stats(r, _float_list(args.cutoffs) if r.degree >= 2 else ())
        out = {"n": st.n, "min_modulus": st.min_modulus, "max_modulus": st.max_modulus,
               "angular_discrepancy": st.angular_discrepancy, "energy_truncated": st.energy_truncated,
               "inside_fraction": {f"{x:g}": st.inside_fraction(x) for x in (0.5, 0.9, 1.0, 1.1)}}
        if args.stats and all(abs(c.imag) == 0 and c.real == int(c.real) for c in p.coeffs) and p.degree >= 2:
            ip = IntPoly(tuple(int(c.real) for c in p.coeffs))
            try:
                de = zeros.discriminant_energy_bound(ip)
                out["discriminant"] = {"disc": de.disc, "energy_bound": de.energy_bound,
                                       "identity_ok": de.identity_ok}
            except ArealMahlerError as exc:
                out["discriminant"] = {"error": str(exc)}
        _emit(args, out)
        return 0
    if args.family is None:
        raise ParseError("zeros needs --family or --poly")
    ns = _int_list(args.n_list)
    rows = [asdict(r) for r in zeros.family_scan(args.family, ns, workers=args.workers)]
    if args.csv:
        _write_csv(args.csv, ZEROS_COLUMNS, rows)
    _emit(args, {"family": arithmetic.FAMILY_ALIASES[args.family], "rows": rows})
    return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated numbers, got {text!r}") from exc


def cmd_mv(args):
    try:
        p = multivariate.read_multipoly(args.poly_spec)
    except OSError as exc:
        raise ParseError(f"cannot read {args.poly_spec}: {exc}") from exc
    if p.is_zero():
        raise DomainError("zero polynomial")
    seed = _seed(args)
    out = {"d": p.d, "total_degree": p.total_degree, "dominance_value": multivariate.dominance_value(p)}
    if p.d <= 3:
        out["mahler"] = multivariate.mv_mahler(p, args.quad_nodes)
    if p.d <= 2:
        cfg = multivariate.MV_DISK if args.quad_nodes is None else QuadratureConfig(
            angular_nodes=args.quad_nodes, radial_nodes=max(16, args.quad_nodes // 4))
        out["areal_quadrature"] = multivariate.mv_areal_quadrature(p, cfg)
        if p.d == 2:
            out["areal_fibered"] = multivariate.mv_areal_fibered(p)
        chk = multivariate.mv_bounds_check(p)
        out["bounds"] = {"upper_ok": chk.upper.holds, "lower_ok": chk.lower.holds}
    if args.mc_samples or p.d > 2:
        mc = multivariate.mv_areal_mc(p, args.mc_samples or 200_000, seed)
        out["areal_mc"] = {"value": mc.value, "std_error": mc.std_error, "samples": mc.samples,
                           "seed": mc.seed, "redrawn": mc.redrawn}
    _emit(args, out)
    return 0


def cmd_approx(args):
    f = approximation.stream_by_name(args.stream)
    Ns = _int_list(args.N)
    rows = [asdict(r) for r in approximation.integer_approx_table(f, args.p, Ns)]
    if args.csv:
        _write_csv(args.csv, APPROX_COLUMNS, rows)
    _emit(args, {"stream": f.name, "p": args.p, "rows": rows})
    return 0


def cmd_verify(args):
    from . import verify

    results = verify.run_all(quiet=args.quiet or args.json, printer=print)
    if args.json:
        print(dumps([{"number": r.number, "name": r.name, "passed": r.passed, "observed": r.observed,
                      "expected": r.expected, "seconds": r.seconds} for r in results]))
    return 0 if results[-1].passed else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")

    ap = argparse.ArgumentParser(prog="areal-mahler", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", parents=[common], help="Mahler and areal measure of one polynomial")
    m.add_argument("--poly", required=True, help="ascending coefficients a0,a1,...; entries re or re+imi")
    m.add_argument("--oracle", action="store_true", help="also report quadrature values")
    m.add_argument("--p", type=float, help="also report Bergman and Hardy p-norms")
    m.add_argument("--angular-nodes", type=int, default=8192)
    m.add_argument("--radial-nodes", type=int, default=64)
    m.set_defaults(func=cmd_measure, print_usage=m.print_usage)

    c = sub.add_parser("compose", parents=[common], help="Szego composition and its inequalities")
    c.add_argument("--lambda", dest="lam", required=True)
    c.add_argument("--poly", required=True)
    c.add_argument("--n", type=int, required=True, help="nominal degree of the composition")
    c.add_argument("--check", choices=["all", "dbs", "areal", "deriv", "coeff", "antideriv"], default="all")
    c.set_defaults(func=cmd_compose, print_usage=c.print_usage)

    k = sub.add_parser("classify", parents=[common], help="cyclotomic / no roots in disk / interior roots")
    k.add_argument("--poly", required=True, help="integer coefficients a0,...,an")
    k.set_defaults(func=cmd_classify, print_usage=k.print_usage)

    s = sub.add_parser("search", parents=[common], help="exhaustive small-height search")
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--top", type=int, default=10)
    s.add_argument("--csv", help=f"write all records; columns {','.join(SEARCH_COLUMNS)}")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--budget", type=int, default=arithmetic.DEFAULT_BUDGET)
    s.set_defaults(func=cmd_search, print_usage=s.print_usage)

    z = sub.add_parser("zeros", parents=[common], help="zero distribution diagnostics")
    z.add_argument("--family", choices=sorted(arithmetic.FAMILY_ALIASES))
    z.add_argument("--n-list", default="10,100,1000")
    z.add_argument("--poly")
    z.add_argument("--stats", action="store_true", help="include the discriminant identity for integer input")
    z.add_argument("--cutoffs", default=",".join(f"{x:g}" for x in zeros.DEFAULT_CUTOFFS))
    z.add_argument("--csv", help=f"write the scan; columns {','.join(ZEROS_COLUMNS)}")
    z.add_argument("--workers", type=int, default=1)
    z.set_defaults(func=cmd_zeros, print_usage=z.print_usage)

    v = sub.add_parser("mv", parents=[common], help="multivariate measures from a term file")
    v.add_argument("--poly-spec", required=True, help="file with lines 'k1 ... kd : re[+imi]'")
    v.add_argument("--mc-samples", type=int, default=0)
    v.add_argument("--seed", type=int)
    v.add_argument("--quad-nodes", type=int, help="angular nodes per variable")
    v.set_defaults(func=cmd_mv, print_usage=v.print_usage)

    a = sub.add_parser("approx", parents=[common], help="integer partial sums in Bergman vs Hardy norms")
    a.add_argument("--stream", required=True, help="ones | gap | file:<path>")
    a.add_argument("--p", type=float, default=1.5)
    a.add_argument("--N", default="4,8,16,32,64,128")
    a.add_argument("--csv", help=f"write the table; columns {','.join(APPROX_COLUMNS)}")
    a.set_defaults(func=cmd_approx, print_usage=a.print_usage)

    f = sub.add_parser("verify", parents=[common], help="run the reproduction suite")
    f.set_defaults(func=cmd_verify, print_usage=f.print_usage)
    return ap


_NEGATIVE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv: list[str]) -> list[str]:
    # "--poly -1,0,4" would otherwise read "-1,0,4" as an option
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except (ParseError, DomainError, DegreeMismatch) as exc:
        getattr(args, "print_usage", parser.print_usage)(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArealMahlerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
