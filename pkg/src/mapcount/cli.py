"""``mapcount`` command line: thin wrappers over the pipeline stages.

Every subcommand prints a :class:`~mapcount.claims.RunReport` (JSON by
default, ``--pretty`` for a short human summary) and exits 0 when every check
passes, 1 when a check fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .claims import CONVENTIONS, RunReport, claim_ids, cmd_reproduce
from .errors import CapExceeded, MapcountError, UnknownClaim
from .exact.poly import Poly, format_rational
from .exact.series import NU, TruncSeries
from .exact.serialize import series_from_json, series_to_json

SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


class UsageError(MapcountError):
    pass


def _pow(var: str, k: int) -> str:
    return "" if k == 0 else var if k == 1 else var + str(k).translate(SUPERSCRIPT)


def poly_str(p: Poly, var: str = "ν") -> str:
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_rational(a) if isinstance(a, Fraction) else str(a)
        if k and a == 1:
            body = ""
        parts.append((sign, body + _pow(var, k)))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return s + "".join(sg + b for sg, b in parts[1:])


def series_str(s: TruncSeries, var: str = "z") -> str:
    """Compact text such as ``1 + (2ν+1)z + ... + O(z^n)``."""
    terms = []
    for k, c in enumerate(s.coeffs):
        p = c if isinstance(c, Poly) else Poly([c])
        if p.is_zero():
            continue
        body = poly_str(p)
        if k:
            if body == "1":
                body = ""
            elif sum(1 for x in p.coeffs if x) > 1:
                body = f"({body})"
        terms.append(body + _pow(var, k))
    terms.append(f"O({_pow(var, s.order)})")
    return " + ".join(terms)


def series_output(s: TruncSeries) -> dict:
    d = series_to_json(s)
    d["text"] = series_str(s)
    d["provenance"] = "exact"
    return d


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _cap(order: int) -> int:
    if order < 1:
        raise UsageError("order must be positive")
    cap = os.environ.get("MAPCOUNT_MAX_ORDER")
    if cap and order > int(cap):
        raise CapExceeded(f"order {order} exceeds MAPCOUNT_MAX_ORDER={cap}")
    return order


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _find(obj, *keys: str):
    """``obj`` itself, or ``obj["outputs"][key]`` for the first key present in a saved report."""
    if isinstance(obj, dict) and "outputs" in obj:
        for key in keys:
            if key in obj["outputs"]:
                return obj["outputs"][key]
    return obj


def _zero_check(r: RunReport, name: str, s: TruncSeries):
    bad = next((i for i, c in enumerate(s.coeffs) if (c != 0 if not isinstance(c, Poly) else not c.is_zero())), None)
    r.check(name, bad is None, None if bad is None else f"first nonzero at z^{bad}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_oracle(args, r: RunReport):
    from .oracle import oracle_series
    from .oracle.series import parse_weighting

    try:
        parse_weighting(args.weighting)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    r.inputs = {"edges": args.edges, "weighting": args.weighting}
    with r.stage("enumerate"):
        s = oracle_series(args.edges, args.weighting)
    r.outputs["series"] = series_output(s)
    r.check("nu_degree_at_most_n", all(c.degree <= n for n, c in enumerate(s.coeffs)))
    if args.weighting == "all":
        from .ising import solve_catalytic_bicoloured

        with r.stage("catalytic"):
            cat = solve_catalytic_bicoloured(args.edges + 1).total
        r.check("equals_catalytic_solution", cat == s)


def cmd_ising(args, r: RunReport):
    from .ising import check_parametrisation, deletion_identity_residual, solve_catalytic_bicoloured, split_by_root_edge

    order = _cap(args.order)
    nu = None if args.nu_at is None else _rational(args.nu_at)
    r.inputs = {"order": order, "nu_at": None if nu is None else format_rational(nu), "slice": args.slice,
                "check_param": args.check_param}
    integral = nu is None or nu.denominator == 1
    with r.stage("catalytic"):
        sol = solve_catalytic_bicoloured(order, nu_value=None if nu is None else int(nu) if integral else None)
    with r.stage("split"):
        split = split_by_root_edge(sol)
    r.check("mono_plus_bi_plus_one_equals_total", True)
    _zero_check(r, "deletion_identity", deletion_identity_residual(sol))
    if args.check_param:
        with r.stage("parametrisation"):
            rep = check_parametrisation(order, sol, raise_on_fail=False)
        r.check("parametrisation_matches", rep.passed, rep.as_dict())
    out = split.slice(args.slice)
    r.outputs["series"] = series_output(out if integral else out.eval_nu(nu))


def cmd_tower(args, r: RunReport):
    from . import tower

    order = _cap(args.order)
    nu = None if args.nu_at is None else _rational(args.nu_at)
    r.inputs = {"order": order, "coloured": args.coloured, "normalization": args.normalization,
                "nu_at": None if nu is None else format_rational(nu)}
    if not args.coloured:
        if nu is not None:
            raise UsageError("--nu-at needs --coloured")
        with r.stage("tower"):
            tw = tower.build_uncoloured_tower(order)
        _zero_check(r, "core_residual", tower.core_residual(tw))
        _zero_check(r, "network_residual", tower.network_residual(tw))
        _zero_check(r, "S_equals_P", tw.S - tw.P)
        for k in ("B", "T"):
            r.outputs[k] = series_output(getattr(tw, k))
        return
    with r.stage("tower"):
        tw = tower.tb_series(order, normalization=args.normalization)
    r.conventions["network_normalization_selected"] = tw.normalization
    for k, v in tw.checks.items():
        if k != "candidates":
            r.check(k, v)
    with r.stage("residuals"):
        for k, v in tower.bicoloured_residuals(tw).items():
            _zero_check(r, f"residual_{k}", v)
    if nu is None:
        r.outputs["T1"] = series_output(tw.T1)
        r.outputs["T2"] = series_output(tw.T2)
    else:
        r.outputs["T1"] = series_output(tw.T1.eval_nu(nu))
        r.outputs["T2"] = series_output(tw.T2.eval_nu(nu))
    if nu == 0:
        r.outputs["Tb"] = r.outputs["T2"]


def _series_arg(path: str) -> TruncSeries:
    obj = _find(_load_json(path), "series", "Tb", "T", "B")
    try:
        s = series_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} does not hold a series: {exc}") from exc
    if s.ring is NU:
        raise UsageError("the series has ν-dependent coefficients; specialise ν first")
    return s


def cmd_guess(args, r: RunReport):
    from .asymptotics.guess import guess_min_poly

    s = _series_arg(args.series)
    r.inputs = {"series": os.path.basename(args.series), "order": s.order, "degT": args.degT, "degZ": args.degZ,
                "verify": args.verify}
    with r.stage("guess"):
        g = guess_min_poly(s, args.degT, args.degZ, verify=args.verify, return_report=True)
    r.outputs["curve"] = dict(g.curve.to_json(), text=g.curve.to_str(), provenance="exact")
    r.outputs["guess"] = g.as_dict()
    r.check("held_out_coefficients_vanish", g.verified_orders >= args.verify, g.verified_orders, args.verify)
    r.check("curve_vanishes_on_series", g.curve.vanishes_on(s))


def cmd_asympt(args, r: RunReport):
    from .asymptotics.guess import AlgebraicCurve
    from .asymptotics.singularity import branch_series, dominant_singularity
    from .asymptotics.transfer import transfer

    if args.curve is None and args.series is None:
        raise UsageError("give --curve, --series or both")
    lo, hi = (_rational(x) for x in args.interval.split(",")) if "," in args.interval else (None, None)
    if lo is None or not 0 <= lo < hi:
        raise UsageError("--interval must be a,b with 0 <= a < b")
    width = _rational(args.refine)
    series = _series_arg(args.series) if args.series else None
    r.inputs = {"curve": os.path.basename(args.curve) if args.curve else None,
                "series": os.path.basename(args.series) if args.series else None,
                "interval": [format_rational(lo), format_rational(hi)], "refine": format_rational(width)}
    if args.curve:
        obj = _find(_load_json(args.curve), "curve")
        try:
            curve = AlgebraicCurve.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.curve} does not hold a curve: {exc}") from exc
    else:
        from .asymptotics.guess import guess_min_poly

        with r.stage("guess"):
            curve = guess_min_poly(series, args.degT, args.degZ)
    if series is None:
        series = branch_series(curve, 60)
    else:
        r.check("curve_vanishes_on_series", curve.vanishes_on(series))
    with r.stage("singularity"):
        ds = dominant_singularity(curve, series, hi=hi, width=width)
        form = transfer(ds.expansion)
    r.outputs["curve"] = dict(curve.to_json(), text=curve.to_str(), provenance="exact")
    r.outputs["singularity"] = ds.as_dict()
    r.outputs["asymptotic"] = dict(form.as_dict(), text=form.to_str())
    rho_lo = ds.rho if ds.exact else ds.rho.lo
    r.check("rho_in_interval", lo < rho_lo <= hi, ds.as_dict()["rho"], r.inputs["interval"])
    if not ds.exact:
        r.check("rho_width", ds.rho.width <= width, format_rational(ds.rho.width), format_rational(width),
                provenance="certified-interval")
    if not ds.expansion.exact:
        r.outputs["asymptotic"]["note"] = ds.expansion.note


def cmd_bicubic(args, r: RunReport):
    from .asymptotics.bicubic import bicubic_pipeline

    order = _cap(args.order)
    width = _rational(args.refine)
    r.inputs = {"order": order, "refine": format_rational(width)}
    with r.stage("pipeline"):
        st = bicubic_pipeline(order, width=width)
    for k, v in st.checks.items():
        r.check(k, v, provenance="certified-interval" if "straddle" in k else "exact")
    r.outputs["state"] = st.as_dict()


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mapcount", description="Exact enumeration workbench for planar maps.")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--pretty", dest="fmt", action="store_const", const="pretty", help="short text summary")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the report")
    p.set_defaults(fmt="json")
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("oracle", help="brute-force series from enumerated maps")
    o.add_argument("--edges", type=int, required=True)
    o.add_argument("--weighting", default="all", help="e.g. all, bi_root, three_conn+mono_root")

    i = sub.add_parser("ising", help="Ising series from the catalytic equation")
    i.add_argument("--order", type=int, required=True)
    i.add_argument("--nu-at", help="specialise ν to this rational value")
    i.add_argument("--slice", default="total", choices=["total", "mono", "bi", "del", "con"])
    i.add_argument("--check-param", action="store_true", help="compare with the rational parametrisation")

    t = sub.add_parser("tower", help="2- and 3-connected series")
    t.add_argument("--order", type=int, required=True)
    t.add_argument("--coloured", action="store_true")
    t.add_argument("--nu-at")
    t.add_argument("--normalization", default="auto", choices=["auto", "bare", "first_arg", "root_class"])

    g = sub.add_parser("guess", help="minimal polynomial of a series")
    g.add_argument("--series", required=True, help="series JSON or a saved report")
    g.add_argument("--degT", type=int, required=True)
    g.add_argument("--degZ", type=int, required=True)
    g.add_argument("--verify", type=int, default=10)

    a = sub.add_parser("asympt", help="dominant singularity and coefficient asymptotics")
    a.add_argument("--curve", help="curve JSON or a saved report")
    a.add_argument("--series", help="series JSON used to pick the branch (and to guess if no curve)")
    a.add_argument("--interval", default="0,1")
    a.add_argument("--refine", default="1/1000000000000")
    a.add_argument("--degT", type=int, default=6)
    a.add_argument("--degZ", type=int, default=10)

    b = sub.add_parser("bicubic", help="radius of bicubic networks")
    b.add_argument("--order", type=int, default=40)
    b.add_argument("--refine", default="1/1000000000000")

    rp = sub.add_parser("reproduce", help="re-run a registered claim")
    rp.add_argument("claim", nargs="?", help="claim id; omit with --list")
    rp.add_argument("--quick", action="store_true", help="reduced orders")
    rp.add_argument("--list", action="store_true")
    return p


COMMANDS = {
    "oracle": cmd_oracle, "ising": cmd_ising, "tower": cmd_tower, "guess": cmd_guess,
    "asympt": cmd_asympt, "bicubic": cmd_bicubic,
}


def emit(report: RunReport, fmt: str, timing: bool = True, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "pretty":
        print(report.pretty(), file=stream)
    else:
        print(json.dumps(report.to_dict(timing=timing), indent=2, sort_keys=True, ensure_ascii=False), file=stream)


def run(argv=None) -> tuple[int, RunReport | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if args.command == "reproduce":
            if args.list:
                print("\n".join(claim_ids()))
                return 0, None
            if not args.claim:
                raise UsageError("give a claim id or --list")
            report = cmd_reproduce(args.claim, quick=args.quick, command=["mapcount"] + argv)
        else:
            report = RunReport(["mapcount"] + argv, conventions=dict(CONVENTIONS))
            COMMANDS[args.command](args, report)
    except (UsageError, CapExceeded, UnknownClaim) as exc:
        print(f"mapcount: error: {exc}", file=sys.stderr)
        return 2, None
    except MapcountError as exc:
        print(f"mapcount: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1, None
    emit(report, args.fmt, timing=not args.no_timing)
    return (0 if report.passed else 1), report


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
