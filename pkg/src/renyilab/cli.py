"""Command-line front end.

Exit status: 0 when every check passed (or a plain computation finished),
1 when an inequality failed or a probe found a counterexample, 2 on bad
input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import bounds, diffconv, majorize, probe
from .core import (
    BoundReport,
    Geometric,
    MajorizationError,
    Order,
    Pmf,
    TwoSidedGeo,
    is_log_concave,
    is_monotone,
    truncation_tol,
)
from .entropy import renyi, renyi_geometric, renyi_two_sided_geo

DEFAULT_ORDERS = ("0", "0.5", "1", "1.5", "2", "3", "10", "inf")
DEFAULT_THETAS = (0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5)
LN2 = math.log(2.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input parsing -----------------------------------------------------------

def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return text


def parse_pmf(text: str) -> Pmf:
    try:
        data = json.loads(_read_arg(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed pmf JSON: {exc.msg}") from None
    try:
        return Pmf.from_dict(data)
    except ValueError as exc:
        raise UsageError(f"invalid pmf: {exc}") from None


def parse_sequence(text: str) -> list[float]:
    try:
        data = json.loads(_read_arg(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed sequence JSON: {exc.msg}") from None
    if isinstance(data, dict):
        data = data.get("probs", data.get("sequence"))
    if not isinstance(data, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in data
    ):
        raise UsageError("sequence must be a JSON list of numbers")
    return [float(v) for v in data]


def parse_order(text: str) -> Order:
    try:
        return Order.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def parse_tsg(text: str) -> TwoSidedGeo:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--tsg expects p,q,m")
    try:
        return TwoSidedGeo(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise UsageError(f"invalid two-sided geometric: {exc}") from None


def parse_geometric(text: str) -> Geometric:
    try:
        return Geometric(float(text))
    except ValueError as exc:
        raise UsageError(f"invalid geometric parameter: {exc}") from None


def _orders(args) -> list[Order]:
    specs = [args.order] if args.order is not None else list(DEFAULT_ORDERS)
    return [parse_order(s) for s in specs]


def _input_pmf(args, alpha: float = 1.0) -> Pmf:
    if args.pmf is not None:
        return parse_pmf(args.pmf)
    if args.geometric is not None:
        return parse_geometric(args.geometric).to_pmf(truncation_tol(alpha))
    raise UsageError("a distribution is required: --pmf or --geometric")


# -- output ------------------------------------------------------------------

def _fmt(value, precision: str) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower() if isinstance(value, bool) else ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, precision)
    return str(value)


def emit(rows: list[dict], fmt: str, document=None, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(document if document is not None else rows, indent=2) + "\n")
        return
    if not rows:
        return
    fields = list(rows[0].keys())
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row.get(k), ".17g") for k in fields])
        out.write(buf.getvalue())
        return
    cells = [[_fmt(row.get(k), ".7g") for k in fields] for row in rows]
    widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
    out.write("  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip() + "\n")
    for c in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip() + "\n")


def _scale(args) -> float:
    return 1.0 / LN2 if args.bits else 1.0


def _unit(args) -> str:
    return "bits" if args.bits else "nats"


def _report_row(report, scale: float, **head) -> dict:
    row = dict(head)
    row.update(lhs=report.lhs * scale, rhs=report.rhs * scale,
               margin=report.margin * scale, holds=report.holds)
    return row


# -- subcommands -------------------------------------------------------------

def cmd_entropy(args) -> int:
    sources = [s for s in (args.pmf, args.geometric, args.tsg) if s is not None]
    if len(sources) != 1:
        raise UsageError("entropy needs exactly one of --pmf, --geometric, --tsg")
    scale = _scale(args)
    rows = []
    for order in _orders(args):
        if args.tsg is not None:
            ev = renyi_two_sided_geo(parse_tsg(args.tsg), order)
        elif args.geometric is not None:
            ev = renyi_geometric(parse_geometric(args.geometric), order)
        else:
            ev = renyi(parse_pmf(args.pmf), order)
        rows.append({"order": str(order), "value": ev.value * scale,
                     "unit": _unit(args), "method": ev.method.value})
    emit(rows, args.format)
    return 0


def cmd_check(args) -> int:
    if args.what in ("logconcave", "monotone"):
        f = parse_pmf(args.pmf) if args.pmf else _input_pmf(args)
        if args.what == "logconcave":
            ok = is_log_concave(f, args.tol if args.tol is not None else 1e-12)
        else:
            ok = is_monotone(f)
        emit([{"property": args.what, "holds": ok}], args.format,
             {"property": args.what, "holds": ok, "pmf": f.to_dict()})
        return 0 if ok else 1
    scale = _scale(args)
    rows = []
    if args.what == "theorem":
        for order in _orders(args):
            if order.alpha == 0.0:
                continue
            f = _input_pmf(args, order.alpha)
            rows.append(_report_row(bounds.check_main_theorem(f, order), scale,
                                    order=str(order)))
    else:
        if args.tsg is None:
            raise UsageError("check tsg-lemma needs --tsg p,q,m")
        g = parse_tsg(args.tsg)
        for order in _orders(args):
            if order.alpha == 0.0:
                continue
            rows.append(_report_row(bounds.check_tsg_lemma(g, order), scale, order=str(order)))
    emit(rows, args.format)
    return 0 if all(r["holds"] for r in rows) else 1


def cmd_extremal(args) -> int:
    f = _input_pmf(args)
    g = majorize.extremal_tsg(f)
    rep = majorize.majorizes_tsg(f, g)
    scale = _scale(args)
    row = {"p": g.p, "q": g.q, "m": g.m, "peak": g.mode_mass,
           "H_inf": renyi(f, math.inf).value * scale, "majorized": rep.holds}
    emit([row], args.format, {"tsg": {"p": g.p, "q": g.q, "m": g.m, "peak": g.mode_mass},
                              "H_inf": row["H_inf"], "unit": _unit(args),
                              "majorization": rep.to_dict()})
    return 0 if rep.holds else 1


def cmd_majorize(args) -> int:
    f = parse_pmf(args.a)
    if args.tsg is not None:
        rep = majorize.majorizes_tsg(f, parse_tsg(args.tsg))
    elif args.b is not None:
        rep = majorize.majorizes(f, parse_pmf(args.b))
    else:
        raise UsageError("majorize needs a second pmf B or --tsg p,q,m")
    emit([rep.to_dict()], args.format, rep.to_dict())
    return 0 if rep.holds else 1


def _geometric_rs(theta: float, order: Order):
    """Closed-form check for geometric inputs too long to difference directly."""
    return BoundReport(diffconv.geometric_rs_gap(theta, order), diffconv.rs_log_constant(order),
                       {"theta": theta, "order": str(order)}, tol=diffconv.TOL)


def cmd_rs(args) -> int:
    scale = _scale(args)
    rows = []
    for order in _orders(args):
        method = "direct"
        if args.pmf is None and args.geometric is not None:
            if order.alpha == 0.0:
                continue  # both sides infinite
            geo = parse_geometric(args.geometric)
            if geo.truncation_length(truncation_tol(order.alpha)) > diffconv.MAX_DIRECT_SUPPORT:
                rep, method = _geometric_rs(geo.theta, order), "closed-form"
            else:
                rep = diffconv.check_discrete_rs(geo.to_pmf(truncation_tol(order.alpha)), order)
        elif order.alpha == 0.0:
            rep = diffconv.check_h0_rs(_input_pmf(args))
        else:
            rep = diffconv.check_discrete_rs(_input_pmf(args), order)
        row = _report_row(rep, scale, order=str(order))
        row["method"] = method
        row["verdict"] = "PASS" if rep.holds else "FAIL"
        rows.append(row)
    emit(rows, args.format)
    return 0 if all(r["holds"] for r in rows) else 1


def cmd_scan(args) -> int:
    thetas = parse_floats(args.thetas) if args.thetas else list(DEFAULT_THETAS)
    order = parse_order(args.order if args.order is not None else "2")
    scale = _scale(args)
    if args.what == "sharpness":
        reports = bounds.sharpness_scan(order, thetas)
        ok = all(r.holds for r in reports)
    else:
        reports = diffconv.rs_limit_scan(order, thetas)
        ok = all(r.extra.get("abs_diff", 0.0) <= 1e-8 for r in reports)
    rows = []
    for r in reports:
        row = _report_row(r, scale, theta=r.witness["theta"], order=str(order))
        if args.what == "rslimit":
            direct = r.extra.get("direct")
            row["direct"] = None if direct is None else direct * scale
        rows.append(row)
    emit(rows, args.format)
    return 0 if ok else 1


def _t_grid(args):
    return parse_floats(args.ts) if args.ts else probe.default_t_grid().tolist()


def cmd_probe(args) -> int:
    what = args.what
    if what in ("fcurve", "kcurve"):
        if args.seq is None:
            raise UsageError(f"probe {what} needs --seq")
        seq = parse_sequence(args.seq)
        if what == "fcurve":
            curve = probe.F_curve(seq, _t_grid(args))
        else:
            curve = probe.logK_curve(seq, args.gamma, _t_grid(args))
        rows = [{"t": t, "value": v, "d2value": d2} for t, v, d2 in curve]
        emit(rows, args.format if args.format != "table" else "csv")
        return 0
    if what == "counterexample":
        res = probe.nonmonotone_counterexample()
    elif what == "search":
        res = probe.conjecture51_search(args.trials, args.max_len, args.seed)
    elif what == "ordergap":
        res = probe.order_gap_probe(args.trials, args.max_len, args.seed)
    elif what == "kcheck":
        if args.seq is None:
            raise UsageError("probe kcheck needs --seq")
        res = probe.K_logconcavity_check(parse_sequence(args.seq), args.gamma, _t_grid(args))
    else:  # complex
        if args.seq is not None:
            res = probe.complex_modulus_check(parse_sequence(args.seq), args.gamma)
        else:
            res = probe.complex_modulus_search(args.trials, args.max_len, args.seed)
    doc = res.to_dict()
    if args.format == "table":
        label = "COUNTEREXAMPLE FOUND" if res.violated else "no counterexample found"
        sys.stdout.write(f"{res.kind.value}: {label}\n")
        sys.stdout.write(f"worst value: {res.worst_value:.6g} (threshold {res.threshold:g})\n")
        sys.stdout.write(f"evaluations: {res.evaluations}\n")
        sys.stdout.write("witness: " + json.dumps(res.worst_witness) + "\n")
        if res.extra:
            sys.stdout.write("details: " + json.dumps(res.extra) + "\n")
    else:
        emit([{"kind": doc["kind"], "worst_value": res.worst_value,
               "violated": res.violated}], args.format, doc)
    return 1 if res.violated else 0


# -- parser ------------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get("RENYILAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"RENYILAB_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--bits", action="store_true", help="report entropies in bits")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)

    dist = _Parser(add_help=False)
    dist.add_argument("--pmf", help="pmf JSON or @file")
    dist.add_argument("--geometric", help="success probability theta in (0, 1]")
    dist.add_argument("--tsg", help="two-sided geometric p,q,m")
    dist.add_argument("--order", help='Renyi order: "inf", "0", "1" or a positive decimal')

    parser = _Parser(prog="renyilab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", parents=[common, dist], help="Renyi entropies")
    p.set_defaults(handler=cmd_entropy)

    p = sub.add_parser("check", parents=[common, dist], help="structural checks and bounds")
    p.add_argument("what", choices=("logconcave", "monotone", "theorem", "tsg-lemma"))
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("extremal", parents=[common, dist], help="extremal two-sided geometric")
    p.set_defaults(handler=cmd_extremal)

    p = sub.add_parser("majorize", parents=[common], help="test A majorizes B")
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.add_argument("--tsg", help="compare against a two-sided geometric p,q,m")
    p.set_defaults(handler=cmd_majorize)

    p = sub.add_parser("rs", parents=[common, dist], help="discrete Rogers-Shephard check")
    p.set_defaults(handler=cmd_rs)

    p = sub.add_parser("scan", parents=[common], help="limits along geometric laws")
    p.add_argument("what", choices=("sharpness", "rslimit"))
    p.add_argument("--order")
    p.add_argument("--thetas", help="comma-separated theta values")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("probe", parents=[common], help="conjecture probes")
    p.add_argument("what", choices=("search", "counterexample", "kcheck", "complex",
                                    "fcurve", "kcurve", "ordergap"))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-len", type=int, default=30)
    p.add_argument("--seq", help="JSON list of positive numbers or @file")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--ts", help="comma-separated t values")
    p.set_defaults(handler=cmd_probe)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        return args.handler(args)
    except UsageError as exc:
        sys.stderr.write(f"renyilab: error: {exc}\n")
        return 2
    except (ValueError, MajorizationError) as exc:
        sys.stderr.write(f"renyilab: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
