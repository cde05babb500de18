"""Command-line front end.

    symcap capacity --region simplex.json
    symcap mahler --lp 2 1
    symcap phi-scan --n 2 3 --csv scan.csv
    symcap xp --p 2 --check-area --seed 7
    symcap verify --suite all
    symcap report --out report.md

Exit status: 0 when every check passes, 1 when one fails, 2 on bad input.
Output selectors ``--json``, ``--csv`` and ``--svg`` take a path; ``-`` is stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import bodies as B
from . import lagrangian as L
from . import mahler as M
from . import toric as T
from .oracles import mc_check
from .records import VerificationRecord
from .schema import parse_body, parse_region
from .suites import DEFAULT_SEED, SUITES, SuiteConfig, run_suites
from .svg import line_plot

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --------------------------------------------------------------------------- helpers


def _exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"p must lie in [1, inf], got {text}")
    return p


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(path: str | None, text: str) -> None:
    if path is None:
        return
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def _record_json(r: VerificationRecord) -> dict:
    return _jsonable({"claim_id": r.claim_id, "slack": r.slack, "tolerance": r.tolerance,
                      "passed": r.passed, "quantities": r.quantities})


def _records_csv(records) -> str:
    return _csv_text(["claim_id", "slack", "tolerance", "passed"], [r.csv_row() for r in records])


def _finish(records: list[VerificationRecord]) -> int:
    failed = [r for r in records if not r.passed]
    for r in failed:
        print(json.dumps({"failed": _record_json(r)}), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _print(args, text: str) -> None:
    # human-readable output unless a machine format goes to stdout
    if "-" not in (args.json, args.csv, args.svg):
        print(text)


# --------------------------------------------------------------------------- commands


def cmd_capacity(args) -> int:
    if bool(args.region) == bool(args.body):
        raise InputError("give exactly one of --region or --body")
    if args.body:
        name = args.body
        rep = L.capacity_cube_product(parse_body(_read(args.body)))
        kind = "cube product"
    else:
        name = args.region
        region = parse_region(_read(args.region))
        cls = T.classify(region)
        if cls.convex:
            rep = T.capacity_convex_toric(region)
        elif cls.concave:
            rep = T.gromov_width_concave(region, tol=args.tol)
            lo, hi = T.capacity_bounds_concave(region)
            rep.quantities["upper_bound"] = hi
        else:
            raise InputError(f"region is neither convex nor concave; witnesses: {cls.witnesses}")
        kind = cls.kind
    _print(args, f"capacity {rep.value!r}\nprovenance {rep.provenance}\nclass {kind}")
    _emit(args.csv, _csv_text(["region", "capacity", "provenance"], [[Path(name).stem, repr(rep.value),
                                                                     rep.provenance]]))
    _emit(args.json, json.dumps(_jsonable({"region": name, "capacity": rep.value, "provenance": rep.provenance,
                                           "class": kind, "quantities": rep.quantities,
                                           "checks": [_record_json(r) for r in rep.checks]}), indent=2) + "\n")
    return _finish(rep.checks)


def cmd_mahler(args) -> int:
    if (args.lp is None) == (args.body is None):
        raise InputError("give exactly one of --lp N P or --body FILE")
    if args.body:
        body = parse_body(_read(args.body))
        value = B.mahler(body)
        _print(args, repr(value))
        _emit(args.json, json.dumps({"body": args.body, "dim": body.dim, "mahler": value}) + "\n")
        _emit(args.csv, _csv_text(["body", "dim", "mahler"], [[Path(args.body).stem, body.dim, repr(value)]]))
        return EXIT_OK
    n_text, p_text = args.lp
    try:
        n = _positive_int(n_text)
        p = _exponent(p_text)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise InputError(f"--lp expects N P: {exc}") from None
    value = M.mahler_lp(n, p)
    phi = M.phi(n, p) if 1 <= p <= 2 else None
    deriv = M.mahler_derivative(n, p) if phi is not None else None
    _print(args, f"{value!r}")
    _emit(args.json, json.dumps(_jsonable({"n": n, "p": p, "mahler": value, "phi": phi,
                                           "derivative": deriv})) + "\n")
    _emit(args.csv, _csv_text(["n", "p", "mahler", "phi", "derivative"],
                              [[n, p_text, repr(value), "" if phi is None else repr(phi),
                                "" if deriv is None else repr(deriv)]]))
    return EXIT_OK


def cmd_phi_scan(args) -> int:
    scans = [M.monotonicity_scan(n, args.grid) for n in args.n]
    records = [r for s in scans for r in s.records]
    lines = [f"n={s.n:2d} M(1)={s.values[0]:.12g} M(2)={s.values[-1]:.12g} "
             f"min phi(open)={s.phi_values[1:-1].min():.6g} {'ok' if s.passed else 'FAIL'}" for s in scans]
    _print(args, "\n".join(lines))
    if args.csv:
        buf = io.StringIO()
        for k, s in enumerate(scans):
            s.write_csv(buf, header=k == 0)
        _emit(args.csv, buf.getvalue().replace("\r\n", "\n"))
    _emit(args.json, json.dumps({"records": [_record_json(r) for r in records]}, indent=2) + "\n")
    if args.svg:
        series = [(s.p_grid, s.phi_values, f"n={s.n}") for s in scans]
        _emit(args.svg, line_plot(series, "Φ_n(p) on [1, 2]", "p", "Φ_n(p)"))
    return _finish(records)


def cmd_xp(args) -> int:
    p = args.p
    rep = L.xp_capacity(p)
    records = list(rep.checks)
    if p == 2:
        first, second = rep.quantities["convex_branch"], rep.quantities["concave_branch"]
        records.append(VerificationRecord.equality("xp-capacity/p2-branches/cli", first, second, args.tol))
        lines = [f"branch values {first!r} {second!r}"]
    else:
        lines = [f"branch {rep.quantities['branch']}"]
    lines.append(f"capacity {rep.value!r}")
    lines.append(f"provenance {rep.provenance}")
    curve = L.xp_curve_points(p, args.curve_points)
    out = {"p": p, "capacity": rep.value, "provenance": rep.provenance, "quantities": rep.quantities}
    if args.check_area:
        area = L.omega_p_area(p, args.curve_points)
        dom = L.XpDomain(p)
        cfg = SuiteConfig(seed=args.seed, mc_samples=args.mc_samples, threads=args.threads)
        ok, ests = mc_check(area, dom.contains, dom.bbox(), args.mc_samples, cfg.rng(100),
                              threads=args.threads)
        est = ests[-1]
        records.append(VerificationRecord.boolean("xp-transport/mc/cli", ok, area=area, mc_mean=est.mean,
                                                  mc_std_error=est.std_error, attempts=len(ests)))
        lines.append(f"area {area!r} (closed form {dom.volume()!r})")
        lines.append(f"mc volume {est.mean!r} +- {est.std_error!r} after {len(ests)} attempt(s): "
                     f"{'within' if ok else 'outside'} 3 sigma")
        out.update(area=area, closed_form_volume=dom.volume(), mc_mean=est.mean, mc_std_error=est.std_error)
    _print(args, "\n".join(lines))
    _emit(args.csv, _csv_text(["v", "w1", "w2"], [[repr(float(c)) for c in row] for row in curve]))
    out["records"] = [_record_json(r) for r in records]
    _emit(args.json, json.dumps(_jsonable(out), indent=2) + "\n")
    if args.svg:
        w = curve[:, 1:]
        _emit(args.svg, line_plot([(np.r_[0.0, w[:, 0], 0.0], np.r_[0.0, w[:, 1], 0.0], f"p={p}")],
                                  f"Ω_p boundary, p = {p}", "w1", "w2"))
    return _finish(records)


def cmd_verify(args) -> int:
    cfg = SuiteConfig(seed=args.seed, mc_samples=args.mc_samples, threads=args.threads)
    try:
        results = run_suites(args.suite, cfg)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    records = [r for rs in results.values() for r in rs]
    lines = []
    for name, rs in results.items():
        bad = [r for r in rs if not r.passed]
        lines.append(f"{name:14s} {len(rs):4d} records  {'PASS' if not bad else f'FAIL ({len(bad)})'}")
    lines.append(f"total {len(records)} records, {sum(not r.passed for r in records)} failed")
    _print(args, "\n".join(lines))
    _emit(args.csv, _records_csv(records))
    _emit(args.json, json.dumps({"seed": args.seed, "suites": {k: [_record_json(r) for r in v]
                                                               for k, v in results.items()}}, indent=2) + "\n")
    return _finish(records)


def cmd_report(args) -> int:
    from .report import build_report

    cfg = SuiteConfig(seed=args.seed, mc_samples=args.mc_samples, threads=args.threads)
    text, ok = build_report(cfg)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-8,
                        help="tolerance of equality checks made by the command (default 1e-8)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--threads", type=_positive_int, default=1, help="worker threads (default 1)")
    common.add_argument("--mc-samples", type=_positive_int, default=1_000_000,
                        help="Monte Carlo samples per estimate (default 1e6)")
    common.add_argument("--json", metavar="PATH", help="write JSON output ('-' for stdout)")
    common.add_argument("--csv", metavar="PATH", help="write CSV output ('-' for stdout)")
    common.add_argument("--svg", metavar="PATH", help="write an SVG plot where one applies")

    parser = argparse.ArgumentParser(prog="symcap", description="Symplectic capacities of convex "
                                     "and toric domains, Mahler volumes and their checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", parents=[common], help="capacity of a toric region or cube product")
    p.add_argument("--region", metavar="FILE", help="region description (JSON)")
    p.add_argument("--body", metavar="FILE", help="body A; computes c(B_inf x_L A)")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("mahler", parents=[common], help="Mahler volume")
    p.add_argument("--lp", nargs=2, metavar=("N", "P"), help="l_p-ball in dimension N")
    p.add_argument("--body", metavar="FILE", help="body description (JSON)")
    p.set_defaults(func=cmd_mahler)

    p = sub.add_parser("phi-scan", parents=[common], help="monotonicity scan of M_n on [1, 2]")
    p.add_argument("--n", type=_positive_int, nargs="+", default=list(range(2, 11)))
    p.add_argument("--grid", type=_positive_int, default=1000, help="grid points in [1, 2]")
    p.set_defaults(func=cmd_phi_scan)

    p = sub.add_parser("xp", parents=[common], help="capacity and moment curve of X_p")
    p.add_argument("--p", type=_exponent, required=True)
    p.add_argument("--check-area", action="store_true", help="compare the Ω_p area with MC volume of X_p")
    p.add_argument("--curve-points", type=_positive_int, default=L.DEFAULT_CURVE_POINTS)
    p.set_defaults(func=cmd_xp)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", nargs="+", default=["all"], help=f"'all' or any of: {', '.join(SUITES)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", parents=[common], help="write a markdown summary of all checks")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:  # SchemaError and RegionError included
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except T.ConsistencyError as exc:
        print(json.dumps({"failed": {"claim_id": "consistency", "message": str(exc)}}), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
