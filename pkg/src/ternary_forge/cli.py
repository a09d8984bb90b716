"""``ternary-forge`` command line."""
from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

from . import experiments as ex
from .errors import TernaryForgeError
from .report import ExperimentReport, ResultCache, environment_stamp

DEFAULT_OUT = "ternary_forge_results"
COUNT_CAP = 10**9
DENSITY_XS = (10**6, 10**7, 10**8, 10**9)
SUITES = ("golden", "main2", "bounds", "range", "ngb", "identity", "kaplan")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_int(text: str) -> int:
    """Integers written as 1000000, 1e6, 10**6 or 10^6."""
    s = text.strip().replace("_", "")
    m = re.fullmatch(r"(\d+)\s*(?:\*\*|\^)\s*(\d+)", s)
    if m:
        return int(m.group(1)) ** int(m.group(2))
    m = re.fullmatch(r"(\d+)(?:\.(\d*))?[eE](\d+)", s)
    if m:
        whole, frac, exp = m.group(1), m.group(2) or "", int(m.group(3))
        if len(frac.rstrip("0")) > exp:
            raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
        return int((whole + frac).ljust(len(whole) + exp, "0")[: len(whole) + exp])
    if re.fullmatch(r"-?\d+", s):
        return int(s)
    raise argparse.ArgumentTypeError(f"{text!r} is not an integer")


def _positive(text: str) -> int:
    v = parse_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed(text: str) -> int:
    v = parse_int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=DEFAULT_OUT, help="directory for reports, plot data and the cache")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--no-cache", action="store_true", help="recompute even if a cached report exists")

    parser = argparse.ArgumentParser(prog="ternary-forge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", parents=[common], help="C1, C2 and the prime reciprocal sum")

    p = sub.add_parser("count", parents=[common], help="exact counts against predicted main terms")
    p.add_argument("--x", type=_positive, action="append", required=True)
    p.add_argument("--constraint", choices=ex.CONSTRAINTS, default="ternary")
    p.add_argument("--a", type=parse_int, default=1)
    p.add_argument("--x-cap", type=_positive, default=COUNT_CAP)

    p = sub.add_parser("coeffs", parents=[common], help="coefficients of Phi_n (or Psi_n)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--inverse", action="store_true", help="Psi_n = (x^n - 1)/Phi_n instead")

    p = sub.add_parser("audit", parents=[common], help="property suites; nonzero exit on any violation")
    for name in SUITES:
        p.add_argument(f"--{name}", action="store_true", help=f"run the {name} suite")
    p.add_argument("--exhaustive-cap", type=_positive, default=ex.DEFAULT_EXHAUSTIVE_CAP)
    p.add_argument("--samples", type=parse_int, default=None,
                   help="random triples per sampled suite (default: 10000 main2, 1000 bounds, 500 kaplan)")
    p.add_argument("--p-max", type=_positive, default=ex.DEFAULT_P_MAX)
    p.add_argument("--seed", type=_seed, default=0)

    p = sub.add_parser("density", parents=[common], help="density table and plot-data files")
    p.add_argument("--x", type=_positive, action="append")
    p.add_argument("--a", type=parse_int, default=1)
    p.add_argument("--x-cap", type=_positive, default=COUNT_CAP)

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the result cache")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--clear", action="store_true")
    g.add_argument("--list", action="store_true")
    return parser


def _emit(report: ExperimentReport, args) -> None:
    text = report.render(args.format)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{report.experiment}.{args.format}").write_bytes(text.encode("utf-8"))
    sys.stdout.write(text)
    sys.stdout.flush()


def _cached(args, experiment: str, params: dict, compute) -> ExperimentReport:
    cache = ResultCache.for_output(args.out)
    if not args.no_cache:
        hit = cache.load(experiment, params)
        if hit is not None:
            return hit
    t0 = time.perf_counter()
    report = compute()
    report.sort_rows()
    report.environment = environment_stamp(time.perf_counter() - t0)
    cache.store(report, params)
    return report


def _check_cap(parser, xs, cap):
    big = [x for x in xs if x > cap]
    if big:
        parser.error(f"x = {big[0]} exceeds --x-cap {cap}")


def cmd_constants(args) -> int:
    report, ok = ex.constants_report()
    report.environment = environment_stamp(0.0)
    report.environment.pop("timestamp")
    report.environment.pop("wall_time_s")
    _emit(report, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_count(args, parser) -> int:
    xs = sorted(set(args.x))
    _check_cap(parser, xs, args.x_cap)
    params = {"x": xs, "constraint": args.constraint}
    if args.constraint == "mod-pq":
        params["a"] = args.a
    report = _cached(args, "count", params,
                     lambda: ex.count_report(xs, args.constraint, args.a, args.threads))
    _emit(report, args)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    params = {"n": args.n, "inverse": args.inverse}
    report = _cached(args, "coeffs", params, lambda: ex.coeffs_report(args.n, args.inverse))
    _emit(report, args)
    return EXIT_OK


def cmd_audit(args) -> int:
    chosen = [s for s in SUITES if getattr(args, s)] or list(SUITES)
    n = args.samples
    cap, seed = args.exhaustive_cap, args.seed
    results = []
    for name in chosen:
        if name == "golden":
            results.append(ex.audit_golden())
        elif name == "main2":
            results.append(ex.audit_main2(cap, ex.DEFAULT_SAMPLES if n is None else n, seed))
        elif name == "bounds":
            # one pass over Phi_n serves both suites when both are requested
            results.append(ex.audit_phi_scan(cap, 1000 if n is None else n, seed,
                                             ranges="range" in chosen))
        elif name == "range":
            if "bounds" in chosen:
                continue
            results.append(ex.audit_phi_scan(cap, 0, seed, bounds=False))
        elif name == "ngb":
            results.append(ex.audit_closed_forms(args.p_max))
        elif name == "identity":
            results.append(ex.audit_identity())
        elif name == "kaplan":
            results.append(ex.audit_kaplan(500 if n is None else n, seed))
        print(f"[{results[-1].name}] checked {results[-1].checked}, "
              f"violations {len(results[-1].violations)}", file=sys.stderr)
    params = {"suites": chosen, "exhaustive_cap": cap, "samples": n, "p_max": args.p_max, "seed": seed}
    report = ex.audit_report(results, params)
    report.environment = environment_stamp(sum(r.seconds for r in results))
    _emit(report, args)
    failed = [r for r in results if not r.ok]
    for r in failed:
        for v in r.violations:
            print(f"VIOLATION [{r.name}] {v}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_density(args, parser) -> int:
    xs = sorted(set(args.x or DENSITY_XS))
    _check_cap(parser, xs, args.x_cap)
    params = {"x": xs, "a": args.a}
    report = _cached(args, "density", params, lambda: ex.density_report(xs, args.a, args.threads))
    _emit(report, args)
    for path in ex.write_plot_data(report, Path(args.out)):
        print(f"plot data: {path}", file=sys.stderr)
    return EXIT_OK


def cmd_cache(args) -> int:
    cache = ResultCache.for_output(args.out)
    if args.clear:
        print(f"removed {cache.clear()} cached report(s) from {cache.root}")
    else:
        for path in cache.entries():
            print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "constants":
            return cmd_constants(args)
        if args.command == "count":
            return cmd_count(args, parser)
        if args.command == "coeffs":
            return cmd_coeffs(args)
        if args.command == "audit":
            return cmd_audit(args)
        if args.command == "density":
            return cmd_density(args, parser)
        return cmd_cache(args)
    except TernaryForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
