"""Command-line front end.

    volprod volume --n 2 --p 2
    volprod mprod --n 3 --p 1.5 --method both
    volprod sweep --n 2 --p-min 1.05 --p-max 2 --steps 20 --out sweep.csv
    volprod verify all

Every command prints one JSON record on stdout.  Exit codes: 0 success,
1 a check or deviation failed, 2 usage error.
"""

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import analysis, suites
from . import volume_product as vp
from .product_engine import TruncationPolicy
from .special_core import DomainError


def _parse_p(text):
    if text.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(value) or value < 1.0:
        raise argparse.ArgumentTypeError(f"p must be >= 1 or 'inf', got {text!r}")
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _add_policy_flags(parser):
    parser.add_argument("--max-terms", type=int, default=1_000_000)
    parser.add_argument("--rel-tol", type=float, default=1e-9)
    parser.add_argument("--tail", choices=("none", "first-order", "richardson"), default="first-order")


def _policy(args):
    try:
        return TruncationPolicy(args.max_terms, args.rel_tol, args.tail.replace("-", "_"))
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _json_float(x):
    # JSON has no inf/nan literals; strings keep the record standard
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _json_float(obj)


def _emit(record, out=None):
    out = out or sys.stdout
    out.write(json.dumps(_clean(record), indent=2, sort_keys=False) + "\n")


def build_parser():
    parser = argparse.ArgumentParser(prog="volprod", description=__doc__.splitlines()[0])
    parser.add_argument("--quiet", action="store_true", help="results only, no per-check lines")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("volume", help="volume of the unit p-ball")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=_parse_p, required=True)

    p = sub.add_parser("mprod", help="volume product M(n, p)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=_parse_p, required=True)
    p.add_argument("--method", choices=("gamma", "product", "both"), default="both")
    p.add_argument("--tolerance", type=float, default=1e-7)
    _add_policy_flags(p)

    p = sub.add_parser("sweep", help="tabulate M(n, p) over a p grid")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p-min", type=_parse_p, required=True)
    p.add_argument("--p-max", type=_parse_p, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_policy_flags(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", choices=suites.SUITES + ("all",))
    p.add_argument("--n-max", type=_positive_int, default=10)
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_policy_flags(p)
    return parser


def cmd_volume(args):
    log_v = vp.log_ball_volume(args.n, args.p)
    pair = vp.holder_conjugate(args.p)
    try:
        value = vp.ball_volume(args.n, args.p)
    except OverflowError:
        value = math.inf
    return {"inputs": {"n": args.n, "p": pair.p, "q": pair.q},
            "results": {"volume": value, "log_volume": log_v}}, 0


def cmd_mprod(args):
    policy = _policy(args)
    pair = vp.holder_conjugate(args.p)
    results = {}
    code = 0
    if args.method in ("gamma", "both"):
        results["gamma"] = {"value": vp.mprod_gamma(args.n, pair.p),
                            "log_value": vp.log_mprod_gamma(args.n, pair.p)}
    if args.method in ("product", "both"):
        results["product"] = vp.mprod_product(args.n, pair.p, policy).as_dict()
    if args.method == "both":
        g, pr = results["gamma"]["value"], results["product"]["value"]
        dev = abs(pr / g - 1.0)
        results["rel_dev"] = dev
        results["within_tolerance"] = dev <= args.tolerance
        code = 0 if dev <= args.tolerance else 1
    return {"inputs": {"n": args.n, "p": pair.p, "q": pair.q, "method": args.method,
                       "tolerance": args.tolerance},
            "results": results, "policy": policy.as_dict()}, code


SWEEP_HEADER = ("p", "q", "m_gamma", "m_product", "rel_dev", "dmdp_fd", "mahler_margin", "santalo_margin")


def sweep_row(n, p, policy):
    """One sweep record; margins are relative to 4^n/n! and M(n, 2)."""
    pair = vp.holder_conjugate(p)
    m_gamma = vp.mprod_gamma(n, pair.p)
    m_product = vp.mprod_product(n, pair.p, policy).value
    try:
        fd = analysis.dM_dp_fd(n, pair.p)
    except DomainError:
        fd = math.nan
    lower = math.exp(n * math.log(4.0) - math.lgamma(n + 1.0))
    upper = vp.mprod_gamma(n, 2.0)
    return {
        "p": pair.p,
        "q": pair.q,
        "m_gamma": m_gamma,
        "m_product": m_product,
        "rel_dev": abs(m_product / m_gamma - 1.0),
        "dmdp_fd": fd,
        "mahler_margin": m_gamma / lower - 1.0,
        "santalo_margin": 1.0 - m_gamma / upper,
    }


def _sweep_grid(p_min, p_max, steps):
    if math.isinf(p_max):
        raise DomainError("p-max must be finite")
    if not (1.0 <= p_min < p_max) or steps < 2:
        raise DomainError("need 1 <= p-min < p-max and steps >= 2")
    width = p_max - p_min
    return [p_min + width * i / (steps - 1) for i in range(steps - 1)] + [p_max]


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def render_sweep(rows, fmt):
    if fmt == "json":
        return json.dumps(_clean(rows), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in SWEEP_HEADER])
    return buf.getvalue()


def cmd_sweep(args):
    policy = _policy(args)
    grid = _sweep_grid(args.p_min, args.p_max, args.steps)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, [args.n] * len(grid), grid, [policy] * len(grid)))
    else:
        rows = [sweep_row(args.n, p, policy) for p in grid]
    text = render_sweep(rows, args.format)
    if args.out == "-":
        sys.stdout.write(text)
        return None, 0
    try:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"volprod: cannot write {args.out}: {exc}", file=sys.stderr)
        return None, 2
    return {"inputs": {"n": args.n, "p_min": args.p_min, "p_max": args.p_max,
                       "steps": args.steps, "format": args.format},
            "results": {"out": args.out, "rows": len(rows)},
            "policy": policy.as_dict()}, 0


def cmd_verify(args):
    policy = _policy(args)
    names = suites.SUITES if args.suite == "all" else (args.suite,)
    results, ledger, ok = suites.run_suites(names, policy, n_max=args.n_max, jobs=args.jobs)
    if not args.quiet:
        for name, res in results.items():
            for c in res["checks"]:
                status = "PASS" if c["ok"] else "FAIL"
                print(f"{status} {name}: {c['id']} (expected {c['expected']}, observed {c['observed']})",
                      file=sys.stderr)
    return {"inputs": {"suite": args.suite, "n_max": args.n_max},
            "results": results,
            "discrepancy_ledger": ledger,
            "passed": ok,
            "policy": policy.as_dict()}, 0 if ok else 1


COMMANDS = {"volume": cmd_volume, "mprod": cmd_mprod, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    start = time.perf_counter()
    try:
        record, code = COMMANDS[args.command](args)
    except (DomainError, OverflowError) as exc:
        print(f"volprod: {exc}", file=sys.stderr)
        return 2
    if record is not None:
        record = {"command": " ".join(["volprod"] + list(sys.argv[1:] if argv is None else argv)),
                  **record,
                  "wall_time_ms": round((time.perf_counter() - start) * 1000.0, 3)}
        _emit(record)
    return code


if __name__ == "__main__":
    sys.exit(main())
