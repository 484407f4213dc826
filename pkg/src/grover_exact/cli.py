"""grover-exact: evaluate, scan, optimize, sensitivity and validate.

Angles are decimal literals in radians, optionally suffixed ``pi`` (``0.268pi``).
Grids are ``lo:hi:steps`` with ``steps`` the number of points.

Every run writes a manifest recording its inputs.  With ``--out PATH`` it goes
to ``PATH.manifest.json``, with ``--manifest PATH`` to that file, and otherwise
to stderr as a single ``# manifest`` line.  ``grover-exact --replay FILE``
re-runs the argument vector stored in a manifest.

Exit codes: 0 success, 1 validation failure, 2 argument error,
3 undefined quantity requested, 4 infeasible scan.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from datetime import datetime, timezone

from . import __version__, kernels, scanner, validation
from .core import (
    DomainError,
    PhaseConfig,
    SearchInstance,
    UndefinedCoherence,
    coherence_ratio,
    success_probability,
    success_probability_xi0,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_UNDEFINED, EXIT_INFEASIBLE = 0, 1, 2, 3, 4

EVAL_FIELDS = ["lambda", "xi", "alpha", "beta", "alpha_over_pi", "beta_over_pi", "iters", "p", "re_c", "im_c"]
SCAN_FIELDS = ["lambda", "p"]
OPTIMIZE_FIELDS = ["m", "threshold", "alpha", "alpha_over_pi", "lambda_min", "p_min_over_range", "roots"]
SENSITIVITY_FIELDS = ["lambda", "alpha", "alpha_over_pi", "iters", "p_xi1", "p_xi0", "ratio"]
VALIDATE_FIELDS = ["name", "passed", "max_error", "tolerance", "samples"]

SENSITIVITY_ASSUMPTION = (
    "phase matching beta = -alpha with xi = 1 as reference; the published ~60% "
    "figure is read as alpha = 0.268pi, m = 3"
)

_ANGLE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(pi)?$")


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """``"0.5pi"`` -> 0.5 * math.pi; bare decimals are radians."""
    s = text.strip()
    if s in ("pi", "+pi", "-pi"):
        return -math.pi if s.startswith("-") else math.pi
    match = _ANGLE.match(s)
    if not match or match.group(1) is None:
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}; expected e.g. 1.2 or 0.268pi")
    value = float(match.group(1))
    return value * math.pi if match.group(2) else value


def parse_grid(text: str, angle=False):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; expected lo:hi:steps")
    conv = parse_angle if angle else float
    try:
        lo, hi, steps = conv(parts[0]), conv(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}: {exc}") from None
    if steps < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; need lo <= hi and steps >= 1")
    return (lo, hi, steps)


def parse_iters(text: str):
    """``3``, ``1,2,3`` or ``1-6``."""
    out = []
    try:
        for part in text.split(","):
            if "-" in part:
                a, b = part.split("-", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid iteration list {text!r}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"invalid iteration list {text!r}")
    return out


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _angle_record(x):
    return {"radians": x, "over_pi": x / math.pi}


def fmt(x) -> str:
    """CSV cell: 17 significant digits for floats, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (list, tuple)):
        return ";".join(fmt(v) for v in x)
    return str(x)


def to_csv(fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(row[f]) for f in fields])
    return buf.getvalue()


def to_text(fields, rows) -> str:
    lines = []
    for row in rows:
        lines.extend(f"{f} = {fmt(row[f])}" for f in fields)
        if len(rows) > 1:
            lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def render(kind, fields, rows, fmt_name, extra=None) -> str:
    if fmt_name == "json":
        doc = {"schema": f"grover-exact/{kind}/{SCHEMA_VERSION}", "rows": rows}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"
    if fmt_name == "csv":
        return to_csv(fields, rows)
    return to_text(fields, rows)


# -- subcommands -------------------------------------------------------------


def cmd_eval(args):
    phases = PhaseConfig(args.alpha, args.beta)
    try:
        inst = SearchInstance(args.lam, args.xi, args.iters)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    row = {
        "lambda": inst.lam,
        "xi": inst.xi,
        "alpha": phases.alpha,
        "beta": phases.beta,
        "alpha_over_pi": phases.alpha / math.pi,
        "beta_over_pi": phases.beta / math.pi,
        "iters": inst.m,
        "p": success_probability(inst, phases),
        "re_c": None,
        "im_c": None,
    }
    code = EXIT_OK
    try:
        c = coherence_ratio(inst, phases)
        row["re_c"], row["im_c"] = c.real, c.imag
    except UndefinedCoherence as exc:
        if args.coherence:
            print(f"grover-exact: error: {exc}", file=sys.stderr)
            code = EXIT_UNDEFINED
    params = {
        "lambda": inst.lam,
        "xi": inst.xi,
        "alpha": _angle_record(phases.alpha),
        "beta": _angle_record(phases.beta),
        "iters": inst.m,
    }
    return render("eval", EVAL_FIELDS, [row], args.format), params, {}, code


def cmd_scan(args):
    beta = -args.alpha if args.beta is None else args.beta
    table = scanner.probability_profile(args.alpha, args.iters, args.xi, args.lambda_grid, beta=beta)
    rows = [{"lambda": float(lam), "p": float(p)} for lam, p in table]
    summary = None
    if args.threshold is not None:
        summary = {
            "threshold": args.threshold,
            "lambda_min": scanner.lambda_lower_bound(
                args.alpha, args.iters, args.threshold,
                lambda_grid=args.lambda_grid, refine_tol=args.refine_tol,
            ),
            "roots": scanner.exact_success_roots(args.alpha, args.iters, lambda_grid=args.lambda_grid),
        }
    params = {
        "alpha": _angle_record(PhaseConfig(args.alpha, beta).alpha),
        "beta": _angle_record(PhaseConfig(args.alpha, beta).beta),
        "xi": args.xi,
        "iters": args.iters,
        "threshold": args.threshold,
    }
    settings = {"lambda_grid": list(args.lambda_grid), "refine_tol": args.refine_tol}
    extra = {"summary": summary} if summary else None
    out = render("scan", SCAN_FIELDS, rows, args.format, extra)
    return out, params, {**settings, "summary": summary}, EXIT_OK


def cmd_optimize(args):
    base = scanner.ScanConfig(
        m=args.iters[0],
        threshold=args.threshold,
        alpha_grid=args.alpha_grid,
        lambda_grid=args.lambda_grid,
        refine_tol=args.refine_tol,
    )
    results = scanner.alpha_table(args.iters, args.threshold, base)
    rows = [
        {k: r.to_dict()[k] for k in OPTIMIZE_FIELDS} for r in results
    ]
    params = {"iters": args.iters, "threshold": args.threshold}
    settings = {
        "alpha_grid": [_angle_record(args.alpha_grid[0]), _angle_record(args.alpha_grid[1]), args.alpha_grid[2]],
        "lambda_grid": list(args.lambda_grid),
        "refine_tol": args.refine_tol,
    }
    return render("optimize", OPTIMIZE_FIELDS, rows, args.format), params, settings, EXIT_OK


def cmd_sensitivity(args):
    phases = PhaseConfig.matched(args.alpha)
    row = {
        "lambda": args.lam,
        "alpha": phases.alpha,
        "alpha_over_pi": phases.alpha / math.pi,
        "iters": args.iters,
        "p_xi1": success_probability(SearchInstance(args.lam, 1.0, args.iters), phases),
        "p_xi0": success_probability_xi0(args.lam, phases, args.iters),
        "ratio": scanner.xi_sensitivity(args.lam, phases.alpha, args.iters),
    }
    params = {"lambda": args.lam, "alpha": _angle_record(phases.alpha), "iters": args.iters}
    settings = {"assumptions": [SENSITIVITY_ASSUMPTION]}
    extra = {"assumptions": [SENSITIVITY_ASSUMPTION]}
    return render("sensitivity", SENSITIVITY_FIELDS, [row], args.format, extra), params, settings, EXIT_OK


def cmd_validate(args):
    results = validation.run_checks(seed=args.seed, samples=args.samples, n_max=args.n_max)
    rows = [r.to_dict() for r in results]
    ok = all(r.passed for r in results)
    if args.format == "text":
        lines = [
            f"{'PASS' if r.passed else 'FAIL'} {r.name} max_error={r.max_error:.3e} tol={r.tolerance:.1e} n={r.samples}"
            for r in results
        ]
        lines.append(f"{'PASS' if ok else 'FAIL'} overall")
        out = "\n".join(lines) + "\n"
    else:
        out = render("validate", VALIDATE_FIELDS, rows, args.format, {"seed": args.seed, "passed": ok})
    params = {"seed": args.seed, "n_max": args.n_max, "samples": args.samples}
    return out, params, {}, EXIT_OK if ok else EXIT_VALIDATION


# -- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-0.5pi" and "-1:0:10" through as values, not option flags
        self._negative_number_matcher = re.compile(r"^-(?:\d|\.\d|pi$)")

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="grover-exact", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--replay", metavar="MANIFEST", help="re-run the argv recorded in a manifest")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, default_format):
        p.add_argument("--format", choices=["json", "csv", "text"], default=default_format)
        p.add_argument("--out", metavar="PATH", help="write output here; manifest goes to PATH.manifest.json")
        p.add_argument("--manifest", metavar="PATH", help="write the run manifest here")

    p = sub.add_parser("eval", help="success probability and coherence ratio at one point")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--alpha", type=parse_angle, required=True)
    p.add_argument("--beta", type=parse_angle, required=True)
    p.add_argument("--iters", type=_nonneg_int, required=True)
    p.add_argument("--coherence", action="store_true", help="fail with exit 3 if C is undefined")
    common(p, "text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="P over a lambda grid at fixed phases")
    p.add_argument("--alpha", type=parse_angle, required=True)
    p.add_argument("--beta", type=parse_angle, default=None, help="defaults to -alpha")
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--iters", type=_nonneg_int, required=True)
    p.add_argument("--lambda-grid", type=parse_grid, default=scanner.LAMBDA_GRID)
    p.add_argument("--threshold", type=float, default=None, help="also report the lambda lower bound")
    p.add_argument("--refine-tol", type=float, default=1e-6)
    common(p, "csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="best alpha = -beta per iteration count")
    p.add_argument("--iters", type=parse_iters, required=True, help="e.g. 3, 1,2,3 or 1-6")
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--alpha-grid", type=lambda s: parse_grid(s, angle=True), default=scanner.ALPHA_GRID)
    p.add_argument("--lambda-grid", type=parse_grid, default=scanner.LAMBDA_GRID)
    p.add_argument("--refine-tol", type=float, default=1e-6)
    common(p, "csv")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sensitivity", help="P(xi=0) / P(xi=1) for alpha = -beta")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--alpha", type=parse_angle, required=True)
    p.add_argument("--iters", type=_nonneg_int, required=True)
    common(p, "text")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("validate", help="oracle-equivalence and published-number self-checks")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--n-max", type=_nonneg_int, default=6, help="largest register for full-circuit checks")
    p.add_argument("--samples", type=_nonneg_int, default=2000)
    common(p, "json")
    p.set_defaults(func=cmd_validate)
    return parser


def _manifest(args, argv, params, settings):
    return {
        "schema": f"grover-exact/manifest/{SCHEMA_VERSION}",
        "tool": "grover-exact",
        "version": __version__,
        "subcommand": args.command,
        "argv": list(argv),
        "parameters": params,
        "settings": {**settings, "backend": kernels.BACKEND},
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.replay:
        try:
            with open(args.replay, encoding="utf-8") as fh:
                argv = json.load(fh)["argv"]
        except (OSError, KeyError, ValueError) as exc:
            parser.error(f"cannot replay {args.replay}: {exc}")
        args = parser.parse_args(argv)
    if args.command is None:
        parser.error("a subcommand is required")

    try:
        output, params, settings, code = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"grover-exact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except scanner.NoFeasibleRange as exc:
        print(f"grover-exact: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    manifest = _manifest(args, argv, params, settings)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    if args.manifest or args.out:
        with open(args.manifest or args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    else:
        print("# manifest " + json.dumps(manifest), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
