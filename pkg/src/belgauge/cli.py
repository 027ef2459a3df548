"""Command-line interface.

Usage:
    belgauge analyze --input state.json [--settings 2 2]
    belgauge coherent-scan --alpha 0.1 3.0 30 [--family 1] [--format csv]
    belgauge source-op --input state.json --dilate right --s 2
    belgauge chsh --input state.json [--seed 0]
    belgauge selftest [--seed 0] [--tol slack=1e-12]

Exit codes: 0 success, 1 input error, 2 invariant or verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .bounds import assemble_report
from .chsh import SEESAW_DIM_CAP, chsh_lower_bound, seesaw_chsh
from .coherent import alpha_grid, scan_csv, scan_row
from .entmeas import entanglement_report, negativity, negativity_pure
from .errors import BelgaugeError
from .srcop import DIMENSION_CAP, build_source_operator, dilated_side, source_trace_norm_bound, verify_dilation
from .states import (
    DensityOperator,
    PureBipartiteState,
    density_to_pure,
    load_state,
    pure_to_density,
    schmidt_decompose,
)
from .tolerances import parse_overrides

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def _load_pure_or_mixed(path) -> PureBipartiteState | DensityOperator:
    state = load_state(path)
    if isinstance(state, DensityOperator) and state.is_pure():
        return density_to_pure(state)
    return state


def _require_pure(path) -> PureBipartiteState:
    state = load_state(path)
    return density_to_pure(state) if isinstance(state, DensityOperator) else state


# --- commands ---------------------------------------------------------------


def cmd_analyze(args, tol) -> int:
    state = _load_pure_or_mixed(args.input)
    s1, s2 = args.settings if args.settings else (None, None)
    d1, d2 = state.shape.d1, state.shape.d2
    seesaw_ok = max(d1, d2) <= SEESAW_DIM_CAP
    lower = None
    if isinstance(state, PureBipartiteState) or seesaw_ok:
        lower = chsh_lower_bound(state, restarts=args.restarts, seed=args.seed)
    report = assemble_report(state, s1, s2, chsh_lower=lower)

    checks = {"bracket": report.upper is None or report.lower <= report.upper + tol["slack"]}
    doc = {"kind": "pure" if isinstance(state, PureBipartiteState) else "density", "d1": d1, "d2": d2}
    doc["nonlocality"] = report.to_json()

    if isinstance(state, PureBipartiteState):
        spec = schmidt_decompose(state)
        rho = pure_to_density(state)
        ent = entanglement_report(spec, state.shape.min_dim, lower_bound=lower or 1.0, rho=rho)
        doc["schmidt"] = {
            "coefficients": [float(c) for c in spec.coefficients],
            "rank": spec.rank,
        }
        doc["entanglement"] = ent.to_json()
        eq44 = abs(ent.negativity - negativity_pure(spec))
        doc["entanglement"]["negativity_schmidt_route_diff"] = eq44
        checks["negativity_routes"] = eq44 <= tol["negativity"]
        checks["relations"] = ent.worst_slack() >= -tol["slack"]
        checks["bound_chain"] = (
            report.bound_corollary <= report.bound_corollary_rank + tol["slack"]
            and report.bound_corollary_rank <= 2 * state.shape.min_dim - 1 + tol["slack"]
        )
    else:
        doc["entanglement"] = {
            "negativity": negativity(state),
            "concurrence": None,
            "note": "mixed-state concurrence (convex roof) is not computed",
        }
    doc["checks"] = checks
    doc["pass"] = all(checks.values())
    print(_dump(doc))
    return EXIT_OK if doc["pass"] else EXIT_INVARIANT


def cmd_coherent_scan(args, tol) -> int:
    start, stop, count = args.alpha
    grid = sorted(float(a) for a in alpha_grid(start, stop, int(count)))
    rows = []
    ok = True
    if args.format == "csv":
        sys.stdout.write(scan_csv([]))
    for alpha in grid:
        row = scan_row(alpha, args.family, args.cutoff)
        rows.append(row)
        if row.bound_numeric is not None and abs(row.bound_numeric - row.bound_eq63) > tol["spectrum"]:
            ok = False
        if args.format == "csv":
            sys.stdout.write(scan_csv([row]).split("\n", 1)[1])
            sys.stdout.flush()
    if args.format == "json":
        print(_dump({"family": args.family, "rows": [r.to_json() for r in rows], "pass": ok}))
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_source_op(args, tol) -> int:
    psi = _require_pure(args.input)
    dim = dilated_side(psi.shape, args.dilate, args.s)
    if dim > DIMENSION_CAP:
        raise BelgaugeError(f"dilated dimension {dim} exceeds the cap {DIMENSION_CAP}")
    spec = schmidt_decompose(psi)
    t = build_source_operator(spec, args.dilate, args.s)
    bound = source_trace_norm_bound(spec)
    rep = verify_dilation(t, pure_to_density(psi), trials=args.trials, seed=args.seed, tol=tol["dilation"], bound=bound)
    doc = rep.to_json()
    doc["dilated_dim"] = dim
    within = rep.trace_norm <= bound + tol["slack"]
    doc["trace_norm_within_bound"] = within
    doc["pass"] = rep.passed and within
    print(_dump(doc))
    return EXIT_OK if doc["pass"] else EXIT_INVARIANT


def cmd_chsh(args, tol) -> int:
    state = load_state(args.input)
    rho = pure_to_density(state) if isinstance(state, PureBipartiteState) else state
    res = seesaw_chsh(rho, restarts=args.restarts, seed=args.seed)
    print(_dump(res.to_json()))
    return EXIT_OK


def cmd_selftest(args, tol) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.seed, tol)
    failed = [r for r in results if not r.passed]
    doc = {
        "seed": args.seed,
        "tolerances": tol,
        "properties": [r.to_json() for r in results],
        "passed": len(results) - len(failed),
        "failed": len(failed),
    }
    print(_dump(doc))
    return EXIT_INVARIANT if failed else EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="belgauge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"belgauge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a named tolerance")

    p = sub.add_parser("analyze", help="bounds bracket and entanglement relations for a state file")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--settings", nargs=2, type=int, metavar=("S1", "S2"))
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--format", choices=["json"], default="json")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("coherent-scan", help="entangled coherent state curves over an amplitude grid")
    p.add_argument("--alpha", nargs=3, type=float, required=True, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--family", type=int, choices=[1, 2], default=1)
    p.add_argument("--cutoff", type=int, default=None, metavar="N")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_coherent_scan)

    p = sub.add_parser("source-op", help="build and verify a source operator")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--dilate", choices=["left", "right"], default="right")
    p.add_argument("--s", type=int, required=True, metavar="S")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--format", choices=["json"], default="json")
    common(p)
    p.set_defaults(func=cmd_source_op)

    p = sub.add_parser("chsh", help="see-saw CHSH optimization")
    p.add_argument("--input", required=True, metavar="PATH")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--format", choices=["json"], default="json")
    common(p)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("selftest", help="run the seeded invariant suite")
    p.add_argument("--format", choices=["json"], default="json")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = parse_overrides(args.tol)
        if getattr(args, "s", 1) < 1:
            raise BelgaugeError("--s must be >= 1")
        if args.command == "analyze" and args.settings and min(args.settings) < 1:
            raise BelgaugeError("--settings values must be >= 1")
        return args.func(args, tol)
    except (BelgaugeError, OSError) as exc:
        print(f"belgauge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
