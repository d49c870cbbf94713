"""Command-line interface.

Exit codes: 0 ok, 1 infeasible plan or failed check, 2 usage/parse error,
3 solver or internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cuts import csv_header, csv_row, enumerate_all_cuts, enumerate_stage_cuts
from .flowgraph import build_flow_network, min_cut
from .lp import DEFAULT_EPSILON, SolverError, build_protection_lp
from .model import (
    PLAN_FORMAT_VERSION,
    PlanFormatError,
    ProtectionPlan,
    SpecError,
    check_feasible,
    compute_metrics,
    format_decimal,
    format_fraction,
    validate_spec,
)
from .rlnc import DEFAULT_MAX_G, packetize, run_batch
from .strategies import STRATEGIES, PlanningError, make_plan, rows_to_csv, sweep

CSV_FORMAT_VERSION = "1"

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dual(x: Fraction) -> str:
    return f"{format_fraction(x)} ({format_decimal(x)})"


def _int_range(text: str) -> list[int]:
    """``"5"``, ``"1..9"`` or ``"1,3,5"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo_i, hi_i = int(lo), int(hi)
                if lo_i > hi_i:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo_i, hi_i + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"bad integer range {text!r}") from exc
    return out


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _spec(args):
    return validate_spec(args.n, args.k, _rational(args.M))


def _add_spec_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--n", type=int, required=required, help="initial node count")
    p.add_argument("--k", type=int, required=required, help="surviving node count")
    p.add_argument("--M", default="1", help="original data size (default 1)")


def _load_plan(path: str) -> ProtectionPlan:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PlanFormatError(str(exc)) from exc
    return ProtectionPlan.from_json(text)


def _plan_from_args(args) -> ProtectionPlan:
    if getattr(args, "plan", None):
        return _load_plan(args.plan)
    if args.n is None or args.k is None:
        raise UsageError("give a plan file or --n and --k")
    return make_plan(_spec(args), args.strategy)


def _write(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --------------------------------------------------------------------------


def cmd_plan(args) -> int:
    spec = _spec(args)
    epsilon = _rational(args.epsilon) if args.epsilon is not None else None
    if args.dump_lp:
        lp = build_protection_lp(spec, epsilon=epsilon if epsilon is not None else DEFAULT_EPSILON)
        _write(lp.dump(), args.dump_lp)
    plan = make_plan(spec, args.strategy, args.mode, epsilon)
    met = compute_metrics(plan)
    if args.output:
        Path(args.output).write_text(plan.to_json())
        print(f"strategy = {plan.strategy_tag} (n={spec.n}, k={spec.k}, M={format_fraction(spec.M)})")
        print(f"delta = {_dual(met.delta)}")
        print(f"sigma = {_dual(met.sigma)}")
        print(f"rho = {_dual(met.rho)}")
        print(f"alpha_k = {_dual(met.final_alpha)}")
    else:
        doc = plan.to_dict()
        doc["metrics"] = {
            name: {"exact": format_fraction(v), "decimal": format_decimal(v)}
            for name, v in (("delta", met.delta), ("sigma", met.sigma), ("rho", met.rho),
                            ("alpha_k", met.final_alpha))
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = _int_range(args.n)
    if (args.k is None) == (args.losses is None):
        raise UsageError("give exactly one of --k or --losses")
    specs = []
    for n in ns:
        if args.k is not None:
            ks = _int_range(args.k)
        else:
            ks = [n - c for c in _int_range(args.losses)]
        for k in ks:
            specs.append(validate_spec(n, k, _rational(args.M)))
    strategies = [s.strip().lower() for s in args.strategies.split(",") if s.strip()]
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad or not strategies:
        raise UsageError(f"unknown strategies {bad}; choose from {','.join(STRATEGIES)}")
    epsilon = _rational(args.epsilon) if args.epsilon is not None else None
    rows = sweep(specs, strategies, args.mode, epsilon, jobs=args.jobs)
    _write(rows_to_csv(rows), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    plan = _load_plan(args.plan)
    report = check_feasible(plan)
    spec = plan.spec
    print(f"plan {plan.strategy_tag} (n={spec.n}, k={spec.k}): {report.checked} constraints checked")
    status = EXIT_OK
    if report.feasible:
        print("feasible")
    else:
        print(f"INFEASIBLE: {len(report.violations)} violated")
        for v in report.violations:
            print(f"  {v.label}  slack {_dual(v.slack)}")
        status = EXIT_FAILED
    if args.oracle:
        for m in reversed(spec.stages):
            value = min_cut(build_flow_network(plan, m))
            ok = value >= spec.M
            print(f"  oracle stage {m}: min-cut {_dual(value)} {'ok' if ok else 'BELOW M'}")
            if not ok:
                status = EXIT_FAILED
    return status


def cmd_simulate(args) -> int:
    plan = _plan_from_args(args)
    try:
        pp = packetize(plan, args.max_g)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = run_batch(pp, args.trials, args.seed, args.field)
    doc = summary.to_dict()
    doc["field"] = args.field
    doc["base_seed"] = args.seed
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_constraints(args) -> int:
    spec = _spec(args)
    if args.stage is not None:
        if not spec.k <= args.stage <= spec.n - 1:
            raise UsageError(f"--stage must lie in [{spec.k}, {spec.n - 1}]")
        cuts = enumerate_stage_cuts(spec, args.stage)
    else:
        cuts = enumerate_all_cuts(spec)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(csv_header(spec))
    for cut in cuts:
        writer.writerow(csv_row(spec, cut))
    _write(out.getvalue(), args.output)
    return EXIT_OK


def cmd_graph(args) -> int:
    plan = _plan_from_args(args)
    spec = plan.spec
    stage = spec.k if args.stage is None else args.stage
    if not spec.k <= stage <= spec.n - 1:
        raise UsageError(f"--stage must lie in [{spec.k}, {spec.n - 1}]")
    net = build_flow_network(plan, stage)
    if args.dot:
        _write(net.to_dot(), args.output)
    else:
        print(f"stage {stage}: {len(net.vertices)} vertices, {len(net.arcs)} arcs, "
              f"min-cut {_dual(min_cut(net))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="protplan", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version", action="version",
        version=f"protplan {__version__} (plan format {PLAN_FORMAT_VERSION}, csv format {CSV_FORMAT_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="compute a protection plan")
    _add_spec_args(p)
    p.add_argument("--strategy", choices=STRATEGIES, default="op")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--epsilon", help="storage tie-break weight; switches OP to the weighted objective")
    p.add_argument("-o", "--output", help="write the plan JSON here")
    p.add_argument("--dump-lp", metavar="FILE", help="write the protection LP as text ('-' for stdout)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sweep", help="comparison table over (n, k, strategy)")
    p.add_argument("--n", required=True, help="n or n-range, e.g. 10 or 6..12")
    p.add_argument("--k", help="k-range, e.g. 1..9")
    p.add_argument("--losses", help="loss-count range; k = n - losses")
    p.add_argument("--M", default="1")
    p.add_argument("--strategies", "--strategy", dest="strategies", default=",".join(STRATEGIES))
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--epsilon")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check a plan file against every constraint")
    p.add_argument("plan")
    p.add_argument("--oracle", action="store_true", help="also compute per-stage min-cuts by max-flow")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="random linear network coding run of a plan")
    p.add_argument("plan", nargs="?")
    _add_spec_args(p, required=False)
    p.add_argument("--strategy", choices=STRATEGIES, default="op")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", type=int, choices=(256, 65536), default=256)
    p.add_argument("--max-g", type=int, default=DEFAULT_MAX_G)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("constraints", help="dump cut constraints as CSV")
    _add_spec_args(p)
    p.add_argument("--stage", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("graph", help="information flow graph of one stage")
    p.add_argument("--plan")
    _add_spec_args(p, required=False)
    p.add_argument("--strategy", choices=STRATEGIES, default="op")
    p.add_argument("--stage", type=int)
    p.add_argument("--dot", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PlanFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, PlanningError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
