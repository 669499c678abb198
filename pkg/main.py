import argparse
import logging
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from engines.halfspace import (
    OBSTRUCTION_KINDS,
    arc_for_summary,
    coverage_run,
    fixed_point_search,
    omit_check,
    rationality_verdict,
)
from engines.matings import find_equators, verify_family_matings
from engines.pullback import degree_one_self_lift, slope_invariants
from utils.config import DEFAULT_EQUATOR_HEIGHT, DEFAULT_PROBE_HEIGHT, HALFSPACE_KINDS, LOG_LEVEL, OMIT_CHECK_HEIGHT
from utils.errors import NetSlopeError
from utils.parser import load_presentation, save_presentation, serialize_presentation
from utils.presentation import Presentation, family_fn, orbifold_type, postcritical_portrait
from utils.report import (
    build_report,
    emit_svg,
    format_arc,
    format_check,
    format_coverage,
    format_interval,
    format_summary,
    format_trace_lines,
    save_report,
    write_report,
)
from utils.slopes import format_point, format_rational, format_slope, parse_slope, slope_of_cusp

logger = logging.getLogger(__name__)

Outcome = Tuple[Optional[Presentation], Dict, object, List[str]]


def slope_arg(text: str):
    try:
        return parse_slope(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e) or f"invalid slope {text!r}")


def create_eval_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    summary = slope_invariants(pres, args.slope)
    lines = [format_summary(summary)]
    if args.debug:
        for component in summary.components:
            lines.append(f"component {component.index}:")
            lines.extend("  " + line for line in format_trace_lines(component.trace))
    return pres, {"slope": args.slope}, summary, lines


def create_portrait_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    portrait = postcritical_portrait(pres)
    kind = orbifold_type(pres)
    lines = [
        f"{e.label} ({e.representative[0]},{e.representative[1]}) -> {e.image_label}"
        f"{' fixed' if e.fixed else ''}{' critical' if e.critical else ''}"
        for e in portrait.entries
    ]
    lines.append(f"orbifold: {kind}")
    return pres, {}, {"portrait": portrait, "orbifold": kind}, lines


def create_intervals_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    summary = slope_invariants(pres, args.slope)
    arc = arc_for_summary(pres, summary, args.kind, rho0=args.rho0)
    params = {"slope": args.slope, "kind": args.kind, "rho0": args.rho0}
    return pres, params, {"summary": summary, "arc": arc}, [f"{args.kind} {format_slope(args.slope)}: {format_arc(arc)}"]


def create_cover_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    verdict = rationality_verdict(pres, args.height, args.kind)
    # an early fixed-point obstruction stops before coverage
    state = verdict.state if verdict.state is not None else coverage_run(pres, args.height, args.kind)
    lines = [format_coverage(state)]
    lines.extend(f"residual {format_interval(iv)}" for iv in state.residual)
    lines.extend(format_check(check) for check in state.checks)
    lines.append(f"verdict: {verdict.tag}")
    if verdict.slope is not None:
        lines[-1] += f" at {format_slope(verdict.slope)} rho={format_rational(verdict.rho)}"
    if args.svg:
        omitted = []
        for iv in state.residual:
            if iv.is_point and (iv.lo.is_rational or iv.lo.infinite):
                if degree_one_self_lift(pres, slope_of_cusp(iv.lo)) is not None:
                    omitted.append(iv.lo)
        emit_svg(state, args.svg, omitted)
        lines.append(f"svg: {args.svg}")
    params = {"height": args.height, "kind": args.kind}
    return pres, params, {"coverage": state, "verdict": {"tag": verdict.tag, "slope": verdict.slope, "rho": verdict.rho}}, lines


def create_fixed_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    fixed = fixed_point_search(pres, args.height)
    lines = [f"{format_slope(s)} rho={format_rational(rho)}" for s, rho in fixed]
    return pres, {"height": args.height}, [{"slope": s, "rho": rho} for s, rho in fixed], lines


def create_omit_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    report = omit_check(pres, args.slope, args.height)
    if report.witness is None:
        lines = [f"no degree-one self-lift of slope {format_slope(args.slope)}"]
    else:
        edge = report.witness.edge
        lines = [f"witness: side {report.witness.side} edge {edge.start} -> {edge.end}"]
    lines.extend(f"{c.name}: {c.status}{' (' + c.detail + ')' if c.detail else ''}" for c in report.consequences)
    lines.extend(f"limit point {format_point(x)}" for x in report.limit_points)
    return pres, {"slope": args.slope, "height": args.height}, report, lines


def create_matings_report(args) -> Outcome:
    pres = load_presentation(args.presentation)
    reports = find_equators(pres, args.height)
    lines = [f"{format_slope(r.slope)} d={r.d} mu={format_slope(r.mu)} orientation={r.orientation}"
             for r in reports if r.equator]
    lines.append(f"equators: {sum(r.equator for r in reports)}")
    return pres, {"height": args.height}, reports, lines


def create_family_report(args) -> Outcome:
    report = verify_family_matings(args.n)
    lines = [f"{format_slope(r.slope)} d={r.d} mu={format_slope(r.mu)} {'equator' if r.equator else 'not an equator'}"
             for r in report.equators]
    lines.append(f"count {len(report.equators)} expected {report.count_expected}")
    lines.append("passed" if report.passed else "failed")
    return None, {"n": args.n}, report, lines


def create_family_gen_report(args) -> Outcome:
    pres = family_fn(args.n)
    if args.output:
        save_presentation(pres, args.output)
        lines = [f"wrote {args.output}"]
    else:
        lines = [serialize_presentation(pres).rstrip("\n")]
    return pres, {"n": args.n, "output": args.output}, pres, lines


def parse_positive_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text!r}")
    return value


HANDLERS = {
    "eval": create_eval_report,
    "portrait": create_portrait_report,
    "intervals": create_intervals_report,
    "cover": create_cover_report,
    "fixed": create_fixed_report,
    "omit": create_omit_report,
    "matings": create_matings_report,
    "family": create_family_report,
    "family-gen": create_family_gen_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the run report to PATH")
    common.add_argument("--save", action="store_true", help="save the run report under the report directory")
    common.add_argument("--no-timing", action="store_true", help="leave timing out of the run report")
    common.add_argument("--debug", action="store_true", help="debug logging and trace dumps")

    parser = argparse.ArgumentParser(prog="netslope", description="Exact slope functions of NET maps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, presentation: bool = True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if presentation:
            p.add_argument("-p", "--presentation", required=True, metavar="FILE")
        return p

    add("eval", "evaluate mu, d, c and rho at a slope").add_argument("-s", "--slope", type=slope_arg, required=True)
    add("portrait", "postcritical portrait and orbifold type")
    p = add("intervals", "excluded interval of one probe slope")
    p.add_argument("-s", "--slope", type=slope_arg, required=True)
    p.add_argument("--kind", choices=HALFSPACE_KINDS, default="Obstruction")
    p.add_argument("--rho0", type=parse_positive_rational, default=1)
    p = add("cover", "cover the boundary circle by excluded intervals")
    p.add_argument("-H", "--height", type=int, default=DEFAULT_PROBE_HEIGHT)
    p.add_argument("--kind", choices=OBSTRUCTION_KINDS, default="Obstruction")
    p.add_argument("--svg", metavar="PATH")
    add("fixed", "fixed slopes up to a height").add_argument("-H", "--height", type=int, default=DEFAULT_PROBE_HEIGHT)
    p = add("omit", "check a degree-one self-lift and its consequences")
    p.add_argument("-s", "--slope", type=slope_arg, required=True)
    p.add_argument("-H", "--height", type=int, default=OMIT_CHECK_HEIGHT)
    add("matings", "equator conditions up to a height").add_argument(
        "-H", "--height", type=int, default=DEFAULT_EQUATOR_HEIGHT)
    add("family", "verify the equators of the degree-n family member", presentation=False).add_argument(
        "--n", type=int, required=True)
    p = add("family-gen", "write the presentation of the degree-n family member", presentation=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", metavar="FILE")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.
    Returns:
        0 on success, 1 on a domain error, 2 on a usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(logging.DEBUG if args.debug else LOG_LEVEL)

    start = time.perf_counter()
    try:
        pres, params, results, lines = HANDLERS[args.command](args)
        report = build_report(args.command, params, results, time.perf_counter() - start, pres,
                              include_timing=not args.no_timing)
        if args.json:
            write_report(report, args.json)
        if args.save:
            lines.append(f"saved {save_report(report)}")
    except (NetSlopeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print("\n".join(lines))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
