import dataclasses
import json
import logging
import math
import os
from datetime import datetime
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from utils.config import REPORT_DIR, TOOL_VERSION
from utils.parser import presentation_digest, serialize_presentation
from utils.presentation import Presentation
from utils.slopes import BoundaryPoint, NonSlope, Slope, format_point, format_rational, format_slope

logger = logging.getLogger(__name__)


def to_jsonable(value):
    """
    Convert engine results into JSON-ready data with every number written exactly.
    Dataclasses become dicts of their fields plus their public properties.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (Slope, NonSlope)):
        return format_slope(value)
    if isinstance(value, BoundaryPoint):
        return format_point(value)
    if isinstance(value, Presentation):
        return serialize_presentation(value)
    if dataclasses.is_dataclass(value):
        data = {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
        for name, attr in vars(type(value)).items():
            if isinstance(attr, property) and not name.startswith("_"):
                data[name] = to_jsonable(getattr(value, name))
        return data
    if isinstance(value, dict):
        return {_key(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _key(key) -> str:
    converted = to_jsonable(key)
    return converted if isinstance(converted, str) else json.dumps(converted)


def build_report(subcommand: str, parameters: Dict, results, elapsed: float,
                 pres: Optional[Presentation] = None, include_timing: bool = True) -> Dict:
    """
    Assemble a self-contained run report; the presentation is embedded by value.
    Without timing two runs on the same input give byte-identical reports.
    """
    report = {
        "tool_version": TOOL_VERSION,
        "subcommand": subcommand,
        "presentation": serialize_presentation(pres) if pres is not None else None,
        "presentation_digest": presentation_digest(pres) if pres is not None else None,
        "parameters": to_jsonable(parameters),
        "results": to_jsonable(results),
    }
    if include_timing:
        report["timing"] = {"seconds": round(elapsed, 6)}
    return report


def write_report(report: Dict, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report, f, ensure_ascii=False, indent=2)
    logger.info("wrote report %s", path)
    return path


def save_report(report: Dict, directory: str = REPORT_DIR) -> str:
    """Save a report as <subcommand>_<timestamp>.json under directory."""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    filename = os.path.join(directory, f"{report['subcommand']}_{timestamp}.json")
    return write_report(report, filename)


# ---------------------------------------------------------------------------
# Text output

def format_summary(summary) -> str:
    return f"mu={format_slope(summary.mu)} d={summary.d} c={summary.c} rho={format_rational(summary.rho)}"


def format_trace_lines(trace) -> List[str]:
    lines = [f"t={format_rational(c.t)} center=({c.center[0]},{c.center[1]})" for c in trace.crossings]
    end = ",".join(format_rational(x) for x in trace.folded_end)
    slope = format_slope(trace.slope) if trace.slope is not None else "trivial"
    lines.append(f"w'=({end}) coords=({trace.coords[0]},{trace.coords[1]}) slope={slope}")
    return lines


def format_arc(arc) -> str:
    if arc is None:
        return "empty"
    return f"({format_point(arc.start)}, {format_point(arc.end)})"


def format_interval(iv) -> str:
    if iv.is_point:
        return "{" + format_point(iv.lo) + "}"
    lo = "-inf" if iv.lo is None else format_point(iv.lo)
    return f"{'[' if iv.lo_closed else '('}{lo}, {format_point(iv.hi)}{']' if iv.hi_closed else ')'}"


def format_check(check) -> str:
    status = "discharged" if check.discharged else "open"
    if check.slope is None:
        return f"check {format_point(check.point)}: {status}"
    return (f"check {format_point(check.point)}: {status} mu={format_slope(check.mu)} "
            f"rho={format_rational(check.rho)}")


def format_coverage(state) -> str:
    """One-line coverage statistics."""
    return (f"Probes: {len(state.probes):,} | Arcs: {len(state.arcs):,} | "
            f"Residual pieces: {len(state.residual):,}")


# ---------------------------------------------------------------------------
# SVG

SVG_SIZE = 400
SVG_RADIUS = 160.0


def _angle(x: Optional[BoundaryPoint], low: bool = False) -> float:
    """Angle of a boundary point on the drawn circle; ∞ sits at π and -∞ at -π."""
    if x is None:
        return -math.pi
    if x.infinite:
        return -math.pi if low else math.pi
    return 2 * math.atan(x.to_float())


def _xy(theta: float):
    c = SVG_SIZE / 2
    return c + SVG_RADIUS * math.cos(theta), c - SVG_RADIUS * math.sin(theta)


def _arc_path(theta0: float, theta1: float) -> str:
    extent = (theta1 - theta0) % (2 * math.pi)
    x0, y0 = _xy(theta0)
    x1, y1 = _xy(theta1)
    large = 1 if extent > math.pi else 0
    return f"M {x0:.6f} {y0:.6f} A {SVG_RADIUS:.6f} {SVG_RADIUS:.6f} 0 {large} 0 {x1:.6f} {y1:.6f}"


def emit_svg(state, path: str, omitted: Iterable[BoundaryPoint] = ()) -> str:
    """
    Draw the boundary circle with excluded arcs shaded, residual pieces in red and
    omitted points marked. Output depends only on the state.
    """
    c = SVG_SIZE / 2
    rows = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" '
        'fill="none" xmlns="http://www.w3.org/2000/svg">',
        f'<circle cx="{c:.6f}" cy="{c:.6f}" r="{SVG_RADIUS:.6f}" stroke="black" stroke-width="1.0000"/>',
    ]
    for arc in state.arcs:
        theta0 = _angle(arc.start, low=True)
        theta1 = _angle(arc.end)
        rows.append(f'<path stroke="#3b6ea5" stroke-opacity="0.35" stroke-width="8.0000" '
                    f'd="{_arc_path(theta0, theta1)}"/>')
    for iv in state.residual:
        if iv.lo is None and iv.hi.infinite and iv.hi_closed:
            continue
        if iv.is_point:
            x, y = _xy(_angle(iv.lo))
            rows.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="4.000000" fill="#c0392b"/>')
        else:
            rows.append(f'<path stroke="#c0392b" stroke-width="3.0000" '
                        f'd="{_arc_path(_angle(iv.lo, low=True), _angle(iv.hi))}"/>')
    for point in omitted:
        x, y = _xy(_angle(point))
        rows.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="5.000000" stroke="#27ae60" stroke-width="2.0000"/>')
    rows.append("</svg>")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(rows) + "\n")
    return path
