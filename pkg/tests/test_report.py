import json
import os
from fractions import Fraction

import pytest

from engines.halfspace import FULL_CIRCLE, CoverageState, Horoball, Interval, coverage_run, excluded_arc
from engines.pullback import slope_invariants
from utils.report import (
    build_report,
    emit_svg,
    format_arc,
    format_coverage,
    format_interval,
    format_summary,
    save_report,
    to_jsonable,
)
from utils.slopes import INFINITY, NONSLOPE, ZERO, BoundaryPoint, make_slope


def test_to_jsonable_values():
    assert to_jsonable(Fraction(3, 4)) == "3/4"
    assert to_jsonable(7) == 7
    assert to_jsonable(True) is True
    assert to_jsonable(make_slope(1, 2)) == "1/2"
    assert to_jsonable(NONSLOPE) == "nonslope"
    assert to_jsonable(BoundaryPoint.surd(0, 1, 2)) == "(0/1 + 1/1*sqrt(2))"
    assert to_jsonable({ZERO: [INFINITY]}) == {"0/1": ["inf"]}
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_to_jsonable_includes_properties():
    data = to_jsonable(Horoball(make_slope(2, 1), Fraction(1, 2)))
    assert data == {"slope": "2/1", "scale": "1/2", "diameter": "1/2", "tangency": "-1/2"}


def test_text_formats(f5):
    assert format_summary(slope_invariants(f5, ZERO)) == "mu=0/1 d=5 c=1 rho=1/5"
    assert format_arc(None) == "empty"
    assert format_arc(excluded_arc("Obstruction", INFINITY, ZERO, rho=1)) == "(-1/1, 1/1)"
    half = BoundaryPoint.rational(Fraction(1, 2))
    assert format_interval(Interval(half, half, True, True)) == "{1/2}"
    assert format_interval(FULL_CIRCLE) == "(-inf, inf]"
    assert format_coverage(CoverageState("Obstruction", 3)) == "Probes: 0 | Arcs: 0 | Residual pieces: 1"


def test_build_and_save_report(f5, tmp_path):
    report = build_report("eval", {"slope": ZERO}, slope_invariants(f5, ZERO), 0.25, f5)
    assert list(report) == ["tool_version", "subcommand", "presentation", "presentation_digest",
                            "parameters", "results", "timing"]
    path = save_report(report, str(tmp_path))
    assert os.path.basename(path).startswith("eval_")
    with open(path, encoding="utf-8") as f:
        assert json.load(f)["results"]["d"] == 5


def test_report_without_presentation():
    report = build_report("family", {"n": 5}, [], 0.0)
    assert report["presentation"] is None
    assert report["presentation_digest"] is None


def test_report_without_timing(f5):
    report = build_report("eval", {"slope": ZERO}, slope_invariants(f5, ZERO), 0.25, f5, include_timing=False)
    assert "timing" not in report
    assert json.dumps(report) == json.dumps(build_report("eval", {"slope": ZERO}, slope_invariants(f5, ZERO), 9.0, f5,
                                                         include_timing=False))


def test_empty_state_draws_only_the_circle(tmp_path):
    path = emit_svg(CoverageState("Obstruction", 0), str(tmp_path / "empty.svg"))
    text = open(path, encoding="utf-8").read()
    assert text.count("<circle") == 1
    assert "<path" not in text


def test_svg_is_deterministic(f5, tmp_path):
    state = coverage_run(f5, 5)
    first = emit_svg(state, str(tmp_path / "a.svg"), [BoundaryPoint.infinity()])
    second = emit_svg(state, str(tmp_path / "b.svg"), [BoundaryPoint.infinity()])
    with open(first, "rb") as a, open(second, "rb") as b:
        assert a.read() == b.read()


def test_svg_marks_omitted_infinity(tmp_path):
    path = emit_svg(CoverageState("Obstruction", 0), str(tmp_path / "marked.svg"), [BoundaryPoint.infinity()])
    text = open(path, encoding="utf-8").read()
    assert '<circle cx="40.000000" cy="200.000000" r="5.000000"' in text
