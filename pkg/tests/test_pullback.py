import math
from fractions import Fraction

import pytest

from engines.halfspace import coverage_run, evaluate_probes, fixed_point_search
from engines.pullback import (
    _LineGeometry,
    _cached_invariants,
    _endpoint_center,
    arc_preimage_graph,
    arc_slope,
    core_arcs,
    multiplier,
    slope_function,
    slope_invariants,
    trace_segment,
)
from utils.config import get_thread_count
from utils.errors import BadParameter, DegenerateArcModel, NonGeneric
from utils.presentation import degree, family_fn, lattice_coordinates, orbifold_type
from utils.slopes import INFINITY, NONSLOPE, ZERO, farey_slopes, intersection_number, make_slope


def test_trace_without_mirrors(euclidean):
    trace = trace_segment(euclidean, (1, 2))
    assert trace.n == 0
    assert trace.folded_end == trace.end
    assert trace.slope == make_slope(2, 1)


def test_trace_of_slope_zero_in_f5(f5):
    trace = trace_segment(f5, (1, 0), k=5)
    assert trace.n % 2 == 0
    assert trace.slope == ZERO
    assert all(0 <= t < 1 for t in trace.parameters)


def test_trace_rejects_bad_length(f5):
    with pytest.raises(BadParameter):
        trace_segment(f5, (1, 0), k=3)
    with pytest.raises(BadParameter):
        trace_segment(f5, (2, 4))


def test_trace_parity_and_lattice(corpus):
    for pres in corpus:
        for s in farey_slopes(3):
            trace = trace_segment(pres, s.direction)
            if trace.n % 2:
                assert trace.peripheral and trace.trivial and trace.slope is None
                continue
            assert not trace.peripheral
            half = ((trace.folded_end[0] - trace.start[0]) / 2, (trace.folded_end[1] - trace.start[1]) / 2)
            a, b = lattice_coordinates(pres, half)
            assert a.denominator == 1 and b.denominator == 1
            assert (int(a), int(b)) == trace.coords
            assert [c.t for c in trace.crossings] == sorted(c.t for c in trace.crossings)


def test_odd_crossings_give_peripheral_components(f5):
    summary = slope_invariants(f5, make_slope(-1, 1))
    assert summary.d == 1
    assert len(summary.components) == 5
    peripheral = [comp for comp in summary.components if comp.trace.peripheral]
    assert peripheral
    for comp in peripheral:
        assert comp.trace.n % 2 == 1
        assert comp.trivial and comp.slope is None
    assert summary.c == sum(1 for comp in summary.components if not comp.trivial)


def test_family_slope_infinity_is_peripheral(f4):
    summary = slope_invariants(f4, INFINITY)
    assert (summary.d, len(summary.components)) == (4, 1)
    assert summary.components[0].trace.n == 3
    assert summary.components[0].trace.peripheral
    assert (summary.c, summary.mu, summary.rho) == (0, NONSLOPE, 0)


def test_peripheral_slopes_do_not_stop_searches(f4, f5):
    state = coverage_run(f5, 12, "Obstruction")
    assert state.probes
    assert all(rho > 0 for _, rho in fixed_point_search(f4, 20))


@pytest.mark.parametrize("n", range(4, 13))
def test_family_slope_zero(n):
    summary = slope_invariants(family_fn(n), ZERO)
    assert (summary.d, summary.c, summary.mu, summary.rho) == (n, 1, ZERO, Fraction(1, n))


@pytest.mark.parametrize("n", range(4, 13))
def test_family_equator_slopes_are_fixed(n):
    pres = family_fn(n)
    for m in range(0, math.ceil((n - 2) / 2) + 1):
        s = make_slope(2 * m, n - 2 * m - 1)
        summary = slope_invariants(pres, s)
        assert summary.mu == s
        assert summary.d == n


def test_euclidean_slope_zero(euclidean):
    summary = slope_invariants(euclidean, ZERO)
    assert (summary.d, summary.c, summary.mu, summary.rho) == (2, 2, ZERO, Fraction(1))
    assert slope_function(euclidean, make_slope(3, 5)) == make_slope(3, 5)
    assert multiplier(euclidean, make_slope(3, 5)) == 1


def test_summary_invariants(corpus):
    for pres in corpus:
        deg = degree(pres)
        for s in farey_slopes(4):
            summary = slope_invariants(pres, s)
            assert len(summary.components) == deg // summary.d
            assert summary.c * summary.d <= deg
            assert summary.rho == Fraction(summary.c, summary.d)
            slopes = {comp.slope for comp in summary.components if not comp.trivial}
            assert len(slopes) <= 1
            assert (summary.mu is NONSLOPE) == (summary.c == 0)


def test_offset_independence(corpus):
    for pres in corpus:
        for s in farey_slopes(3):
            first = slope_invariants(pres, s)
            second = slope_invariants(pres, s, offset=Fraction(5, 7))
            assert (first.d, first.c, first.mu) == (second.d, second.c, second.mu)


def test_lattice_shift_independence(corpus):
    for pres in corpus:
        for s in farey_slopes(2):
            plain = trace_segment(pres, s.direction)
            shifted = trace_segment(pres, s.direction, shift=(1, -2))
            assert plain.trivial == shifted.trivial
            assert plain.slope == shifted.slope


def test_thread_count_does_not_change_results(corpus, monkeypatch):
    slopes = farey_slopes(3)
    monkeypatch.setenv("NETSLOPE_THREADS", "1")
    _cached_invariants.cache_clear()
    serial = [[(r.d, r.c, r.mu) for r in evaluate_probes(pres, slopes)] for pres in corpus]
    monkeypatch.setenv("NETSLOPE_THREADS", "4")
    _cached_invariants.cache_clear()
    threaded = [[(r.d, r.c, r.mu) for r in evaluate_probes(pres, slopes)] for pres in corpus]
    assert serial == threaded


def test_thread_count_setting(monkeypatch):
    monkeypatch.delenv("NETSLOPE_THREADS", raising=False)
    assert get_thread_count() == 1
    monkeypatch.setenv("NETSLOPE_THREADS", "3")
    assert get_thread_count() == 3
    monkeypatch.setenv("NETSLOPE_THREADS", "zero")
    assert get_thread_count() == 1
    monkeypatch.setenv("NETSLOPE_THREADS", "-2")
    assert get_thread_count() == 1


def _evaluated(pres, height):
    return [summary for summary in evaluate_probes(pres, farey_slopes(height)) if summary.mu is not NONSLOPE]


def test_general_lipschitz_inequality(corpus):
    for pres in corpus:
        hyperbolic = orbifold_type(pres) == "Hyperbolic"
        summaries = _evaluated(pres, 5)
        for i, first in enumerate(summaries):
            for second in summaries[i + 1:]:
                lhs = first.rho * second.rho * intersection_number(first.mu, second.mu) ** 2
                rhs = intersection_number(first.slope, second.slope) ** 2
                if hyperbolic:
                    assert lhs < rhs
                else:
                    assert lhs <= rhs


def test_net_lipschitz_inequalities(corpus):
    for pres in corpus:
        deg = degree(pres)
        summaries = _evaluated(pres, 5)
        for first in summaries:
            for second in summaries:
                i = intersection_number(first.slope, second.slope)
                image = intersection_number(first.mu, second.mu)
                assert image * deg <= first.d * second.d * i
                assert image * second.c <= first.d * i


def _degeneracy_explained(pres, arc) -> bool:
    """A degenerate arc has an ambiguous endpoint or meets a mirror center, endpoint or overlap."""
    for point in (arc.start, arc.end):
        try:
            _endpoint_center(pres, point)
        except DegenerateArcModel:
            return True
    step = (arc.end[0] - arc.start[0], arc.end[1] - arc.start[1])
    length = math.gcd(*step)
    geometry = _LineGeometry(pres, (step[0] // length, step[1] // length))
    try:
        geometry.crossings(arc.start, Fraction(0), Fraction(length), False, "error")
    except NonGeneric:
        return True
    return False


def _check_arc_inequalities(pres, height):
    """Both core arc bounds against every nontrivial target; returns (pairs checked, degenerate arcs)."""
    deg = degree(pres)
    targets = [summary for summary in evaluate_probes(pres, farey_slopes(height)) if summary.c > 0]
    checked = degenerate = 0
    for s in farey_slopes(height):
        for side in (0, 1):
            graph = arc_preimage_graph(pres, s, side)
            for arc in core_arcs(graph):
                try:
                    lifted = arc_slope(graph, arc)
                except DegenerateArcModel:
                    assert _degeneracy_explained(pres, arc)
                    degenerate += 1
                    continue
                if lifted is None:
                    continue
                for target in targets:
                    i = intersection_number(s, target.slope)
                    image = intersection_number(lifted, target.mu)
                    assert image * target.c <= arc.degree * i
                    assert image <= 2 * math.ceil(Fraction(arc.degree * target.d * i, 2 * deg))
                    checked += 1
    return checked, degenerate


@pytest.mark.parametrize("n", range(4, 9))
def test_family_core_arc_inequalities(n):
    checked, _ = _check_arc_inequalities(family_fn(n), 3)
    assert checked > 0


def test_corpus_core_arc_inequalities(corpus):
    totals = [_check_arc_inequalities(pres, 3) for pres in corpus]
    assert sum(checked for checked, _ in totals) > 0
