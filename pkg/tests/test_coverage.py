import random
from fractions import Fraction

import pytest

from engines.halfspace import (
    FULL_CIRCLE,
    coverage_run,
    fixed_point_search,
    omit_check,
    probe_arcs,
    rationality_verdict,
)
from engines.pullback import slope_invariants
from utils.errors import BadParameter, UnsupportedOrbifold
from utils.presentation import family_fn, orbifold_type
from utils.slopes import ZERO, BoundaryPoint, cusp_of_slope, farey_slopes


def _hyperbolic_sample(corpus, size: int = 20):
    return [pres for pres in corpus if orbifold_type(pres) == "Hyperbolic"][:size]


def _sample_points(seed: int, count: int = 200):
    rng = random.Random(seed)
    points = [BoundaryPoint.infinity()]
    points += [BoundaryPoint.rational(Fraction(rng.randint(-60, 60), rng.randint(1, 12))) for _ in range(count)]
    points += [BoundaryPoint.surd(Fraction(rng.randint(-8, 8), 3), Fraction(rng.randint(1, 5), 4), 2)
               for _ in range(count // 4)]
    return points


def test_euclidean_is_unsupported(euclidean):
    with pytest.raises(UnsupportedOrbifold):
        coverage_run(euclidean, 4)
    with pytest.raises(UnsupportedOrbifold):
        rationality_verdict(euclidean, 4)


def test_coverage_rejects_fixed_point_kinds(f5):
    with pytest.raises(BadParameter):
        coverage_run(f5, 4, "FixedPoint")


def test_f5_keeps_infinity(f5):
    state = coverage_run(f5, 12)
    assert not state.covers(BoundaryPoint.infinity())
    assert state.residual != [FULL_CIRCLE]


def test_residual_shrinks_with_height(f5):
    low = coverage_run(f5, 4)
    high = coverage_run(f5, 8)
    for x in _sample_points(1):
        if low.covers(x):
            assert high.covers(x)


def test_residual_is_complement_of_arcs(f4, f5):
    for pres in (f4, f5):
        state = coverage_run(pres, 6)
        for x in _sample_points(2):
            assert state.covers(x) == any(arc.contains(x) for arc in state.arcs)


@pytest.mark.parametrize("n", range(4, 9))
def test_family_verdicts_are_not_obstructed(n):
    verdict = rationality_verdict(family_fn(n), 12)
    assert verdict.tag in ("CertifiedUnobstructed", "Inconclusive")
    assert verdict.state is not None


def test_fixed_points_of_f5(f5):
    fixed = dict(fixed_point_search(f5, 6))
    assert fixed[ZERO] == Fraction(1, 5)
    assert all(rho < 1 for rho in fixed.values())


def test_euclidean_fixes_every_slope(euclidean):
    fixed = fixed_point_search(euclidean, 4)
    assert [s for s, _ in fixed] == farey_slopes(4)
    assert all(rho == 1 for _, rho in fixed)


def test_probe_arcs_skip_fixed_probes(f5):
    for record in probe_arcs(f5, 5):
        if record.mu == record.slope:
            assert record.arc is None
        elif record.arc is not None:
            assert record.arc.probe == record.slope


@pytest.mark.parametrize("pres_name", ["f4", "f5"])
def test_obstructions_are_never_covered_in_family(pres_name, request):
    pres = request.getfixturevalue(pres_name)
    state = coverage_run(pres, 12)
    for t, rho in fixed_point_search(pres, 20):
        if rho >= 1:
            assert not state.covers(cusp_of_slope(t))


def test_obstructions_are_never_covered(corpus):
    for pres in _hyperbolic_sample(corpus):
        obstructions = [t for t, rho in fixed_point_search(pres, 20) if rho >= 1]
        for kind in ("Obstruction", "NetObstruction"):
            state = coverage_run(pres, 12, kind)
            for t in obstructions:
                assert not state.covers(cusp_of_slope(t))


def test_obstructed_verdicts_name_a_fixed_slope(corpus):
    for pres in corpus:
        if orbifold_type(pres) != "Hyperbolic":
            continue
        verdict = rationality_verdict(pres, 5)
        if verdict.tag == "Obstructed":
            assert verdict.rho >= 1
            summary = slope_invariants(pres, verdict.slope)
            assert summary.mu == verdict.slope
            assert summary.rho == verdict.rho


def test_omit_check_for_f5_at_zero(f5):
    report = omit_check(f5, ZERO, height=8)
    assert report.witness is not None
    statuses = {c.name: c.status for c in report.consequences}
    assert statuses["cusp-omitted"] == "verified"
    assert set(report.hypotheses) >= {"c_times_d_exceeds_one", "divisors_exceed_one", "hyperbolic",
                                      "slope_not_obstruction"}
    assert report.limit_points == []


def test_omit_check_without_witness(euclidean):
    report = omit_check(euclidean, ZERO, height=4)
    assert report.witness is None
    assert report.consequences == []


@pytest.mark.parametrize("kind", ["FixedPoint", "NetFixedPoint"])
def test_fixed_slopes_avoid_fixed_point_arcs(f4, f5, kind):
    for pres in (f4, f5):
        arcs = [record.arc for record in probe_arcs(pres, 12, kind) if record.arc is not None]
        for t, _ in fixed_point_search(pres, 20):
            cusp = cusp_of_slope(t)
            assert not any(arc.contains(cusp) for arc in arcs)


def test_corpus_fixed_slopes_avoid_all_arcs(corpus):
    for pres in _hyperbolic_sample(corpus):
        fixed = fixed_point_search(pres, 20)
        for kind in ("FixedPoint", "NetFixedPoint", "NetObstruction"):
            arcs = [record.arc for record in probe_arcs(pres, 12, kind) if record.arc is not None]
            for t, rho in fixed:
                if kind == "NetObstruction" and rho < 1:
                    continue
                assert not any(arc.contains(cusp_of_slope(t)) for arc in arcs)


@pytest.mark.parametrize("n", range(4, 9))
def test_family_omit_consequences(n):
    pres = family_fn(n)
    report = omit_check(pres, ZERO, height=12)
    assert report.witness is not None
    statuses = {c.name: c.status for c in report.consequences}
    assert statuses["fixed-slopes-single-component"] == "verified"
    assert statuses["cusp-omitted"] == "verified"
    assert not coverage_run(pres, 12).covers(cusp_of_slope(ZERO))
