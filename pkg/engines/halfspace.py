"""
Excluded intervals of the boundary circle and the coverage search built on them.

Every excluded interval is the open arc {x : Q(x) < 0} of the circle R ∪ {∞}
for Q(x) = (px + q)² - r·(p'x + q')², where s = p/q is a probe slope,
s' = p'/q' its image under the slope function and r a positive rational
depending on the kind of interval. Q(∞) is the leading coefficient.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from engines.pullback import PreimageSummary, SelfLiftWitness, degree_one_self_lift, slope_invariants
from utils.config import OMIT_CHECK_HEIGHT, get_thread_count
from utils.errors import BadParameter, EqualSlopes, PostconditionError, UnsupportedOrbifold
from utils.presentation import Presentation, degree, elementary_divisors, orbifold_type
from utils.slopes import (
    NONSLOPE,
    BoundaryPoint,
    IntegerMatrix2,
    Slope,
    boundary_compare,
    cusp_of_slope,
    farey_slopes,
    intersection_number,
    positive_parabolic,
    slope_of_cusp,
    surd_sign,
)

logger = logging.getLogger(__name__)

OBSTRUCTION_KINDS = ("Obstruction", "NetObstruction")
FIXED_POINT_KINDS = ("FixedPoint", "NetFixedPoint")


# ---------------------------------------------------------------------------
# Horoballs and parabolic traces

@dataclass(frozen=True)
class Horoball:
    """B_m(p/q) = {z : Im(z) / |pz + q|² > m}, tangent to the boundary at -q/p."""

    slope: Slope
    scale: Fraction

    @property
    def diameter(self) -> Optional[Fraction]:
        if self.slope.p == 0:
            return None
        return 1 / (Fraction(self.scale) * self.slope.p ** 2)

    @property
    def tangency(self) -> BoundaryPoint:
        return cusp_of_slope(self.slope)

    def is_tangent_to(self, other: "Horoball") -> bool:
        i = intersection_number(self.slope, other.slope)
        return i != 0 and Fraction(self.scale) * other.scale * i * i == 1


def tangent_horoball_scale(s: Slope, t: Slope, m) -> Fraction:
    """The scale m' making B_m(s) and B_m'(t) tangent: m·m'·ι(s, t)² = 1."""
    if s == t:
        raise EqualSlopes(s)
    m = Fraction(m)
    if m <= 0:
        raise BadParameter(f"horoball scale must be positive, got {m}")
    i = intersection_number(s, t)
    return 1 / (m * i * i)


def parabolic_trace(n1: int, s1: Slope, n2: int, s2: Slope) -> int:
    """|tr(P1 P2^-1)| for the n1-th and n2-th powers of the parabolics fixing s1 and s2."""
    i = intersection_number(s1, s2)
    return abs(2 + n1 * n2 * i * i)


def parabolic_trace_by_matrices(n1: int, s1: Slope, n2: int, s2: Slope) -> int:
    first = positive_parabolic(s1, n1)
    second = positive_parabolic(s2, n2)
    return abs((first @ second.inverse()).trace)


# ---------------------------------------------------------------------------
# Excluded arcs

def e_constant(deg: int) -> int:
    """Smallest positive divisor e of deg with e² >= deg."""
    for e in range(1, deg + 1):
        if deg % e == 0 and e * e >= deg:
            return e
    raise BadParameter(f"degree must be positive, got {deg}")


def d_f_constant(deg: int) -> int:
    if deg < 1:
        raise BadParameter(f"degree must be positive, got {deg}")
    return 2 * math.lcm(*range(1, deg + 1))


def effective_ratio(kind: str, rho=None, rho0=1, deg: int = None, d: int = None, e: int = None) -> Fraction:
    """The ratio r in (px + q)² < r·(p'x + q')² for each kind of excluded interval."""
    try:
        if kind == "Obstruction":
            return Fraction(rho)
        if kind == "GeneralFixed":
            return Fraction(rho) * Fraction(rho0)
        if kind == "FixedPoint":
            return Fraction(1, deg * deg)
        if kind == "NetObstruction":
            return Fraction(e * e, d * d)
        if kind == "NetFixedPoint":
            return Fraction(1, d * d)
    except TypeError:
        raise BadParameter(f"missing parameters for {kind} interval") from None
    raise BadParameter(f"unknown interval kind {kind!r}")


@dataclass(frozen=True)
class BoundaryArc:
    """
    The open arc {x : a·x² + b·x + c < 0}, running in the increasing direction
    from start to end (through ∞ when start > end).
    """

    start: BoundaryPoint
    end: BoundaryPoint
    a: Fraction
    b: Fraction
    c: Fraction
    kind: str = "Obstruction"
    probe: Optional[Slope] = None
    image: Optional[Slope] = None

    def value_sign(self, x: BoundaryPoint) -> int:
        if x.infinite:
            return (self.a > 0) - (self.a < 0)
        # Q(a + b√D) = (A(a² + b²D) + B·a + C) + (2A·a·b + B·b)√D
        rational = self.a * (x.a * x.a + x.b * x.b * x.radicand) + self.b * x.a + self.c
        irrational = 2 * self.a * x.a * x.b + self.b * x.b
        return surd_sign(rational, irrational, x.radicand)

    def contains(self, x: BoundaryPoint) -> bool:
        return self.value_sign(x) < 0

    def closure_contains(self, x: BoundaryPoint) -> bool:
        return self.value_sign(x) <= 0

    @property
    def wraps(self) -> bool:
        return self.start.infinite or boundary_compare(self.start, self.end) > 0


def _quadratic(s: Slope, s_prime: Slope, ratio: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    p, q, pp, qp = s.p, s.q, s_prime.p, s_prime.q
    return (p * p - ratio * pp * pp, 2 * (p * q - ratio * pp * qp), q * q - ratio * qp * qp)


def _sqrt_ratio(ratio: Fraction, scale: Fraction = Fraction(1)) -> BoundaryPoint:
    """scale·√ratio as a boundary point."""
    return BoundaryPoint.surd(0, scale / ratio.denominator, ratio.numerator * ratio.denominator)


def excluded_arc(kind: str, s: Slope, s_prime: Slope, rho=None, rho0=1,
                 deg: int = None, d: int = None, e: int = None) -> Optional[BoundaryArc]:
    """
    The excluded interval of the given kind for a probe s with image s'.
    Returns:
        The open arc, or None when the inequality has no solution
    """
    ratio = effective_ratio(kind, rho=rho, rho0=rho0, deg=deg, d=d, e=e)
    if ratio <= 0:
        raise BadParameter(f"ratio of a {kind} interval must be positive, got {ratio}")
    a, b, c = _quadratic(s, s_prime, ratio)
    i = intersection_number(s, s_prime)
    if i == 0:
        if ratio <= 1:
            return None
        raise PostconditionError("excluded interval is the whole circle minus a point",
                                 {"kind": kind, "slope": str(s), "ratio": str(ratio)})
    half_b = b / 2
    if a == 0:
        root = BoundaryPoint.rational(-c / b)
        infinity = BoundaryPoint.infinity()
        start, end = (infinity, root) if b > 0 else (root, infinity)
        return BoundaryArc(start, end, a, b, c, kind, s, s_prime)
    spread = _sqrt_ratio(ratio, Fraction(i) / a)
    first = BoundaryPoint.surd(-half_b / a, spread.b, spread.radicand) if spread.b else \
        BoundaryPoint.rational(-half_b / a + spread.a)
    second = BoundaryPoint.surd(-half_b / a, -spread.b, spread.radicand) if spread.b else \
        BoundaryPoint.rational(-half_b / a - spread.a)
    small, large = sorted([first, second])
    start, end = (small, large) if a > 0 else (large, small)
    return BoundaryArc(start, end, a, b, c, kind, s, s_prime)


def halfspace_geometric_arc(s: Slope, s_prime: Slope, rho) -> BoundaryArc:
    """
    The ideal boundary of the half-space cut off by the geodesic tangent to the
    tangent horoballs B_m(s) and B_ρm(s') at their common point.
    The map φ(z) = (pz + q)/(p'z + q') sends that half-space to the disc of
    radius ι·ρ·m about 0; the arc is pulled back from (-h, h).
    """
    if s == s_prime:
        raise EqualSlopes(s)
    rho = Fraction(rho)
    i = intersection_number(s, s_prime)
    sign = 1 if s.p * s_prime.q - s.q * s_prime.p > 0 else -1
    phi = IntegerMatrix2(s.p, s.q, sign * s_prime.p, sign * s_prime.q)
    # tangency of B_m(s) and B_ρm(s'): m·(ρm)·ι² = 1, so m² = 1/(ρι²)
    m_squared = 1 / (rho * i * i)
    h = _sqrt_ratio((i * rho) ** 2 * m_squared)
    inverse = phi.adjugate()
    start = inverse.act_on_point(BoundaryPoint.surd(0, -h.b, h.radicand) if h.b else BoundaryPoint.rational(-h.a))
    end = inverse.act_on_point(h)
    a, b, c = _quadratic(s, s_prime, rho)
    # the geodesic meets the boundary where Q vanishes, and Q has discriminant 4ρι²
    if b * b - 4 * a * c != 4 * rho * i * i:
        raise PostconditionError("excluded quadratic has the wrong discriminant",
                                 {"slope": str(s), "image": str(s_prime)})
    arc = BoundaryArc(start, end, a, b, c, "Obstruction", s, s_prime)
    if arc.value_sign(start) or arc.value_sign(end):
        raise PostconditionError("geodesic endpoints are not roots of the excluded quadratic",
                                 {"slope": str(s), "image": str(s_prime), "rho": str(rho)})
    return arc


# ---------------------------------------------------------------------------
# Linear intervals on R ∪ {∞}; lo None stands for -∞

@dataclass(frozen=True)
class Interval:
    lo: Optional[BoundaryPoint]
    hi: BoundaryPoint
    lo_closed: bool = False
    hi_closed: bool = False

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo_closed and self.hi_closed and boundary_compare(self.lo, self.hi) == 0

    def contains(self, x: BoundaryPoint) -> bool:
        if self.lo is not None:
            c = boundary_compare(self.lo, x)
            if c > 0 or (c == 0 and not self.lo_closed):
                return False
        c = boundary_compare(x, self.hi)
        return c < 0 or (c == 0 and self.hi_closed)


FULL_CIRCLE = Interval(None, BoundaryPoint.infinity(), False, True)


def _nonempty(iv: Interval) -> bool:
    if iv.lo is None:
        return True
    c = boundary_compare(iv.lo, iv.hi)
    return c < 0 or (c == 0 and iv.lo_closed and iv.hi_closed)


def _intersect(first: Interval, second: Interval) -> Optional[Interval]:
    if first.lo is None or second.lo is None:
        lo, lo_closed = (second.lo, second.lo_closed) if first.lo is None else (first.lo, first.lo_closed)
    else:
        c = boundary_compare(first.lo, second.lo)
        if c == 0:
            lo, lo_closed = first.lo, first.lo_closed and second.lo_closed
        else:
            lo, lo_closed = (first.lo, first.lo_closed) if c > 0 else (second.lo, second.lo_closed)
    c = boundary_compare(first.hi, second.hi)
    if c == 0:
        hi, hi_closed = first.hi, first.hi_closed and second.hi_closed
    else:
        hi, hi_closed = (first.hi, first.hi_closed) if c < 0 else (second.hi, second.hi_closed)
    result = Interval(lo, hi, lo_closed, hi_closed)
    return result if _nonempty(result) else None


def _subtract(iv: Interval, cut: Interval) -> List[Interval]:
    pieces = []
    if cut.lo is not None:
        left = _intersect(iv, Interval(None, cut.lo, False, not cut.lo_closed))
        if left:
            pieces.append(left)
    if not cut.hi.infinite:
        right = _intersect(iv, Interval(cut.hi, BoundaryPoint.infinity(), not cut.hi_closed, True))
        if right:
            pieces.append(right)
    elif not cut.hi_closed:
        infinity = BoundaryPoint.infinity()
        point = _intersect(iv, Interval(infinity, infinity, True, True))
        if point:
            pieces.append(point)
    return pieces


def arc_pieces(arc: BoundaryArc) -> List[Interval]:
    """The open arc as linear intervals."""
    infinity = BoundaryPoint.infinity()
    if arc.start.infinite:
        return [Interval(None, arc.end)]
    if arc.end.infinite:
        return [Interval(arc.start, infinity)]
    if boundary_compare(arc.start, arc.end) < 0:
        return [Interval(arc.start, arc.end)]
    return [Interval(arc.start, infinity, False, True), Interval(None, arc.end)]


def subtract_arc(residual: List[Interval], arc: BoundaryArc) -> List[Interval]:
    for piece in arc_pieces(arc):
        residual = [rest for iv in residual for rest in _subtract(iv, piece)]
    return residual


def _interval_sort_key(iv: Interval):
    return (0,) if iv.lo is None else (1, iv.lo)


# ---------------------------------------------------------------------------
# Probes and coverage

@dataclass(frozen=True)
class ProbeRecord:
    slope: Slope
    summary: PreimageSummary
    arc: Optional[BoundaryArc]

    @property
    def mu(self):
        return self.summary.mu


@dataclass(frozen=True)
class DirectCheck:
    point: BoundaryPoint
    slope: Optional[Slope]
    mu: object
    rho: Optional[Fraction]
    discharged: bool


@dataclass
class CoverageState:
    kind: str
    height: int
    residual: List[Interval] = field(default_factory=lambda: [FULL_CIRCLE])
    probes: List[ProbeRecord] = field(default_factory=list)
    checks: List[DirectCheck] = field(default_factory=list)

    @property
    def arcs(self) -> List[BoundaryArc]:
        return [probe.arc for probe in self.probes if probe.arc is not None]

    def residual_is_finite(self) -> bool:
        return all(iv.is_point for iv in self.residual)

    def covers(self, x: BoundaryPoint) -> bool:
        return not any(iv.contains(x) for iv in self.residual)


def evaluate_probes(pres: Presentation, slopes: List[Slope]) -> List[PreimageSummary]:
    """Evaluate slope invariants for every probe; results keep the order of slopes."""
    threads = get_thread_count()
    if threads == 1 or len(slopes) < 2:
        return [slope_invariants(pres, s) for s in slopes]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: slope_invariants(pres, s), slopes))


def arc_for_summary(pres: Presentation, summary: PreimageSummary, kind: str, rho0=1) -> Optional[BoundaryArc]:
    """The excluded arc of a probe, or None when its image is itself or the nonslope."""
    s, mu = summary.slope, summary.mu
    if mu is NONSLOPE or mu == s:
        return None
    deg = degree(pres)
    return excluded_arc(kind, s, mu, rho=summary.rho, rho0=rho0, deg=deg, d=summary.d, e=e_constant(deg))


def probe_arcs(pres: Presentation, height: int, kind: str = "Obstruction") -> List[ProbeRecord]:
    """Every probe of height at most height with its excluded arc of the given kind."""
    slopes = farey_slopes(height)
    return [ProbeRecord(s, summary, arc_for_summary(pres, summary, kind))
            for s, summary in zip(slopes, evaluate_probes(pres, slopes))]


def coverage_run(pres: Presentation, height: int, kind: str = "Obstruction") -> CoverageState:
    """
    Remove the excluded arcs of all probes of height at most height from the circle.
    Arcs are subtracted in probe order, so the residual does not depend on threading.
    """
    if kind not in OBSTRUCTION_KINDS:
        raise BadParameter(f"coverage uses Obstruction or NetObstruction intervals, got {kind!r}")
    if orbifold_type(pres) != "Hyperbolic":
        raise UnsupportedOrbifold("coverage requires a hyperbolic orbifold")
    state = CoverageState(kind, height)
    for record in probe_arcs(pres, height, kind):
        state.probes.append(record)
        if record.arc is not None:
            state.residual = subtract_arc(state.residual, record.arc)
    state.residual.sort(key=_interval_sort_key)
    logger.info("coverage at height %d left %d residual pieces", height, len(state.residual))
    return state


def fixed_point_search(pres: Presentation, height: int) -> List[Tuple[Slope, Fraction]]:
    """Slopes of height at most height fixed by the slope function, with multipliers."""
    slopes = farey_slopes(height)
    return [(s, summary.rho) for s, summary in zip(slopes, evaluate_probes(pres, slopes)) if summary.mu == s]


@dataclass
class RationalityVerdict:
    tag: str
    slope: Optional[Slope] = None
    rho: Optional[Fraction] = None
    state: Optional[CoverageState] = None


def _direct_check(pres: Presentation, point: BoundaryPoint) -> DirectCheck:
    if not point.is_rational and not point.infinite:
        return DirectCheck(point, None, None, None, True)
    t = slope_of_cusp(point)
    summary = slope_invariants(pres, t)
    discharged = summary.mu != t or summary.rho < 1
    return DirectCheck(point, t, summary.mu, summary.rho, discharged)


def rationality_verdict(pres: Presentation, height: int, kind: str = "Obstruction") -> RationalityVerdict:
    """
    Obstructed when a fixed slope of height at most height has multiplier at least 1;
    CertifiedUnobstructed when coverage leaves finitely many points and each is
    discharged directly; Inconclusive otherwise.
    """
    if orbifold_type(pres) != "Hyperbolic":
        raise UnsupportedOrbifold("rationality verdicts require a hyperbolic orbifold")
    for s, rho in fixed_point_search(pres, height):
        if rho >= 1:
            return RationalityVerdict("Obstructed", s, rho)
    state = coverage_run(pres, height, kind)
    if not state.residual_is_finite():
        return RationalityVerdict("Inconclusive", state=state)
    for iv in state.residual:
        check = _direct_check(pres, iv.lo)
        state.checks.append(check)
        if check.slope is not None and check.mu == check.slope and check.rho >= 1:
            return RationalityVerdict("Obstructed", check.slope, check.rho, state)
    if all(check.discharged for check in state.checks):
        return RationalityVerdict("CertifiedUnobstructed", state=state)
    return RationalityVerdict("Inconclusive", state=state)


# ---------------------------------------------------------------------------
# Omit predicates

@dataclass(frozen=True)
class Consequence:
    name: str
    status: str
    detail: str = ""


@dataclass
class OmitReport:
    slope: Slope
    witness: Optional[SelfLiftWitness]
    consequences: List[Consequence] = field(default_factory=list)
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    limit_points: List[BoundaryPoint] = field(default_factory=list)


def _status(ok: bool) -> str:
    return "verified" if ok else "violated"


def omit_check(pres: Presentation, s: Slope, height: int = OMIT_CHECK_HEIGHT) -> OmitReport:
    """
    Look for a degree-one self-lift of a core arc of slope s and check what it predicts:
    fixed slopes t != s have c(t) = 1, the cusp of s avoids every excluded arc, and
    under stronger hypotheses it avoids their closures.
    """
    report = OmitReport(s, degree_one_self_lift(pres, s))
    if report.witness is None:
        return report
    cusp = cusp_of_slope(s)
    slopes = farey_slopes(height)
    summaries = dict(zip(slopes, evaluate_probes(pres, slopes)))
    fixed = [(t, summary) for t, summary in summaries.items() if summary.mu == t]

    bad = [str(t) for t, summary in fixed if t != s and summary.c != 1]
    report.consequences.append(Consequence(
        "fixed-slopes-single-component", _status(not bad),
        f"fixed slopes with c != 1: {', '.join(bad)}" if bad else ""))

    # half-space arcs only: a NetObstruction arc may contain the cusp, since e²/d² can exceed c(t)²
    arcs = [arc_for_summary(pres, summary, "Obstruction") for summary in summaries.values()]
    arcs = [arc for arc in arcs if arc is not None]
    hits = [str(arc.probe) for arc in arcs if arc.contains(cusp)]
    report.consequences.append(Consequence(
        "cusp-omitted", _status(not hits), f"arcs of probes {', '.join(hits)} contain the cusp" if hits else ""))

    nontrivial = [summary for summary in summaries.values() if summary.c != 0]
    report.hypotheses["c_times_d_exceeds_one"] = all(summary.c * summary.d > 1 for summary in nontrivial)
    if report.hypotheses["c_times_d_exceeds_one"]:
        touching = [str(arc.probe) for arc in arcs if arc.closure_contains(cusp)]
        report.consequences.append(Consequence(
            "cusp-omitted-by-closures", _status(not touching),
            f"closures of arcs of probes {', '.join(touching)} contain the cusp" if touching else ""))

    m1, m2 = elementary_divisors(pres)
    own = summaries.get(s) or slope_invariants(pres, s)
    report.hypotheses["divisors_exceed_one"] = m1 > 1 and m2 > 1
    report.hypotheses["hyperbolic"] = orbifold_type(pres) == "Hyperbolic"
    report.hypotheses["slope_not_obstruction"] = not (own.mu == s and own.rho >= 1)
    if report.hypotheses["divisors_exceed_one"] and report.hypotheses["slope_not_obstruction"]:
        obstructions = [str(t) for t, summary in fixed if summary.rho >= 1]
        touching = [str(arc.probe) for arc in arcs if arc.closure_contains(cusp)]
        ok = report.hypotheses["hyperbolic"] and not obstructions and not touching
        report.consequences.append(Consequence(
            "rational-and-closures-omit-cusp", _status(ok),
            "; ".join(filter(None, [
                "" if report.hypotheses["hyperbolic"] else "orbifold is Euclidean",
                f"obstructions {', '.join(obstructions)}" if obstructions else "",
                f"closures of arcs of probes {', '.join(touching)} contain the cusp" if touching else "",
            ]))))

    for t, summary in fixed:
        if t != s and summary.rho >= 1:
            report.limit_points.append(cusp_of_slope(t))
    if report.limit_points:
        logger.info("slope %s: obstructions other than s accumulate unexcluded points at %s",
                    s, ", ".join(str(x) for x in report.limit_points))
    return report
