"""
Equator detection for NET maps and the check of the degree-n mating family.

A slope s carries an equator when the pullback of a curve of slope s is a
single curve mapping with degree deg(f) onto itself, and f fixes a postcritical
point (which settles orientation).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from engines.halfspace import evaluate_probes
from engines.pullback import PreimageSummary, degree_one_self_lift
from utils.config import DEFAULT_EQUATOR_HEIGHT
from utils.errors import BadParameter
from utils.presentation import Presentation, d_of_slope, degree, family_fn, postcritical_portrait
from utils.slopes import ExtendedSlope, Slope, farey_slopes, make_slope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquatorReport:
    slope: Slope
    d: int
    mu: ExtendedSlope
    c: int
    rho: Fraction
    degree_condition: bool
    fixed_condition: bool
    portrait_condition: bool

    @property
    def equator(self) -> bool:
        return self.degree_condition and self.fixed_condition and self.portrait_condition

    @property
    def orientation(self) -> str:
        return "fixed postcritical point" if self.portrait_condition else "undetermined"


def _equator_report(summary: PreimageSummary, deg: int, portrait_condition: bool) -> EquatorReport:
    return EquatorReport(
        slope=summary.slope,
        d=summary.d,
        mu=summary.mu,
        c=summary.c,
        rho=summary.rho,
        degree_condition=summary.d == deg,
        fixed_condition=summary.mu == summary.slope,
        portrait_condition=portrait_condition,
    )


def find_equators(pres: Presentation, height: int = DEFAULT_EQUATOR_HEIGHT) -> List[EquatorReport]:
    """
    Evaluate the equator conditions for every slope of height at most height.
    Args:
        pres: A valid presentation
        height: Largest probe height
    Returns:
        One report per slope in Farey order; filter on .equator for the equators
    """
    deg = degree(pres)
    portrait_condition = bool(postcritical_portrait(pres).fixed_labels())
    slopes = farey_slopes(height)
    reports = [_equator_report(summary, deg, portrait_condition) for summary in evaluate_probes(pres, slopes)]
    logger.info("found %d equators up to height %d", sum(r.equator for r in reports), height)
    return reports


def equator_slopes(n: int) -> List[Slope]:
    """The slopes 2m/(n - 2m - 1) for 0 <= m <= ceil((n - 2)/2)."""
    if n < 4:
        raise BadParameter(f"the family is defined for n >= 4, got {n}")
    return [make_slope(2 * m, n - 2 * m - 1) for m in range(math.ceil((n - 2) / 2) + 1)]


def family_fixed_slopes(n: int) -> List[Slope]:
    """Slopes p/q with |p| <= 2 and |p - 2q| <= 2, the only candidates for obstructions in the family."""
    if n < 4:
        raise BadParameter(f"the family is defined for n >= 4, got {n}")
    found = []
    for p in range(-2, 3):
        for q in range(-2, 3):
            if (p, q) != (0, 0) and abs(p - 2 * q) <= 2:
                s = make_slope(p, q)
                if s not in found:
                    found.append(s)
    return found


@dataclass
class FamilyReport:
    n: int
    equators: List[EquatorReport] = field(default_factory=list)
    count_expected: int = 0
    non_fixed_labels: List[str] = field(default_factory=list)
    portrait_ok: bool = False
    witnesses: Dict[Slope, bool] = field(default_factory=dict)
    candidate_degrees: Dict[Slope, int] = field(default_factory=dict)

    @property
    def count_ok(self) -> bool:
        return len(set(r.slope for r in self.equators)) == self.count_expected

    @property
    def unobstructed(self) -> bool:
        return all(d != 1 for d in self.candidate_degrees.values())

    @property
    def passed(self) -> bool:
        return (
            self.count_ok
            and self.portrait_ok
            and all(r.equator for r in self.equators)
            and all(self.witnesses.values())
            and self.unobstructed
        )


def verify_family_matings(n: int) -> FamilyReport:
    """Check that the degree-n family member has ceil(n/2) equators at the slopes 2m/(n - 2m - 1)."""
    slopes = equator_slopes(n)
    pres = family_fn(n)
    portrait = postcritical_portrait(pres)
    report = FamilyReport(n, count_expected=math.ceil(n / 2))
    report.non_fixed_labels = [e.label for e in portrait.entries if not e.fixed]
    # even n moves exactly one postcritical point, odd n fixes all four
    report.portrait_ok = len(report.non_fixed_labels) == (1 if n % 2 == 0 else 0)
    portrait_condition = bool(portrait.fixed_labels())
    report.equators = [_equator_report(summary, n, portrait_condition)
                       for summary in evaluate_probes(pres, slopes)]
    for s in (make_slope(0, 1), make_slope(2, 1)):
        report.witnesses[s] = degree_one_self_lift(pres, s) is not None
    report.candidate_degrees = {s: d_of_slope(pres, s) for s in family_fixed_slopes(n)}
    logger.info("family member of degree %d %s", n, "passed" if report.passed else "failed")
    return report
