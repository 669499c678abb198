"""
Lattice presentations of NET maps.

A presentation is a sublattice Λ1 = Zλ1 + Zλ2 of Z², a translation term b
in Λ1 and one straight green segment per corner class. Corner classes are
labelled "00", "10", "01", "11"; the corner of class (e1, e2) is
e1*λ1 + e2*λ2. Γ1 is the group of maps x -> 2λ ± x with λ in Λ1.
"""
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from sympy import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import invariant_factors

from utils.config import RANDOM_BASIS_WINDOW, RANDOM_GREEN_WINDOW, RANDOM_RETRY_CAP
from utils.errors import BadParameter, ExhaustedRetries, LatticeImageFailure
from utils.slopes import Slope

logger = logging.getLogger(__name__)

Vector = Tuple[int, int]
Point = Tuple[Fraction, Fraction]
ClassKey = Tuple[Fraction, Fraction]

CORNER_CLASSES = ("00", "10", "01", "11")


def class_bits(label: str) -> Tuple[int, int]:
    return int(label[0]), int(label[1])


def class_label(e1: int, e2: int) -> str:
    return f"{e1 % 2}{e2 % 2}"


@dataclass(frozen=True)
class Presentation:
    lambda1: Vector
    lambda2: Vector
    translation: Vector
    # far endpoints in CORNER_CLASSES order; None marks a trivial green
    greens: Tuple[Optional[Vector], Optional[Vector], Optional[Vector], Optional[Vector]]

    def green(self, label: str) -> Optional[Vector]:
        return self.greens[CORNER_CLASSES.index(label)]

    @property
    def det(self) -> int:
        return self.lambda1[0] * self.lambda2[1] - self.lambda2[0] * self.lambda1[1]


def make_presentation(lambda1: Vector, lambda2: Vector, translation: Vector,
                      greens: Dict[str, Optional[Vector]]) -> Presentation:
    """Build a presentation from a label -> far endpoint mapping (None for trivial)."""
    ordered = tuple(
        None if greens.get(label) is None else (int(greens[label][0]), int(greens[label][1]))
        for label in CORNER_CLASSES
    )
    return Presentation(
        (int(lambda1[0]), int(lambda1[1])),
        (int(lambda2[0]), int(lambda2[1])),
        (int(translation[0]), int(translation[1])),
        ordered,
    )


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    witnesses: Tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Mirror:
    """A green segment doubled about its corner: [center - half, center + half]."""

    label: str
    center: Vector
    half: Vector

    @property
    def segment(self) -> Tuple[Vector, Vector]:
        c, g = self.center, self.half
        return (c[0] - g[0], c[1] - g[1]), (c[0] + g[0], c[1] + g[1])


@dataclass(frozen=True)
class PortraitEntry:
    label: str
    representative: Vector
    image_label: str
    critical: bool

    @property
    def fixed(self) -> bool:
        return self.label == self.image_label


@dataclass(frozen=True)
class Portrait:
    entries: Tuple[PortraitEntry, ...] = field(default_factory=tuple)

    def image(self, label: str) -> str:
        return self.entry(label).image_label

    def entry(self, label: str) -> PortraitEntry:
        for entry in self.entries:
            if entry.label == label:
                return entry
        raise KeyError(label)

    def fixed_labels(self) -> List[str]:
        return [e.label for e in self.entries if e.fixed]


# ---------------------------------------------------------------------------
# Lattice arithmetic

def lattice_coordinates(pres: Presentation, x) -> Point:
    """Coordinates of x in the basis (λ1, λ2)."""
    det = pres.det
    (a, c), (b, d) = pres.lambda1, pres.lambda2
    x0, x1 = Fraction(x[0]), Fraction(x[1])
    return (x0 * d - x1 * b) / det, (a * x1 - c * x0) / det


def from_coordinates(pres: Presentation, coords) -> Point:
    c1, c2 = coords
    return (c1 * pres.lambda1[0] + c2 * pres.lambda2[0], c1 * pres.lambda1[1] + c2 * pres.lambda2[1])


def in_lattice(pres: Presentation, x) -> bool:
    c1, c2 = lattice_coordinates(pres, x)
    return c1.denominator == 1 and c2.denominator == 1


def corner(pres: Presentation, label: str) -> Vector:
    e1, e2 = class_bits(label)
    return (e1 * pres.lambda1[0] + e2 * pres.lambda2[0], e1 * pres.lambda1[1] + e2 * pres.lambda2[1])


def postcritical_representative(pres: Presentation, label: str) -> Vector:
    far = pres.green(label)
    return corner(pres, label) if far is None else far


def postcritical_representatives(pres: Presentation) -> Dict[str, Vector]:
    return {label: postcritical_representative(pres, label) for label in CORNER_CLASSES}


def gamma1_class_key(pres: Presentation, x) -> ClassKey:
    """Canonical key of the Γ1-orbit of x."""
    c1, c2 = lattice_coordinates(pres, x)
    plus = (c1 % 2, c2 % 2)
    minus = ((-c1) % 2, (-c2) % 2)
    return min(plus, minus)


def gamma1_equivalent(pres: Presentation, x, y) -> bool:
    return gamma1_class_key(pres, x) == gamma1_class_key(pres, y)


def postcritical_keys(pres: Presentation) -> Dict[ClassKey, str]:
    return {gamma1_class_key(pres, z): label for label, z in postcritical_representatives(pres).items()}


# ---------------------------------------------------------------------------
# Derived combinatorics

def degree(pres: Presentation) -> int:
    return abs(pres.det)


def elementary_divisors(pres: Presentation) -> Tuple[int, int]:
    """Smith normal form diagonal (m1, m2) of [λ1 λ2], m1 | m2."""
    matrix = DM([[pres.lambda1[0], pres.lambda2[0]], [pres.lambda1[1], pres.lambda2[1]]], ZZ)
    factors = sorted(abs(int(f)) for f in invariant_factors(matrix))
    return factors[0], factors[1]


def d_of_slope(pres: Presentation, s: Slope) -> int:
    """Order of (q, p) in Z²/Λ1."""
    c1, c2 = lattice_coordinates(pres, s.direction)
    return c1.denominator * c2.denominator // math.gcd(c1.denominator, c2.denominator)


def lattice_points_in_box(pres: Presentation, xmin, ymin, xmax, ymax, scale: int = 1) -> List[Vector]:
    """
    All points scale*λ with λ in Λ1 lying in the closed box.
    Args:
        scale: 2 enumerates 2Λ1
    Returns:
        Points sorted lexicographically by lattice coordinates
    """
    corners = [(xmin, ymin), (xmin, ymax), (xmax, ymin), (xmax, ymax)]
    coords = [lattice_coordinates(pres, (Fraction(x) / scale, Fraction(y) / scale)) for x, y in corners]
    lo1 = math.floor(min(c[0] for c in coords))
    hi1 = math.ceil(max(c[0] for c in coords))
    lo2 = math.floor(min(c[1] for c in coords))
    hi2 = math.ceil(max(c[1] for c in coords))
    points = []
    for i in range(lo1, hi1 + 1):
        for j in range(lo2, hi2 + 1):
            x = scale * (i * pres.lambda1[0] + j * pres.lambda2[0])
            y = scale * (i * pres.lambda1[1] + j * pres.lambda2[1])
            if xmin <= x <= xmax and ymin <= y <= ymax:
                points.append((x, y))
    return points


def coset_representatives(pres: Presentation) -> List[Vector]:
    """Points of Z² whose lattice coordinates lie in [0, 1)², one per coset of Λ1."""
    span = [(0, 0), pres.lambda1, pres.lambda2,
            (pres.lambda1[0] + pres.lambda2[0], pres.lambda1[1] + pres.lambda2[1])]
    xs = [p[0] for p in span]
    ys = [p[1] for p in span]
    reps = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            c1, c2 = lattice_coordinates(pres, (x, y))
            if 0 <= c1 < 1 and 0 <= c2 < 1:
                reps.append((x, y))
    return reps


def critical_point_classes(pres: Presentation) -> List[ClassKey]:
    """Γ1-classes of Z² outside Λ1; there are 2*degree - 2 of them."""
    keys = set()
    for rx, ry in coset_representatives(pres):
        for label in CORNER_CLASSES:
            cx, cy = corner(pres, label)
            point = (rx + cx, ry + cy)
            if not in_lattice(pres, point):
                keys.add(gamma1_class_key(pres, point))
    return sorted(keys)


def base_mirrors(pres: Presentation) -> List[Mirror]:
    mirrors = []
    for label in CORNER_CLASSES:
        far = pres.green(label)
        if far is None:
            continue
        c = corner(pres, label)
        mirrors.append(Mirror(label, c, (far[0] - c[0], far[1] - c[1])))
    return mirrors


def _segment_meets_box(p, q, xmin, ymin, xmax, ymax) -> bool:
    if max(p[0], q[0]) < xmin or min(p[0], q[0]) > xmax:
        return False
    if max(p[1], q[1]) < ymin or min(p[1], q[1]) > ymax:
        return False
    dx, dy = q[0] - p[0], q[1] - p[1]
    sides = set()
    for x, y in ((xmin, ymin), (xmin, ymax), (xmax, ymin), (xmax, ymax)):
        cross = dx * (y - p[1]) - dy * (x - p[0])
        sides.add((cross > 0) - (cross < 0))
    return sides != {1} and sides != {-1}


def mirror_segments(pres: Presentation, box) -> List[Mirror]:
    """
    Every mirror of the 2Λ1-periodic family meeting the closed box.
    Args:
        box: (xmin, ymin, xmax, ymax), rationals allowed
    Returns:
        Mirrors sorted by corner class, then center
    """
    xmin, ymin, xmax, ymax = (Fraction(v) for v in box)
    found = []
    for base in base_mirrors(pres):
        reach = abs(base.half[0]) + abs(base.half[1])
        shifts = lattice_points_in_box(
            pres,
            xmin - reach - base.center[0], ymin - reach - base.center[1],
            xmax + reach - base.center[0], ymax + reach - base.center[1],
            scale=2,
        )
        for sx, sy in shifts:
            mirror = Mirror(base.label, (base.center[0] + sx, base.center[1] + sy), base.half)
            start, end = mirror.segment
            if _segment_meets_box(start, end, xmin, ymin, xmax, ymax):
                found.append(mirror)
    found.sort(key=lambda m: (CORNER_CLASSES.index(m.label), m.center))
    return found


# ---------------------------------------------------------------------------
# Dynamics

def postcritical_portrait(pres: Presentation) -> Portrait:
    """Images of the four postcritical points under Φ(x) = Ax + b, read off mod 2Λ1."""
    t1, t2 = lattice_coordinates(pres, pres.translation)
    if t1.denominator != 1 or t2.denominator != 1:
        raise LatticeImageFailure(f"translation {pres.translation} is not in the lattice")
    entries = []
    for label in CORNER_CLASSES:
        z = postcritical_representative(pres, label)
        # lattice coordinates of A z + b are z + A^{-1} b
        image = class_label(z[0] + int(t1), z[1] + int(t2))
        entries.append(PortraitEntry(label, z, image, not in_lattice(pres, z)))
    return Portrait(tuple(entries))


def orbifold_type(pres: Presentation) -> str:
    if any(entry.critical for entry in postcritical_portrait(pres).entries):
        return "Hyperbolic"
    return "Euclidean"


# ---------------------------------------------------------------------------
# Validation

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0
            and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segment_intersection(a, b, c, d):
    """
    Intersection of closed segments [a, b] and [c, d].
    Returns:
        None, ("point", p) or ("overlap", (p, q))
    """
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if d1 == 0 and d2 == 0:
        shared = [p for p in (a, b, c, d) if _on_segment(p, a, b) and _on_segment(p, c, d)]
        shared = sorted(set(shared))
        if not shared:
            return None
        if len(shared) == 1:
            return ("point", shared[0])
        return ("overlap", (shared[0], shared[-1]))
    if (d1 > 0) != (d2 > 0) and d1 != 0 and d2 != 0 and (d3 > 0) != (d4 > 0) and d3 != 0 and d4 != 0:
        t = Fraction(d1, d1 - d2)
        return ("point", (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    for p in (a, b):
        if _on_segment(p, c, d):
            return ("point", p)
    for p in (c, d):
        if _on_segment(p, a, b):
            return ("point", p)
    return None


def _interior_lattice_points(a: Vector, b: Vector) -> List[Vector]:
    gx, gy = b[0] - a[0], b[1] - a[1]
    k = math.gcd(gx, gy)
    return [(a[0] + j * gx // k, a[1] + j * gy // k) for j in range(1, k)]


def _gamma1_images(pres: Presentation, segment, target) -> List[Tuple[Vector, Vector]]:
    """Images of segment under Γ1 whose bounding box meets the bounding box of target."""
    (ax, ay), (bx, by) = segment
    (cx, cy), (dx, dy) = target
    txmin, txmax = min(cx, dx), max(cx, dx)
    tymin, tymax = min(cy, dy), max(cy, dy)
    images = []
    for sign in (1, -1):
        sxs, sys_ = (sign * ax, sign * bx), (sign * ay, sign * by)
        shifts = lattice_points_in_box(
            pres, txmin - max(sxs), tymin - max(sys_), txmax - min(sxs), tymax - min(sys_), scale=2)
        for ux, uy in shifts:
            images.append(((ux + sign * ax, uy + sign * ay), (ux + sign * bx, uy + sign * by)))
    return images


def validate(pres: Presentation) -> List[Violation]:
    """
    Check every structural requirement of a presentation.
    Returns:
        Violations, empty when the presentation is valid
    """
    if pres.det == 0:
        return [Violation("SingularLattice", f"λ1={pres.lambda1} and λ2={pres.lambda2} are dependent",
                          (pres.lambda1, pres.lambda2))]
    violations = []
    if not in_lattice(pres, pres.translation):
        violations.append(Violation("TranslationNotInLattice",
                                    f"translation {pres.translation} is not in Λ1", (pres.translation,)))
    reps = postcritical_representatives(pres)
    greens = {}
    for label in CORNER_CLASSES:
        far = pres.green(label)
        if far is None:
            continue
        c = corner(pres, label)
        if gamma1_equivalent(pres, far, c):
            violations.append(Violation(
                "GreenAtCorner", f"green {label} ends at {far}, equivalent to its own corner {c}", (c, far)))
            continue
        greens[label] = (c, far)

    labels = list(CORNER_CLASSES)
    for i, first in enumerate(labels):
        for second in labels[i + 1:]:
            if gamma1_equivalent(pres, reps[first], reps[second]):
                violations.append(Violation(
                    "EquivalentPostcriticalPoints",
                    f"points {reps[first]} ({first}) and {reps[second]} ({second}) are Γ1-equivalent",
                    (reps[first], reps[second])))

    rep_keys = {gamma1_class_key(pres, z) for z in reps.values()}
    for label, (c, far) in greens.items():
        for point in _interior_lattice_points(c, far):
            if in_lattice(pres, point) or gamma1_class_key(pres, point) in rep_keys:
                violations.append(Violation(
                    "GreenMeetsMarkedPoint",
                    f"green {label} passes through the marked point {point}", (label, point)))

    for i, first in enumerate(labels):
        if first not in greens:
            continue
        for second in labels[i:]:
            if second not in greens:
                continue
            for image in _gamma1_images(pres, greens[second], greens[first]):
                if first == second and set(image) == set(greens[first]):
                    continue
                hit = segment_intersection(*greens[first], *image)
                if hit is None:
                    continue
                if hit[0] == "point" and hit[1] in greens[first] and hit[1] in image and in_lattice(pres, hit[1]):
                    continue
                violations.append(Violation(
                    "GreenOrbitsIntersect",
                    f"green {first} meets the Γ1-image {image} of green {second}",
                    (first, second, image)))
    return violations


def is_valid(pres: Presentation) -> bool:
    return not validate(pres)


# ---------------------------------------------------------------------------
# Generators

def family_fn(n: int) -> Presentation:
    """The degree-n map with A = [[n, -1], [0, 1]], b = (n, 0) and two nontrivial greens."""
    if n < 4:
        raise BadParameter(f"the family is defined for n >= 4, got {n}")
    return make_presentation((n, 0), (-1, 1), (n, 0), {"00": (1, 0), "10": (2, 0), "01": None, "11": None})


def random_presentation(seed, bound: int, retry_cap: int = RANDOM_RETRY_CAP) -> Presentation:
    """
    Sample a valid presentation deterministically from seed.
    Args:
        seed: anything accepted by random.Random
        bound: maximal degree, at least 2
        retry_cap: samples drawn before giving up
    Returns:
        A presentation with 2 <= degree <= bound passing validate
    """
    if bound < 2:
        raise BadParameter(f"degree bound must be at least 2, got {bound}")
    rng = random.Random(seed)
    w, g = RANDOM_BASIS_WINDOW, RANDOM_GREEN_WINDOW
    for attempt in range(retry_cap):
        l1 = (rng.randint(-w, w), rng.randint(-w, w))
        l2 = (rng.randint(-w, w), rng.randint(-w, w))
        det = abs(l1[0] * l2[1] - l2[0] * l1[1])
        if not 2 <= det <= bound:
            continue
        skeleton = make_presentation(l1, l2, (0, 0), {})
        translation = corner(skeleton, rng.choice(CORNER_CLASSES))
        greens = {}
        for label in CORNER_CLASSES:
            if rng.random() < 0.4:
                greens[label] = None
                continue
            c = corner(skeleton, label)
            greens[label] = (c[0] + rng.randint(-g, g), c[1] + rng.randint(-g, g))
        pres = make_presentation(l1, l2, translation, greens)
        if is_valid(pres):
            logger.debug("random presentation for seed %r accepted after %d attempts", seed, attempt + 1)
            return pres
    raise ExhaustedRetries(f"no valid presentation of degree <= {bound} after {retry_cap} samples (seed {seed!r})")
