"""Exact slopes, boundary points of the hyperbolic plane and integer 2x2 matrices.

Everything here is immutable and exact: integers, ``Fraction`` and a single
square root per boundary point. No floating point is used except by
``BoundaryPoint.to_float`` which exists for display only.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Dict, List, Optional, Tuple, Union

from sympy import factorint

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from utils.errors import ZeroZero

logger = logging.getLogger(__name__)

Vector = Tuple[int, int]


@dataclass(frozen=True)
class Slope:
    """Reduced extended rational p/q with q >= 0 and infinity stored as (1, 0)."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or math.gcd(self.p, self.q) != 1 or (self.q == 0 and self.p != 1):
            raise ValueError(f"({self.p}, {self.q}) is not a normalized slope; use make_slope")

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def direction(self) -> Vector:
        """The primitive integer vector (q, p) of a line of this slope."""
        return (self.q, self.p)

    def __str__(self) -> str:
        return format_slope(self)


class NonSlope:
    """The value of a slope function when every preimage component is trivial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NONSLOPE"

    def __str__(self) -> str:
        return "nonslope"

    def __reduce__(self):
        return (NonSlope, ())


NONSLOPE = NonSlope()

ExtendedSlope = Union[Slope, NonSlope]

INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


def make_slope(p: int, q: int) -> Slope:
    """
    Build the normalized slope equal to p/q.
    Args:
        p: numerator
        q: denominator, zero for infinity
    Returns:
        The reduced slope with q >= 0
    """
    p, q = int(p), int(q)
    if p == 0 and q == 0:
        raise ZeroZero()
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return Slope(p, q)


def parse_slope(text: str) -> Slope:
    """Parse "p/q", an integer "p", or "inf" into a slope."""
    cleaned = text.strip().lower()
    if cleaned in ("inf", "infinity", "∞"):
        return INFINITY
    parts = cleaned.split("/")
    if len(parts) > 2 or not all(parts):
        raise ValueError(f"Malformed slope {text!r}; expected p/q or inf")
    try:
        p = int(parts[0])
        q = int(parts[1]) if len(parts) == 2 else 1
    except ValueError:
        raise ValueError(f"Malformed slope {text!r}; expected p/q or inf") from None
    if p == 0 and q == 0:
        raise ZeroZero(text.strip())
    return make_slope(p, q)


def format_slope(s: ExtendedSlope) -> str:
    if isinstance(s, NonSlope):
        return "nonslope"
    if s.is_infinite:
        return "inf"
    return f"{s.p}/{s.q}"


def format_rational(x: Union[int, Fraction]) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def slope_value(s: Slope) -> Optional[Fraction]:
    """The rational value of s, or None for infinity."""
    if s.is_infinite:
        return None
    return Fraction(s.p, s.q)


def slope_sort_key(s: Slope) -> Tuple[int, int, Fraction]:
    """Ascending height, then infinity, then ascending value."""
    if s.is_infinite:
        return (s.height, 0, Fraction(0))
    return (s.height, 1, Fraction(s.p, s.q))


def intersection_number(s: Slope, t: Slope) -> int:
    return abs(s.p * t.q - t.p * s.q)


def intersection_multiset(first: Dict[Slope, int], second: Dict[Slope, int]) -> Fraction:
    """
    Bilinear extension of the intersection number to weighted multisets.
    Args:
        first: slope -> positive weight
        second: slope -> positive weight
    Returns:
        Sum over all pairs of weight * weight * intersection number
    """
    total = Fraction(0)
    for s, w in first.items():
        for t, v in second.items():
            total += Fraction(w) * Fraction(v) * intersection_number(s, t)
    return total


def farey_fractions(n: int) -> List[Tuple[int, int]]:
    """The Farey sequence of order n on [0, 1] as (numerator, denominator) pairs."""
    a, b, c, d = 0, 1, 1, n
    terms = [(a, b)]
    while c <= n:
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        terms.append((a, b))
    return terms


def farey_slopes(height: int) -> List[Slope]:
    """
    All reduced slopes of height at most ``height``, each exactly once.
    Every such slope is ±a/b or ±b/a for a Farey fraction a/b of that order.
    Returns:
        Slopes sorted by ascending height, then infinity, then ascending value
    """
    if height < 1:
        raise ValueError(f"height must be positive, got {height}")
    found = set()
    for a, b in farey_fractions(height):
        for p, q in ((a, b), (-a, b), (b, a), (-b, a)):
            found.add(make_slope(p, q))
    return sorted(found, key=slope_sort_key)


def _squarefree_split(n: int) -> Tuple[int, int]:
    """Write n = k^2 * m with m squarefree and return (k, m)."""
    k, m = 1, 1
    for prime, exponent in factorint(n).items():
        k *= prime ** (exponent // 2)
        if exponent % 2:
            m *= prime
    return k, m


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def surd_sign(u: Fraction, v: Fraction, radicand: int) -> int:
    """Sign of u + v*sqrt(radicand) for radicand >= 1."""
    if v == 0 or radicand == 1:
        return _sign(u + v) if radicand == 1 else _sign(u)
    su, sv = _sign(u), _sign(v)
    if su == 0 or su == sv:
        return sv
    lhs, rhs = u * u, v * v * radicand
    if lhs > rhs:
        return su
    if lhs < rhs:
        return sv
    return 0


def two_surd_sign(alpha: Fraction, beta: Fraction, d1: int, gamma: Fraction, d2: int) -> int:
    """Sign of alpha + beta*sqrt(d1) + gamma*sqrt(d2) by squaring with sign tracking."""
    if d1 == d2:
        return surd_sign(alpha, beta + gamma, d1)
    left = surd_sign(alpha, beta, d1)
    right = _sign(gamma)
    if left == 0 or left == right:
        return right
    if right == 0:
        return left
    # opposite signs: compare squares of the two parts
    excess = surd_sign(alpha * alpha + beta * beta * d1 - gamma * gamma * d2, 2 * alpha * beta, d1)
    if excess > 0:
        return left
    if excess < 0:
        return right
    return 0


@total_ordering
@dataclass(frozen=True, eq=True)
class BoundaryPoint:
    """
    A point of the circle R ∪ {∞}: a rational, a quadratic surd a + b*sqrt(D),
    or infinity. Surds are kept with D squarefree and b nonzero; rationals
    have b = 0 and D = 1. Ordering cuts the circle at infinity, which sorts
    after every real point.
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    radicand: int = 1
    infinite: bool = False

    @classmethod
    def rational(cls, value) -> "BoundaryPoint":
        return cls(Fraction(value))

    @classmethod
    def infinity(cls) -> "BoundaryPoint":
        return cls(infinite=True)

    @classmethod
    def surd(cls, a, b, radicand: int) -> "BoundaryPoint":
        """a + b*sqrt(radicand), normalized."""
        a, b = Fraction(a), Fraction(b)
        if radicand < 0:
            raise ValueError(f"radicand must be nonnegative, got {radicand}")
        if radicand == 0 or b == 0:
            return cls(a)
        k, core = _squarefree_split(radicand)
        if core == 1:
            return cls(a + b * k)
        return cls(a, b * k, core)

    @property
    def is_rational(self) -> bool:
        return not self.infinite and self.b == 0

    def compare(self, other: "BoundaryPoint") -> int:
        return boundary_compare(self, other)

    def __lt__(self, other: "BoundaryPoint") -> bool:
        return boundary_compare(self, other) < 0

    def to_float(self) -> float:
        if self.infinite:
            return math.inf
        return float(self.a) + float(self.b) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        return format_point(self)


def boundary_compare(x: BoundaryPoint, y: BoundaryPoint) -> int:
    """
    Exact three-way comparison of two boundary points.
    Returns:
        -1, 0 or 1; infinity is the largest point
    """
    if x.infinite or y.infinite:
        return int(x.infinite) - int(y.infinite)
    return two_surd_sign(x.a - y.a, x.b, x.radicand, -y.b, y.radicand)


def format_point(x: BoundaryPoint) -> str:
    if x.infinite:
        return "inf"
    if x.b == 0:
        return format_rational(x.a)
    return f"({format_rational(x.a)} + {format_rational(x.b)}*sqrt({x.radicand}))"


def cusp_of_slope(s: Slope) -> BoundaryPoint:
    """The cusp -q/p of the slope p/q."""
    if s.p == 0:
        return BoundaryPoint.infinity()
    return BoundaryPoint.rational(Fraction(-s.q, s.p))


def slope_of_cusp(x: BoundaryPoint) -> Slope:
    if x.infinite:
        return ZERO
    if not x.is_rational:
        raise ValueError(f"{format_point(x)} is irrational and is not the cusp of a slope")
    if x.a == 0:
        return INFINITY
    return make_slope(-x.a.denominator, x.a.numerator)


@dataclass(frozen=True)
class IntegerMatrix2:
    """The integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "IntegerMatrix2":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntegerMatrix2") -> "IntegerMatrix2":
        return IntegerMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def adjugate(self) -> "IntegerMatrix2":
        return IntegerMatrix2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "IntegerMatrix2":
        if self.det not in (1, -1):
            raise ValueError(f"matrix with determinant {self.det} has no integer inverse")
        adj = self.adjugate()
        return IntegerMatrix2(adj.a * self.det, adj.b * self.det, adj.c * self.det, adj.d * self.det)

    def apply_vector(self, v: Vector) -> Vector:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def act_on_slope(self, s: Slope) -> Slope:
        """Linear fractional action on p/q: (a p + b q) / (c p + d q)."""
        if self.det == 0:
            raise ValueError("singular matrix does not act on slopes")
        return make_slope(self.a * s.p + self.b * s.q, self.c * s.p + self.d * s.q)

    def act_on_point(self, x: BoundaryPoint) -> BoundaryPoint:
        """Exact Möbius action on a boundary point; surds are rationalized by the conjugate."""
        if self.det == 0:
            raise ValueError("singular matrix does not act on the boundary")
        if x.infinite:
            if self.c == 0:
                return BoundaryPoint.infinity()
            return BoundaryPoint.rational(Fraction(self.a, self.c))
        n0, n1 = self.a * x.a + self.b, self.a * x.b
        m0, m1 = self.c * x.a + self.d, self.c * x.b
        if m0 == 0 and m1 == 0:
            return BoundaryPoint.infinity()
        norm = m0 * m0 - m1 * m1 * x.radicand
        real = (n0 * m0 - n1 * m1 * x.radicand) / norm
        irrational = (n1 * m0 - n0 * m1) / norm
        return BoundaryPoint.surd(real, irrational, x.radicand)


def sl2_completion(s: Slope) -> IntegerMatrix2:
    """A matrix Q in SL(2, Z) whose first column is (p, q), so Q maps infinity to s."""
    if s.q == 0:
        return IntegerMatrix2.identity()
    # x p + y q = 1, so [[p, -y], [q, x]] has determinant 1
    x, y, _ = igcdex(s.p, s.q)
    return IntegerMatrix2(s.p, -int(y), s.q, int(x))


def positive_parabolic(s: Slope, power: int) -> IntegerMatrix2:
    """The power-th power of the positive parabolic generator fixing s."""
    q = sl2_completion(s)
    return q @ IntegerMatrix2(1, power, 0, 1) @ q.inverse()

