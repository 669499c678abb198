"""
Slope function evaluation by photon tracing, and the preimage graph of core arcs.

A curve of slope p/q is a line of direction u = (q, p) in the plane. Its
preimage components are lines of the same direction, and each is evaluated by
running along S = [v, v + 2k·u] and reflecting through every spin mirror the
segment crosses. With crossing centers λ1..λn in order the folded endpoint is
w' = w + 2·Σ(-1)^(i+1)·λi, and half of w' - v, written in the basis (λ1, λ2),
gives the slope of the component. A segment meeting an odd number of mirrors
separates one point of P_f from the other three, and its component is peripheral.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from utils.config import DEFAULT_OFFSET, GENERICITY_ROUNDS
from utils.errors import (
    BadParameter,
    DegenerateArcModel,
    NonGeneric,
    NonGenericUnresolvable,
    NotACoreArc,
    PostconditionError,
)
from utils.presentation import (
    ClassKey,
    Presentation,
    base_mirrors,
    coset_representatives,
    degree,
    d_of_slope,
    gamma1_class_key,
    in_lattice,
    lattice_coordinates,
    postcritical_keys,
)
from utils.slopes import NONSLOPE, ExtendedSlope, Slope, igcdex, make_slope

logger = logging.getLogger(__name__)

Vector = Tuple[int, int]


@dataclass(frozen=True)
class Crossing:
    t: Fraction
    center: Vector
    label: str


@dataclass(frozen=True)
class PhotonTrace:
    direction: Vector
    offset: Fraction
    k: int
    start: Tuple[Fraction, Fraction]
    end: Tuple[Fraction, Fraction]
    crossings: Tuple[Crossing, ...]
    folded_end: Tuple[Fraction, Fraction]
    coords: Tuple[int, int]
    # S splits P_f one against three, so the component is peripheral
    peripheral: bool = False

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def parameters(self) -> List[Fraction]:
        """Crossing positions as fractions of the length of S."""
        return [c.t / (2 * self.k) for c in self.crossings]

    @property
    def trivial(self) -> bool:
        return self.peripheral or self.coords == (0, 0)

    @property
    def slope(self) -> Optional[Slope]:
        if self.trivial:
            return None
        return make_slope(self.coords[1], self.coords[0])


@dataclass(frozen=True)
class ComponentSummary:
    index: int
    trace: PhotonTrace

    @property
    def trivial(self) -> bool:
        return self.trace.trivial

    @property
    def slope(self) -> Optional[Slope]:
        return self.trace.slope


@dataclass(frozen=True)
class PreimageSummary:
    slope: Slope
    d: int
    components: Tuple[ComponentSummary, ...]
    c: int
    mu: ExtendedSlope
    rho: Fraction


def _dot(x, y):
    return x[0] * y[0] + x[1] * y[1]


class _LineGeometry:
    """Lattice data of one direction u = (q, p) relative to a presentation."""

    def __init__(self, pres: Presentation, direction: Vector):
        q, p = direction
        if math.gcd(q, p) != 1:
            raise BadParameter(f"direction {direction} is not primitive")
        self.pres = pres
        self.u = (q, p)
        self.normal = (p, -q)
        self.uu = q * q + p * p
        self.d = d_of_slope(pres, make_slope(p, q))
        l1n = _dot(pres.lambda1, self.normal)
        l2n = _dot(pres.lambda2, self.normal)
        x, y, g = igcdex(l1n, l2n)
        if g < 0:
            x, y, g = -x, -y, -g
        self.gap = int(g)
        x, y = int(x), int(y)
        # lattice vector whose pairing with the normal is the gap
        self.mu0 = (x * pres.lambda1[0] + y * pres.lambda2[0], x * pres.lambda1[1] + y * pres.lambda2[1])
        if self.gap * self.d != degree(pres):
            raise PostconditionError(
                "line gap times d(s) differs from the degree",
                {"gap": self.gap, "d": self.d, "degree": degree(pres)},
            )

    def crossings(self, point, t_lo, t_hi, include_lo: bool, collinear: str) -> List[Crossing]:
        """
        Crossings of X(t) = point + t*u, t between t_lo and t_hi, with the mirror family.
        Args:
            include_lo: whether t = t_lo counts (t = t_hi never does)
            collinear: "error" raises NonGeneric on a collinear overlap, "ignore" skips it
        Returns:
            Crossings sorted by t
        """
        o = _dot(point, self.normal)
        u, two_d = self.u, 2 * self.d
        found = []
        for mirror in base_mirrors(self.pres):
            c, g = mirror.center, mirror.half
            c_n, g_n = _dot(c, self.normal), _dot(g, self.normal)
            if g_n == 0:
                gap_steps = Fraction(o - c_n, 2 * self.gap)
                if gap_steps.denominator == 1 and collinear == "error":
                    self._check_overlap(point, c, g, int(gap_steps), t_lo, t_hi)
                continue
            reach = abs(g_n)
            j_lo = math.ceil(Fraction(o - c_n - reach, 2 * self.gap))
            j_hi = math.floor(Fraction(o - c_n + reach, 2 * self.gap))
            for j in range(j_lo, j_hi + 1):
                center0 = (c[0] + 2 * j * self.mu0[0], c[1] + 2 * j * self.mu0[1])
                s = Fraction(o - _dot(center0, self.normal), g_n)
                hit = (center0[0] + s * g[0], center0[1] + s * g[1])
                t0 = Fraction(_dot((hit[0] - point[0], hit[1] - point[1]), u), self.uu)
                m_lo = math.ceil((t_lo - t0) / two_d)
                m_hi = math.floor((t_hi - t0) / two_d)
                for m in range(m_lo, m_hi + 1):
                    t = t0 + two_d * m
                    if t > t_hi or t < t_lo or t == t_hi or (t == t_lo and not include_lo):
                        continue
                    if s == 0 or abs(s) == 1:
                        where = "center" if s == 0 else "endpoint"
                        raise NonGeneric(f"line meets a mirror {where} at t={t}")
                    center = (center0[0] + two_d * m * u[0], center0[1] + two_d * m * u[1])
                    found.append(Crossing(t, center, mirror.label))
        found.sort(key=lambda crossing: crossing.t)
        for first, second in zip(found, found[1:]):
            if first.t == second.t:
                raise NonGeneric(f"two mirrors meet the line at t={first.t}")
        return found

    def _check_overlap(self, point, c, g, j, t_lo, t_hi):
        center0 = (c[0] + 2 * j * self.mu0[0], c[1] + 2 * j * self.mu0[1])
        t0 = Fraction(_dot((center0[0] - point[0], center0[1] - point[1]), self.u), self.uu)
        extent = abs(Fraction(_dot(g, self.u), self.uu))
        two_d = 2 * self.d
        m_lo = math.floor((t_lo - extent - t0) / two_d)
        m_hi = math.ceil((t_hi + extent - t0) / two_d)
        for m in range(m_lo, m_hi + 1):
            center_t = t0 + two_d * m
            if center_t - extent < t_hi and center_t + extent > t_lo:
                raise NonGeneric(f"line overlaps a mirror centered at t={center_t}")


def _offset_schedule(base: Fraction) -> Iterator[Fraction]:
    """base, then points i/(2J+1) of the same unit interval for J = 1, 2, ..."""
    yield base
    floor = math.floor(base)
    seen = {base}
    for rounds in range(1, GENERICITY_ROUNDS + 1):
        for i in range(1, 2 * rounds + 1):
            candidate = floor + Fraction(i, 2 * rounds + 1)
            if candidate not in seen:
                seen.add(candidate)
                yield candidate


def _trace_once(geometry: _LineGeometry, offset: Fraction, k: int, shift: Vector) -> PhotonTrace:
    pres, u, normal = geometry.pres, geometry.u, geometry.normal
    nn = _dot(normal, normal)
    start = (offset * normal[0] / nn + 2 * shift[0], offset * normal[1] / nn + 2 * shift[1])
    end = (start[0] + 2 * k * u[0], start[1] + 2 * k * u[1])
    crossings = geometry.crossings(start, Fraction(0), Fraction(2 * k), True, "error")
    if len(crossings) % 2:
        logger.debug("direction %s offset %s: %d crossings, peripheral component", u, offset, len(crossings))
        return PhotonTrace(u, offset, k, start, end, tuple(crossings), end, (0, 0), peripheral=True)
    half = [Fraction(k * u[0]), Fraction(k * u[1])]
    for i, crossing in enumerate(crossings):
        sign = 1 if i % 2 == 0 else -1
        half[0] += sign * crossing.center[0]
        half[1] += sign * crossing.center[1]
    folded = (start[0] + 2 * half[0], start[1] + 2 * half[1])
    a, b = lattice_coordinates(pres, half)
    if a.denominator != 1 or b.denominator != 1:
        raise PostconditionError("folded displacement is not in 2Λ1", {"half": half})
    return PhotonTrace(u, offset, k, start, end, tuple(crossings), folded, (int(a), int(b)))


def trace_segment(pres: Presentation, direction: Vector, offset: Fraction = DEFAULT_OFFSET,
                  k: Optional[int] = None, seed: int = 0, shift: Vector = (0, 0)) -> PhotonTrace:
    """
    Trace S = [v, v + 2k·u] on the line of the given offset.
    Args:
        direction: primitive vector u = (q, p)
        offset: value of <v, (p, -q)>; moved within its unit interval when not generic
        k: length multiplier, a multiple of d(p/q); defaults to d(p/q)
        seed: number of schedule entries skipped before the first attempt
        shift: lattice coordinates of λ, the start moves by 2λ
    Returns:
        The trace on the first generic offset
    """
    geometry = _LineGeometry(pres, direction)
    k = geometry.d if k is None else k
    if k < 1 or k % geometry.d:
        raise BadParameter(f"length multiplier {k} is not a positive multiple of d={geometry.d}")
    lattice_shift = (shift[0] * pres.lambda1[0] + shift[1] * pres.lambda2[0],
                     shift[0] * pres.lambda1[1] + shift[1] * pres.lambda2[1])
    last = ""
    for attempt, candidate in enumerate(_offset_schedule(Fraction(offset))):
        if attempt < seed:
            continue
        try:
            return _trace_once(geometry, candidate, k, lattice_shift)
        except NonGeneric as exc:
            last = exc.incidence
            logger.warning("offset %s is not generic for direction %s: %s", candidate, direction, last)
    raise NonGenericUnresolvable(f"no generic offset found for direction {direction}", last)


@lru_cache(maxsize=4096)
def _cached_invariants(pres: Presentation, s: Slope, offset: Fraction) -> PreimageSummary:
    geometry = _LineGeometry(pres, s.direction)
    d = geometry.d
    components = []
    for index in range(geometry.gap):
        trace = trace_segment(pres, s.direction, offset + 2 * index, d)
        components.append(ComponentSummary(index, trace))
    deg = degree(pres)
    if len(components) != deg // d:
        raise PostconditionError("component count differs from degree / d",
                                 {"slope": str(s), "components": len(components), "d": d})
    slopes = {comp.slope for comp in components if not comp.trivial}
    if len(slopes) > 1:
        raise PostconditionError("InconsistentPreimage: nontrivial components disagree",
                                 {"slope": str(s), "component_slopes": sorted(str(t) for t in slopes)})
    c = sum(1 for comp in components if not comp.trivial)
    if c * d > deg:
        raise PostconditionError("c(s) * d(s) exceeds the degree", {"c": c, "d": d})
    mu = slopes.pop() if slopes else NONSLOPE
    logger.debug("slope %s: d=%d c=%d mu=%s", s, d, c, mu)
    return PreimageSummary(s, d, tuple(components), c, mu, Fraction(c, d))


def slope_invariants(pres: Presentation, s: Slope, offset: Fraction = DEFAULT_OFFSET) -> PreimageSummary:
    """
    Evaluate d(s), c(s), μ(s) and ρ(s) by tracing one line per preimage component.
    Components are the offsets offset + 2j for j below the gap of Λ1 against the
    normal (p, -q); each is traced with k = d(s).
    """
    return _cached_invariants(pres, s, Fraction(offset))


def slope_function(pres: Presentation, s: Slope) -> ExtendedSlope:
    return slope_invariants(pres, s).mu


def multiplier(pres: Presentation, s: Slope) -> Fraction:
    return slope_invariants(pres, s).rho


# ---------------------------------------------------------------------------
# Preimage graph of core arcs

@dataclass(frozen=True)
class GraphEdge:
    tag: str
    start: Vector
    end: Vector
    crossings: Tuple[Crossing, ...] = ()


@dataclass(frozen=True)
class GraphVertex:
    key: ClassKey
    representative: Vector
    critical: bool
    marked: Optional[str]
    valence: int


@dataclass(frozen=True)
class GraphComponent:
    kind: str
    edges: Tuple[int, ...]
    points: Tuple[Vector, ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class CoreArc:
    """A straight piece of a component joining two distinct postcritical classes."""

    component: int
    start: Vector
    end: Vector
    start_label: str
    end_label: str
    edges: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.edges)


@dataclass
class PreimageGraph:
    presentation: Presentation
    slope: Slope
    side: int
    d: int
    edges: List[GraphEdge] = field(default_factory=list)
    vertices: Dict[ClassKey, GraphVertex] = field(default_factory=dict)
    components: List[GraphComponent] = field(default_factory=list)

    def arc_components(self) -> List[GraphComponent]:
        return [c for c in self.components if c.kind == "arc"]

    def circle_components(self) -> List[GraphComponent]:
        return [c for c in self.components if c.kind == "circle"]

    def noncritical_vertices(self) -> List[GraphVertex]:
        return [v for v in self.vertices.values() if not v.critical]


def downstairs_arcs(s: Slope, side: int) -> Dict[str, Tuple[Vector, Vector]]:
    """The two disjoint core arcs of slope s, tagged so that side picks the one called α."""
    if side not in (0, 1):
        raise BadParameter(f"side must be 0 or 1, got {side}")
    q, p = s.direction
    x, y, _ = igcdex(p, -q)
    z1 = (int(x), int(y))
    arcs = [((0, 0), (q, p)), (z1, (z1[0] + q, z1[1] + p))]
    return {"alpha": arcs[side], "beta": arcs[1 - side]}


def _edge_key(pres: Presentation, start: Vector, end: Vector):
    options = []
    for a, b in ((start, end), (end, start)):
        for sign in (1, -1):
            base = lattice_coordinates(pres, (sign * a[0], sign * a[1]))
            step = lattice_coordinates(pres, (sign * (b[0] - a[0]), sign * (b[1] - a[1])))
            options.append(((base[0] % 2, base[1] % 2), step))
    return min(options)


def _gamma1_transport(pres: Presentation, source: Vector, target: Vector, point: Vector) -> Vector:
    """Apply the element of Γ1 taking source to target to point."""
    dx, dy = target[0] - source[0], target[1] - source[1]
    c1, c2 = lattice_coordinates(pres, (dx, dy))
    if c1.denominator == 1 and c2.denominator == 1 and c1 % 2 == 0 and c2 % 2 == 0:
        return (point[0] + dx, point[1] + dy)
    sx, sy = target[0] + source[0], target[1] + source[1]
    return (sx - point[0], sy - point[1])


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def arc_preimage_graph(pres: Presentation, s: Slope, side: int = 0) -> PreimageGraph:
    """
    Lift both downstairs core arcs of slope s and assemble the preimage graph.
    Edges are the translates arc + 2μ over coset representatives μ of Z²/Λ1,
    deduplicated modulo Γ1; vertices are Γ1-classes of their endpoints.
    """
    geometry = _LineGeometry(pres, s.direction)
    graph = PreimageGraph(pres, s, side, geometry.d)
    keys = {}
    for tag, (a, b) in downstairs_arcs(s, side).items():
        for mx, my in coset_representatives(pres):
            start = (a[0] + 2 * mx, a[1] + 2 * my)
            end = (b[0] + 2 * mx, b[1] + 2 * my)
            key = _edge_key(pres, start, end)
            if key in keys:
                raise PostconditionError("two lifts coincide modulo Γ1", {"edge": (start, end)})
            crossings = geometry.crossings(start, Fraction(0), Fraction(1), False, "ignore")
            keys[key] = len(graph.edges)
            graph.edges.append(GraphEdge(tag, start, end, tuple(crossings)))

    marked = postcritical_keys(pres)
    incident: Dict[ClassKey, List[int]] = {}
    representative: Dict[ClassKey, Vector] = {}
    for index, edge in enumerate(graph.edges):
        for point in (edge.start, edge.end):
            key = gamma1_class_key(pres, point)
            incident.setdefault(key, []).append(index)
            representative.setdefault(key, point)
    for key, edges in incident.items():
        if len(edges) not in (1, 2):
            raise PostconditionError("vertex valence is not 1 or 2", {"vertex": representative[key]})
        point = representative[key]
        graph.vertices[key] = GraphVertex(key, point, not in_lattice(pres, point), marked.get(key), len(edges))

    forest = _UnionFind(len(graph.edges))
    for edges in incident.values():
        for other in edges[1:]:
            forest.union(edges[0], other)
    groups: Dict[int, List[int]] = {}
    for index in range(len(graph.edges)):
        groups.setdefault(forest.find(index), []).append(index)
    for root in sorted(groups):
        graph.components.append(_walk_component(pres, graph, groups[root], incident))
    _check_graph_structure(graph)
    return graph


def _walk_component(pres, graph: PreimageGraph, members: List[int], incident) -> GraphComponent:
    ends = [key for key, vertex in graph.vertices.items()
            if vertex.valence == 1 and incident[key][0] in members]
    kind = "arc" if ends else "circle"
    if ends:
        current_key = min(ends)
        edge_index = incident[current_key][0]
    else:
        edge_index = min(members)
        current_key = gamma1_class_key(pres, graph.edges[edge_index].start)
    first = graph.edges[edge_index]
    current = first.start if gamma1_class_key(pres, first.start) == current_key else first.end
    points, order = [current], []
    while True:
        edge = graph.edges[edge_index]
        near, far = (edge.start, edge.end) if gamma1_class_key(pres, edge.start) == current_key \
            else (edge.end, edge.start)
        current = _gamma1_transport(pres, near, current, far)
        current_key = gamma1_class_key(pres, current)
        order.append(edge_index)
        points.append(current)
        nxt = [i for i in incident[current_key] if i != edge_index]
        if not nxt or nxt[0] == order[0]:
            break
        edge_index = nxt[0]
    return GraphComponent(kind, tuple(order), tuple(points))


def _check_graph_structure(graph: PreimageGraph):
    deg = degree(graph.presentation)
    problems = []
    if len(graph.edges) != 2 * deg:
        problems.append(f"{len(graph.edges)} edges instead of {2 * deg}")
    if len(graph.arc_components()) != 2:
        problems.append(f"{len(graph.arc_components())} arc components instead of 2")
    for component in graph.components:
        expected = graph.d if component.kind == "arc" else 2 * graph.d
        if component.edge_count != expected:
            problems.append(f"{component.kind} component with {component.edge_count} edges, expected {expected}")
    if len(graph.noncritical_vertices()) != 4:
        problems.append(f"{len(graph.noncritical_vertices())} noncritical vertices instead of 4")
    if problems:
        raise PostconditionError("preimage graph structure: " + "; ".join(problems), {"slope": str(graph.slope)})


def core_arcs(graph: PreimageGraph) -> List[CoreArc]:
    """Pieces of components between consecutive postcritical vertices with distinct classes."""
    pres = graph.presentation
    marked = postcritical_keys(pres)
    arcs = []
    for index, component in enumerate(graph.components):
        points = component.points
        positions = [i for i, point in enumerate(points) if gamma1_class_key(pres, point) in marked]
        if component.kind == "circle" and positions and positions[-1] != len(points) - 1:
            positions.append(len(points) - 1 + positions[0])
            points = points + tuple(_unroll(points, positions[0]))
        for lo, hi in zip(positions, positions[1:]):
            start_label = marked[gamma1_class_key(pres, points[lo])]
            end_label = marked[gamma1_class_key(pres, points[hi])]
            if start_label == end_label:
                continue
            edges = tuple(component.edges[i % len(component.edges)] for i in range(lo, hi))
            arcs.append(CoreArc(index, points[lo], points[hi], start_label, end_label, edges))
    return arcs


def _unroll(points: Tuple[Vector, ...], count: int) -> List[Vector]:
    """Continue a closed walk past its start by count more steps along the same line."""
    step = (points[1][0] - points[0][0], points[1][1] - points[0][1])
    last = points[-1]
    return [(last[0] + i * step[0], last[1] + i * step[1]) for i in range(1, count + 1)]


def _endpoint_center(pres: Presentation, point: Vector) -> Vector:
    """Center of the mirror ending at a postcritical point, or the point itself at a trivial corner."""
    centers = []
    for mirror in base_mirrors(pres):
        c, g = mirror.center, mirror.half
        for candidate in ((point[0] - g[0], point[1] - g[1]), (point[0] + g[0], point[1] + g[1])):
            c1, c2 = lattice_coordinates(pres, (candidate[0] - c[0], candidate[1] - c[1]))
            if c1.denominator == 1 and c2.denominator == 1 and c1 % 2 == 0 and c2 % 2 == 0:
                centers.append(candidate)
    if in_lattice(pres, point):
        if centers:
            raise DegenerateArcModel(f"postcritical point {point} is both a corner and a mirror endpoint")
        return point
    if len(centers) != 1:
        raise DegenerateArcModel(f"postcritical point {point} ends {len(centers)} mirrors")
    return centers[0]


def arc_slope(graph: PreimageGraph, arc: CoreArc) -> Optional[Slope]:
    """
    Slope of the boundary of a thin neighbourhood of a core arc.
    The boundary crosses the interior mirror centers c1..ck, the mirror at the
    end, ck..c1 and the mirror at the start; half of the resulting
    translation is 2Σ(-1)^(j+1)cj + (-1)^k·λ_end - λ_start.
    Returns:
        The slope in the basis (λ1, λ2), or None when that translation vanishes
    """
    pres = graph.presentation
    marked = postcritical_keys(pres)
    for point in (arc.start, arc.end):
        if gamma1_class_key(pres, point) not in marked:
            raise NotACoreArc(f"endpoint {point} is not a postcritical point")
    if gamma1_class_key(pres, arc.start) == gamma1_class_key(pres, arc.end):
        raise NotACoreArc(f"endpoints {arc.start} and {arc.end} are the same postcritical point")
    step = (arc.end[0] - arc.start[0], arc.end[1] - arc.start[1])
    length = math.gcd(step[0], step[1])
    direction = (step[0] // length, step[1] // length)
    geometry = _LineGeometry(pres, direction)
    try:
        crossings = geometry.crossings(arc.start, Fraction(0), Fraction(length), False, "error")
    except NonGeneric as exc:
        raise DegenerateArcModel(f"arc {arc.start}-{arc.end}: {exc.incidence}") from exc
    total = [0, 0]
    for j, crossing in enumerate(crossings):
        sign = 2 if j % 2 == 0 else -2
        total[0] += sign * crossing.center[0]
        total[1] += sign * crossing.center[1]
    end_sign = -1 if len(crossings) % 2 else 1
    lam_start = _endpoint_center(pres, arc.start)
    lam_end = _endpoint_center(pres, arc.end)
    total[0] += end_sign * lam_end[0] - lam_start[0]
    total[1] += end_sign * lam_end[1] - lam_start[1]
    a, b = lattice_coordinates(pres, total)
    if a == 0 and b == 0:
        return None
    if a.denominator != 1 or b.denominator != 1:
        raise PostconditionError("arc displacement is not in Λ1", {"arc": (arc.start, arc.end)})
    return make_slope(int(b), int(a))


@dataclass(frozen=True)
class SelfLiftWitness:
    side: int
    arc: CoreArc
    edge: GraphEdge


def degree_one_self_lift(pres: Presentation, s: Slope) -> Optional[SelfLiftWitness]:
    """Search both core-arc classes of slope s for a one-edge core arc of slope s."""
    for side in (0, 1):
        graph = arc_preimage_graph(pres, s, side)
        for arc in core_arcs(graph):
            if arc.degree != 1:
                continue
            try:
                slope = arc_slope(graph, arc)
            except DegenerateArcModel as exc:
                logger.warning("skipping degenerate core arc for slope %s: %s", s, exc)
                continue
            if slope == s:
                return SelfLiftWitness(side, arc, graph.edges[arc.edges[0]])
    return None
