"""Exact planar primitives and the segment arrangement builder.

Every coordinate is a :class:`fractions.Fraction`; nothing here compares with
a tolerance.  Lengths that may be irrational are carried as exact squared
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import GeometryError

Rational = Union[int, Fraction, str]


def as_q(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise GeometryError("float coordinates are not exact; pass int, Fraction or 'p/q'")
    return Fraction(value)


def fmt_q(value: Fraction) -> str:
    """Render a rational as ``p/q`` (always with a denominator)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Point2:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_q(self.x))
        object.__setattr__(self, "y", as_q(self.y))

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, k: Rational) -> Point2:
        k = as_q(k)
        return Point2(self.x * k, self.y * k)

    def mirror(self) -> Point2:
        """Reflection across the vertical axis x = 0."""
        return Point2(-self.x, self.y)

    def norm_sq(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def __str__(self):
        return f"{fmt_q(self.x)},{fmt_q(self.y)}"


@dataclass(frozen=True)
class Segment:
    a: Point2
    b: Point2

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError("segment endpoints must be distinct")

    @property
    def endpoints(self) -> tuple[Point2, Point2]:
        return (self.a, self.b)

    def normalized(self) -> Segment:
        return self if self.a < self.b else Segment(self.b, self.a)

    def length_sq(self) -> Fraction:
        return (self.b - self.a).norm_sq()

    def contains(self, p: Point2) -> bool:
        """True when ``p`` lies on the closed segment."""
        if cross(self.a, self.b, p) != 0:
            return False
        return (min(self.a.x, self.b.x) <= p.x <= max(self.a.x, self.b.x)
                and min(self.a.y, self.b.y) <= p.y <= max(self.a.y, self.b.y))

    def mirror(self) -> Segment:
        return Segment(self.a.mirror(), self.b.mirror())


@dataclass(frozen=True)
class Circle:
    center: Point2
    diameter: Fraction
    fill: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "diameter", as_q(self.diameter))
        object.__setattr__(self, "fill", as_q(self.fill))
        if self.diameter <= 0:
            raise GeometryError("circle diameter must be positive")


def cross(o: Point2, a: Point2, b: Point2) -> Fraction:
    """Twice the signed area of triangle o, a, b (positive when counterclockwise)."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def midpoint(s: Segment) -> Point2:
    return Point2((s.a.x + s.b.x) / 2, (s.a.y + s.b.y) / 2)


def extend_double(start: Point2, through: Point2) -> Point2:
    """Point reached by walking from ``start`` past ``through`` to twice the distance."""
    if start == through:
        raise GeometryError("zero-length ray")
    return start + (through - start).scale(2)


def segment_intersection(s1: Segment, s2: Segment) -> Point2 | Segment | None:
    """Intersection of two closed segments.

    Returns the single shared point, the shared sub-segment when the two are
    collinear and overlap in more than a point, or None.
    """
    r = s1.b - s1.a
    s = s2.b - s2.a
    q = s2.a - s1.a
    denom = r.x * s.y - r.y * s.x
    if denom == 0:
        if q.x * r.y - q.y * r.x != 0:
            return None
        # collinear: project onto the direction of s1
        rr = r.norm_sq()
        t0 = (q.x * r.x + q.y * r.y) / rr
        t1 = t0 + (s.x * r.x + s.y * r.y) / rr
        lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
        if lo > hi:
            return None
        p_lo, p_hi = s1.a + r.scale(lo), s1.a + r.scale(hi)
        if lo == hi:
            return p_lo
        return Segment(p_lo, p_hi).normalized()
    u = (q.x * s.y - q.y * s.x) / denom
    v = (q.x * r.y - q.y * r.x) / denom
    if 0 <= u <= 1 and 0 <= v <= 1:
        return s1.a + r.scale(u)
    return None


def angle_key(dx: Fraction, dy: Fraction) -> tuple:
    """Exact sort key ordering directions counterclockwise from +x."""
    if dx == 0 and dy == 0:
        raise GeometryError("direction of a zero vector")
    lower = dy < 0 or (dy == 0 and dx < 0)
    if dy == 0:
        return (lower, 0, Fraction(0))
    return (lower, 1, -dx / dy)


def signed_area(points: Sequence[Point2]) -> Fraction:
    n = len(points)
    twice = sum((points[i].x * points[(i + 1) % n].y - points[(i + 1) % n].x * points[i].y
                 for i in range(n)), Fraction(0))
    return twice / 2


def face_centroid(points: Sequence[Point2]) -> Point2:
    """Area-weighted centroid of a simple polygon."""
    area = signed_area(points)
    if area == 0:
        raise GeometryError("degenerate face")
    n = len(points)
    cx = cy = Fraction(0)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        w = p.x * q.y - q.x * p.y
        cx += (p.x + q.x) * w
        cy += (p.y + q.y) * w
    return Point2(cx / (6 * area), cy / (6 * area))


def floor_sqrt(value: Fraction) -> int:
    """floor(sqrt(value)) for a non-negative rational, computed exactly."""
    value = Fraction(value)
    if value < 0:
        raise GeometryError("square root of a negative length")
    p, q = value.numerator, value.denominator
    return math.isqrt(p * q) // q


@dataclass(frozen=True)
class Arrangement:
    """Planar subdivision induced by a set of straight segments.

    ``vertices`` are sorted by (x, y); ``edges`` are index pairs ``(i, j)``
    with ``i < j``; ``faces`` are the bounded faces as counterclockwise index
    cycles starting at their smallest index.  ``outer`` holds the clockwise
    boundary cycle of the unbounded face for each connected component.
    """

    vertices: tuple[Point2, ...]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]
    outer: tuple[tuple[int, ...], ...]
    _index: dict = field(default=None, compare=False, repr=False)
    _adj: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.vertices)})
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.vertices))}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", {i: tuple(sorted(n)) for i, n in adj.items()})

    def index_of(self, p: Point2) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise GeometryError(f"{p} is not an arrangement vertex") from None

    def has_vertex(self, p: Point2) -> bool:
        return p in self._index

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edge_set

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def edge_length_sq(self, i: int, j: int) -> Fraction:
        return (self.vertices[i] - self.vertices[j]).norm_sq()

    def face_points(self, face: Sequence[int]) -> list[Point2]:
        return [self.vertices[i] for i in face]

    def outer_edges(self) -> frozenset:
        """Edges lying on the boundary of the unbounded face."""
        out = set()
        for cycle in self.outer:
            for k in range(len(cycle)):
                i, j = cycle[k], cycle[(k + 1) % len(cycle)]
                out.add((min(i, j), max(i, j)))
        return frozenset(out)

    def components(self) -> int:
        seen: set[int] = set()
        count = 0
        for start in range(len(self.vertices)):
            if start in seen:
                continue
            count += 1
            stack = [start]
            seen.add(start)
            while stack:
                u = stack.pop()
                for v in self._adj[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
        return count

    def euler_holds(self) -> bool:
        """V - E + F = 1 + C, with F counting the unbounded face once."""
        v, e, f = len(self.vertices), len(self.edges), len(self.faces) + 1
        return v - e + f == 1 + self.components()

    def segments(self) -> list[Segment]:
        return [Segment(self.vertices[i], self.vertices[j]) for i, j in self.edges]


def _rotate_min(cycle: list[int]) -> tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def build_arrangement(segments: Iterable[Segment], marks: Iterable[Point2] = ()) -> Arrangement:
    """Split ``segments`` at every mutual intersection and trace the faces.

    ``marks`` are extra points that must lie on some segment; each becomes a
    vertex splitting the segment through it.  Duplicate segments collapse.
    """
    segs = sorted({s.normalized() for s in segments}, key=lambda s: (s.a, s.b))
    if not segs:
        raise GeometryError("arrangement needs at least one segment")

    points: set[Point2] = set()
    for s in segs:
        points.update(s.endpoints)
    for s1, s2 in combinations(segs, 2):
        hit = segment_intersection(s1, s2)
        if isinstance(hit, Point2):
            points.add(hit)
        elif isinstance(hit, Segment):
            points.update(hit.endpoints)
    for p in marks:
        if not any(s.contains(p) for s in segs):
            raise GeometryError(f"mark {p} does not lie on any segment")
        points.add(p)

    vertices = tuple(sorted(points))
    index = {p: i for i, p in enumerate(vertices)}
    edges: set[tuple[int, int]] = set()
    for s in segs:
        on = sorted((p for p in vertices if s.contains(p)),
                    key=lambda p: (p - s.a).norm_sq())
        for p, q in zip(on, on[1:]):
            i, j = index[p], index[q]
            edges.add((min(i, j), max(i, j)))

    adj: dict[int, list[int]] = {i: [] for i in range(len(vertices))}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    ccw = {
        u: sorted(nbrs, key=lambda v, u=u: angle_key(vertices[v].x - vertices[u].x,
                                                     vertices[v].y - vertices[u].y))
        for u, nbrs in adj.items()
    }
    position = {(u, v): k for u, nbrs in ccw.items() for k, v in enumerate(nbrs)}

    bounded, outer = [], []
    used: set[tuple[int, int]] = set()
    for half in sorted(position):
        if half in used:
            continue
        cycle = []
        u, v = half
        while (u, v) not in used:
            used.add((u, v))
            cycle.append(u)
            nbrs = ccw[v]
            w = nbrs[position[(v, u)] - 1]
            u, v = v, w
        area = signed_area([vertices[i] for i in cycle])
        (bounded if area > 0 else outer).append(_rotate_min(cycle))

    return Arrangement(
        vertices=vertices,
        edges=tuple(sorted(edges)),
        faces=tuple(sorted(bounded)),
        outer=tuple(sorted(outer)),
    )
