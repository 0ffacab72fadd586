from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_arrangement, solve_lines, walker_segments
from walkpart.errors import GeometryError
from walkpart.geometry import (
    Circle, Point2, Segment, build_arrangement, extend_double, face_centroid, floor_sqrt,
    midpoint, segment_intersection, signed_area,
)


def P(x, y):
    return Point2(F(x), F(y))


def S(a, b, c, d):
    return Segment(P(a, b), P(c, d))


class TestPrimitives:
    def test_midpoint(self):
        assert midpoint(S(0, 5, 5, -5)) == P("5/2", 0)
        assert midpoint(S(0, 0, 0, 14)) == P(0, 7)
        assert midpoint(S(-5, -5, 5, -5)) == P(0, -5)

    def test_extend_double(self):
        assert extend_double(P(0, 5), P(0, -5)) == P(0, -15)
        assert extend_double(P(-5, -5), P("5/2", 0)) == P(10, 5)

    def test_extend_double_degenerate(self):
        with pytest.raises(GeometryError, match="zero-length ray"):
            extend_double(P(1, 2), P(1, 2))

    def test_intersection_point_matches_cramer(self):
        hit = segment_intersection(S(0, 5, 0, -15), S(-5, -5, 10, 5))
        expected = solve_lines((F(0), F(5)), (F(0), F(-15)), (F(-5), F(-5)), (F(10), F(5)))
        assert hit == P(*expected) == P(0, F(-5, 3))

    def test_intersection_parallel_disjoint(self):
        assert segment_intersection(S(0, 0, 1, 0), S(0, 1, 1, 1)) is None

    def test_intersection_collinear_overlap(self):
        assert segment_intersection(S(0, 0, 2, 0), S(1, 0, 3, 0)) == S(1, 0, 2, 0)

    def test_intersection_collinear_touch(self):
        assert segment_intersection(S(0, 0, 1, 0), S(1, 0, 3, 0)) == P(1, 0)

    def test_segment_rejects_zero_length(self):
        with pytest.raises(GeometryError):
            S(1, 1, 1, 1)

    def test_circle_needs_positive_diameter(self):
        with pytest.raises(GeometryError):
            Circle(P(0, 0), 0)

    def test_floats_rejected(self):
        with pytest.raises(GeometryError):
            Point2(0.5, 1)


class TestCentroid:
    def test_inner_triangle(self):
        assert face_centroid([P(0, 5), P(-5, -5), P(5, -5)]) == P(0, F(-5, 3))

    def test_unit_square(self):
        assert face_centroid([P(0, 0), P(1, 0), P(1, 1), P(0, 1)]) == P("1/2", "1/2")

    def test_outer_triangle_shares_venter(self):
        assert face_centroid([P(0, -15), P(10, 5), P(-10, 5)]) == P(0, F(-5, 3))

    def test_degenerate(self):
        with pytest.raises(GeometryError, match="degenerate face"):
            face_centroid([P(0, 0), P(1, 1), P(2, 2)])


@pytest.mark.parametrize("value, expected", [(0, 0), (1, 1), (99, 9), (100, 10), (F(125), 11),
                                             (F(1, 4), 0), (F(9, 4), 1), (F(325), 18)])
def test_floor_sqrt(value, expected):
    assert floor_sqrt(value) == expected


class TestArrangement:
    def test_triangle(self):
        arr = build_arrangement([S(0, 0, 4, 0), S(4, 0, 0, 3), S(0, 3, 0, 0)])
        assert (len(arr.vertices), len(arr.edges), len(arr.faces)) == (3, 3, 1)
        assert arr.euler_holds()

    def test_square_with_diagonals(self):
        segs = [S(0, 0, 2, 0), S(2, 0, 2, 2), S(2, 2, 0, 2), S(0, 2, 0, 0),
                S(0, 0, 2, 2), S(2, 0, 0, 2)]
        arr = build_arrangement(segs)
        assert (len(arr.vertices), len(arr.edges), len(arr.faces)) == (5, 8, 4)

    def test_duplicates_collapse(self):
        tri = [S(0, 0, 4, 0), S(4, 0, 0, 3), S(0, 3, 0, 0)]
        assert build_arrangement(tri + [tri[0], Segment(tri[1].b, tri[1].a)]) == build_arrangement(tri)

    def test_faces_counterclockwise(self):
        arr = build_arrangement([S(0, 0, 2, 0), S(2, 0, 2, 2), S(2, 2, 0, 2), S(0, 2, 0, 0),
                                 S(0, 0, 2, 2)])
        for face in arr.faces:
            assert signed_area(arr.face_points(face)) > 0

    def test_mark_off_structure(self):
        with pytest.raises(GeometryError):
            build_arrangement([S(0, 0, 1, 0)], marks=[P(5, 5)])

    def test_walker_counts_match_brute_force(self, fig):
        segs = walker_segments()
        verts, edges, faces = brute_arrangement(segs, [(F(0), F(0))])
        arr = build_arrangement([Segment(P(*a), P(*b)) for a, b in segs], marks=[P(0, 0)])
        assert {(p.x, p.y) for p in arr.vertices} == verts
        assert len(arr.edges) == len(edges)
        assert len(arr.faces) == faces
        assert (len(arr.vertices), len(arr.edges), len(arr.faces)) == (11, 22, 12)
        assert arr.euler_holds()

    def test_no_vertex_inside_an_edge(self, fig):
        arr = fig.arrangement
        for i, j in arr.edges:
            seg = Segment(arr.vertices[i], arr.vertices[j])
            inside = [k for k, p in enumerate(arr.vertices) if k not in (i, j) and seg.contains(p)]
            assert inside == []

    def test_every_edge_borders_two_faces(self, fig):
        arr = fig.arrangement
        seen = {}
        for cycle in arr.faces + arr.outer:
            for k in range(len(cycle)):
                i, j = cycle[k], cycle[(k + 1) % len(cycle)]
                seen[(i, j)] = seen.get((i, j), 0) + 1
        assert all(seen.get((i, j)) == 1 and seen.get((j, i)) == 1 for i, j in arr.edges)

    def test_idempotent_rebuild(self, fig):
        arr = fig.arrangement
        assert build_arrangement(arr.segments()) == arr

    def test_mirror_isomorphic(self, fig):
        arr = fig.arrangement
        mirrored = build_arrangement([s.mirror() for s in fig.construction.segments()],
                                     marks=[p.mirror() for p in fig.labels.values()])
        assert set(mirrored.vertices) == {p.mirror() for p in arr.vertices}
        as_points = lambda a: {frozenset((a.vertices[i], a.vertices[j])) for i, j in a.edges}
        assert as_points(mirrored) == {frozenset(p.mirror() for p in e) for e in as_points(arr)}
        assert len(mirrored.faces) == len(arr.faces)


coord = st.integers(min_value=-4, max_value=4)
segment = st.tuples(coord, coord, coord, coord).filter(lambda t: t[:2] != t[2:])


@settings(max_examples=150, deadline=None)
@given(st.lists(segment, min_size=1, max_size=8))
def test_euler_on_random_segments(raw):
    segs = [S(*t) for t in raw]
    arr = build_arrangement(segs)
    assert arr.euler_holds()
    verts, edges, _ = brute_arrangement([((F(a), F(b)), (F(c), F(d))) for a, b, c, d in raw])
    assert len(arr.vertices) == len(verts)
    assert len(arr.edges) == len(edges)
    assert build_arrangement(arr.segments()) == arr


@given(coord, coord, coord, coord)
def test_doubling_inverts_midpoint(a, b, c, d):
    p, q = P(a, b), P(c, d)
    if p != q:
        assert extend_double(p, midpoint(Segment(p, q))) == q
