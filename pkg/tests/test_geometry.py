import math
from fractions import Fraction as F

import numpy as np
import pytest

from subdiff import geometry as g


def test_convex_hull_drops_interior_and_duplicates():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (0, 0), (2, 0)]
    hull = g.convex_hull_2d(pts)
    assert sorted(hull) == [(0, 0), (0, 2), (2, 0), (2, 2)]


def test_convex_hull_collinear():
    hull = g.convex_hull_2d([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert sorted(hull) == [(0, 0), (3, 3)]


def test_canonical_vertices_idempotent():
    pts = ((F(1, 2), 0), (0, 1), (F(1, 4), F(1, 2)), (F(1, 2), 0))
    once = g.canonical_vertices(pts)
    assert g.canonical_vertices(once) == once


def test_segment_and_point_helpers():
    s = g.segment((0, 0), (1, 2))
    assert len(s.vertices) == 2 and s.dim == 2
    p = g.point((3,))
    assert p.is_point and p.dim == 1


def test_arc_coerces_to_float_fields():
    a = g.Arc((F(1, 2), F(0)), F(1), 0.5, 2.5, False, True)
    assert isinstance(a.center[0], float) and isinstance(a.radius, float)
    assert a.theta0 == 0.5 and a.theta1 == 2.5
    assert not a.closed0 and a.closed1
    assert not a.full_circle
    x, y = a.point_at(0.5)
    assert x == pytest.approx(0.5 + math.cos(0.5))
    assert y == pytest.approx(math.sin(0.5))


def test_full_circle_flag():
    a = g.Arc((0, 0), 1, 0.0, 2 * math.pi, True, False)
    assert a.full_circle


def test_union_closure_closes_arc_endpoints():
    a = g.Arc((0, 0), 1, 0.1, 1.3, False, False)
    closed = g.FaceUnion((a,)).closure().pieces[0]
    assert closed.closed0 and closed.closed1
    assert closed.theta0 == a.theta0 and closed.theta1 == a.theta1


def test_support_and_argmax_polytope():
    P = g.Polytope(((0, 0), (2, 0), (0, 2)))
    assert g.support_value(P, (1, 1)) == 2
    face = g.argmax_face(P, (1, 1))
    assert sorted(face.vertices) == [(0, 2), (2, 0)]
    # unique maximizer
    assert g.argmax_face(P, (1, 0)).vertices == ((2, 0),)


def test_support_and_argmax_ball():
    B = g.Ball((F(1, 2), 0), 1)
    assert g.support_value(B, (0, 2)) == pytest.approx(2.0)
    face = g.argmax_face(B, (0, 1))
    assert face.is_point
    assert face.vertices[0] == pytest.approx((0.5, 1.0))


def test_ball_membership_is_exact_for_rationals():
    B = g.Ball((0, 0), F(1, 2))
    assert g.contains_point(B, (F(3, 10), F(2, 5)))  # norm exactly 1/2
    assert not g.contains_point(B, (F(3, 10), F(2, 5) + F(1, 10 ** 12)))


def test_intersect_triangle_with_segment():
    P = g.Polytope(((0, 0), (2, 0), (0, 2)))
    Q = g.Polytope(((1, -1), (1, 3)))
    R = g.intersect(P, Q)
    vs = g.canonical_vertices(R.vertices)
    assert len(vs) == 2
    assert sorted(tuple(map(float, v)) for v in vs) == [(1.0, 0.0), (1.0, 1.0)]


def test_intersect_disjoint_is_none():
    P = g.Polytope(((0, 0), (1, 0)))
    Q = g.Polytope(((0, 2), (1, 2)))
    assert g.intersect(P, Q) is None


def test_intersect_point_with_ball():
    B = g.Ball((0, 0), 1)
    inside = g.point((F(1, 2), 0))
    outside = g.point((2, 0))
    assert g.intersect(inside, B) == inside
    assert g.intersect(B, outside) is None


def test_intersect_overlapping_balls_unsupported():
    with pytest.raises(g.UnsupportedPair):
        g.intersect(g.Ball((0, 0), 1), g.Ball((1, 0), 1))


def test_project_segment():
    s = g.segment((2, 1), (0, -1))
    pt, dist = g.project(s, (0, 0))
    assert pt == pytest.approx((0.5, -0.5))
    assert dist == pytest.approx(math.sqrt(2) / 2)


def test_project_ball_from_outside_and_inside():
    B = g.Ball((3, 0), 1)
    pt, dist = g.project(B, (0, 0))
    assert pt == pytest.approx((2.0, 0.0)) and dist == pytest.approx(2.0)
    pt, dist = g.project(B, (3, 0.5))
    assert dist == 0  # interior point projects to itself


def test_project_union_picks_nearest_piece():
    U = g.FaceUnion((g.point((5, 5)), g.segment((2, 1), (0, -1))))
    idx, pt, dist = g.project_union(U, (0, 0))
    assert idx == 1
    assert pt == pytest.approx((0.5, -0.5))
    assert dist == pytest.approx(math.sqrt(2) / 2)


def test_dists_to_union_takes_points_first():
    U = g.FaceUnion((g.Polytope(((0, 0), (2, 0), (0, 2))),))
    d = g.dists_to_union(np.array([[0.0, 0.0], [3.0, 0.0]]), U)
    assert d == pytest.approx([0.0, 1.0])


def test_hausdorff_cloud_zero_on_own_discretization():
    U = g.FaceUnion((g.segment((0, 0), (1, 0)), g.point((4, 4))))
    cloud = g.discretize_union(U, res=0.005)
    d_uc, d_cu = g.hausdorff_cloud(U, cloud)
    assert d_uc <= 0.005 and d_cu == pytest.approx(0.0)


def test_normalize_union_dedupes_and_absorbs():
    P = g.Polytope(((0, 0), (2, 0), (0, 2)))
    again = g.Polytope(((2, 0), (0, 2), (0, 0)))
    inner = g.point((0, 0))
    U = g.normalize_union((P, again, inner))
    assert len(U.pieces) == 1
    assert sorted(U.pieces[0].vertices) == [(0, 0), (0, 2), (2, 0)]


def test_union_equal_exact_permutation_and_split():
    A = g.FaceUnion((g.segment((0, 0), (2, 0)), g.point((5, 5))))
    B = g.FaceUnion((g.point((5, 5)), g.segment((2, 0), (0, 0))))
    ok, detail = g.union_equal_exact(A, B)
    assert ok and detail is None
    # the same segment split in two compares equal
    C = g.FaceUnion((g.segment((0, 0), (1, 0)), g.segment((1, 0), (2, 0)),
                     g.point((5, 5))))
    ok, _ = g.union_equal_exact(A, C)
    assert ok


def test_union_equal_exact_reports_differing_side():
    A = g.FaceUnion((g.segment((0, 0), (2, 0)),))
    B = g.FaceUnion((g.segment((0, 0), (1, 0)),))
    ok, detail = g.union_equal_exact(A, B)
    assert not ok
    side, piece = detail
    assert side in ("left", "right")


def test_empty_union():
    U = g.FaceUnion(())
    assert U.is_empty
    assert U.closure().is_empty
    with pytest.raises(g.EmptySetError):
        g.project_union(U, (0, 0))


def test_scale_tol_scales_with_magnitude():
    base = g.scale_tol([0.1, 2.0])
    assert base > 0
    assert g.scale_tol([0.1, 2000.0]) == pytest.approx(1000 * base)
    # never collapses below the unit floor
    assert g.scale_tol([]) == g.scale_tol([1e-30])
