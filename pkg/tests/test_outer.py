import math
from fractions import Fraction as F

import numpy as np
import pytest

from subdiff import geometry, lp, outer

TWO_PI = 2 * math.pi

SIXMAX_GRADS = ((5, 0), (2, 1), (1, 0), (2, -2), (4, -2), (3, -1))


def _seg(a, b):
    return geometry.segment(a, b)


def _assert_union(U, golden_pieces):
    ok, detail = geometry.union_equal_exact(U, geometry.FaceUnion(tuple(golden_pieces)))
    assert ok, detail


def _arc_matches(arc, center, t0, t1, closed0, closed1, radius=1.0):
    if abs(arc.center[0] - center[0]) > 1e-9 or abs(arc.center[1] - center[1]) > 1e-9:
        return False
    if abs(arc.radius - radius) > 1e-9:
        return False
    span = arc.theta1 - arc.theta0
    if abs(span - (t1 - t0)) > 1e-9:
        return False
    if abs((arc.theta0 - t0) % TWO_PI) > 1e-9 and abs((arc.theta0 - t0) % TWO_PI - TWO_PI) > 1e-9:
        return False
    return arc.closed0 == closed0 and arc.closed1 == closed1


def _assert_arcs(U, goldens):
    assert len(U.pieces) == len(goldens)
    remaining = list(U.pieces)
    for golden in goldens:
        hit = [a for a in remaining if _arc_matches(a, *golden)]
        assert hit, "no arc matching %r in %r" % (golden, remaining)
        remaining.remove(hit[0])


def test_sweep_single_component_closure(problems):
    sixmax = problems["sixmax"]
    U = outer.outer_limit_exact_2d(sixmax, (0, 0), with_closure=True)
    _assert_union(U, [_seg((2, -2), (4, -2)), _seg((2, 1), (5, 0)),
                      _seg((4, -2), (5, 0))])


def test_sweep_modified_gradient_loses_bottom_face(problems):
    mod = problems["sixmax_mod"]
    U = outer.outer_limit_exact_2d(mod, (0, 0), with_closure=True)
    _assert_union(U, [_seg((2, 1), (5, 0)), _seg((4, -2), (5, 0))])


def test_sweep_closure_adds_only_boundary(problems):
    sixmax = problems["sixmax"]
    raw = outer.outer_limit_exact_2d(sixmax, (0, 0), with_closure=False)
    closed = outer.outer_limit_exact_2d(sixmax, (0, 0), with_closure=True)
    ok, _ = geometry.union_equal_exact(raw.closure(), closed)
    assert ok


def test_sweep_min_of_two_maxes(problems):
    mm = problems["minmax"]
    U = outer.outer_limit_exact_2d(mm, (0, 0), with_closure=True)
    _assert_union(U, [_seg((0, -1), (2, 1)), _seg((0, 1), (2, 1)),
                      geometry.point((2, -1))])


def test_sweep_quadratic_slice_is_single_point(problems):
    quadmax = problems["quadmax"]
    U = outer.outer_limit_exact_2d(quadmax, (0, 0), with_closure=True)
    assert len(U.pieces) == 1
    piece = U.pieces[0]
    assert piece.is_point
    assert tuple(map(float, piece.vertices[0])) == pytest.approx((1.0, 1.0))


def test_sweep_smooth_min_structure_is_empty(problems):
    parab = problems["paraboloids"]
    U = outer.outer_limit_exact_2d(parab, (0, 0), with_closure=True)
    assert U.is_empty


def test_sweep_one_dimensional_kink(problems):
    absx, lin2 = problems["absx"], problems["linear2"]
    U = outer.outer_limit_exact_2d(absx, (0,), with_closure=True)
    got = sorted(p.vertices[0][0] for p in U.pieces)
    assert all(p.is_point for p in U.pieces)
    assert got == [-1, 1]
    U2 = outer.outer_limit_exact_2d(lin2, (0,), with_closure=True)
    assert [p.vertices[0][0] for p in U2.pieces] == [2]


def test_sweep_ball_supports_gives_open_semicircles(problems):
    disks = problems["disks"]
    U = outer.outer_limit_exact_2d(disks, (0, 0), with_closure=False)
    _assert_arcs(U, [
        ((-0.5, 0.0), 1.5 * math.pi, 2.5 * math.pi, False, False),
        ((0.5, 0.0), 0.5 * math.pi, 1.5 * math.pi, False, False),
    ])


def test_sweep_shifted_balls_cut_at_tangency_angle(problems):
    mod = problems["disks_mod"]
    U = outer.outer_limit_exact_2d(mod, (0, 0), with_closure=False)
    cut = math.acos(-2.0 / 3.0)
    _assert_arcs(U, [
        ((0.5, 0.0), 1.5 * math.pi, 2.5 * math.pi, False, False),
        ((1.5, 0.0), 0.5 * math.pi, cut, False, False),
        ((1.5, 0.0), TWO_PI - cut, 1.5 * math.pi, False, False),
    ])


def test_enumerate_subsets_with_certificates():
    fam = outer.enumerate_D(SIXMAX_GRADS)
    got = sorted(tuple(sorted(ind)) for ind, _ in fam.entries)
    assert got == [(1,), (1, 2), (1, 5), (2,), (4,), (4, 5), (5,)]
    for ind, cert in fam.entries:
        inside = set(ind)
        for j, grad in enumerate(SIXMAX_GRADS, start=1):
            val = sum(gi * di for gi, di in zip(grad, cert))
            if j in inside:
                assert val == 1
            else:
                assert val < 1


def test_enumerate_subsets_modified_family(problems):
    mod = problems["sixmax_mod"]
    grads = [p.a for p in mod.components[0].pieces]
    fam = outer.enumerate_D(grads)
    got = sorted(tuple(sorted(ind)) for ind, _ in fam.entries)
    assert got == [(1,), (1, 2), (1, 5), (2,), (5,)]


def test_enumerate_subsets_quadratic_gradients():
    fam = outer.enumerate_D(((F(1, 2), F(1, 2)), (1, 1)))
    assert fam.subsets() == [{2}]


def test_enumeration_cap():
    grads = [(i, 1) for i in range(21)]
    with pytest.raises(outer.EnumerationCapExceeded):
        outer.enumerate_D(grads)
    fam = outer.enumerate_D(grads[:3], cap=3)
    assert fam.entries


def test_subset_union_matches_sweep():
    equal, dev = outer.check_identity_affine(SIXMAX_GRADS)
    assert equal, dev


def test_subset_union_pieces_are_faces():
    fam = outer.enumerate_D(SIXMAX_GRADS)
    U = outer.d_union(SIXMAX_GRADS, fam)
    for piece in U.pieces:
        for v in piece.vertices:
            # every vertex of a face is one of the gradients
            assert tuple(map(F, v)) in {tuple(map(F, g)) for g in SIXMAX_GRADS}


def test_sampled_outer_limit_stays_inside_exact(problems):
    sixmax = problems["sixmax"]
    exact = outer.outer_limit_exact_2d(sixmax, (0, 0), with_closure=True)
    pts = outer.outer_limit_sampled(sixmax, (0, 0), n_dirs=500, seed=11)
    assert len(pts) and pts.shape[1] == 2
    dists = geometry.dists_to_union(np.asarray(pts, dtype=float), exact)
    assert float(dists.max()) <= 1e-7


def test_sweep_cells_cover_the_circle(problems):
    sixmax = problems["sixmax"]
    cells, faces = outer.sweep_cells(sixmax, (0, 0))
    assert cells and faces
    span = sum((c.angle_hi - c.angle_lo) % TWO_PI
               for c in cells if not c.at_breakpoint)
    assert span == pytest.approx(TWO_PI)  # open cells tile the circle
    for cell in cells:
        if cell.dd_positive:
            assert cell.face is not None
