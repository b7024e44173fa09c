import pathlib
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subdiff import checks, geometry, io, lp, model, oracle, outer

FX = checks.load_fixtures(pathlib.Path(__file__).resolve().parent.parent / "fixtures")

rat = st.builds(F, st.integers(-9, 9), st.integers(1, 4))
vec2 = st.tuples(rat, rat)
pos_rat = st.builds(F, st.integers(1, 12), st.integers(1, 4))
int_grad = st.tuples(st.integers(-6, 6), st.integers(-6, 6))


@settings(deadline=None, max_examples=60)
@given(p=vec2, t=pos_rat)
def test_directional_derivative_positively_homogeneous(p, t):
    for fn in (FX["sixmax"], FX["minmax"]):
        dd = model.directional_derivative(fn, (0, 0), p)
        scaled = model.directional_derivative(fn, (0, 0),
                                              tuple(t * c for c in p))
        assert scaled == t * dd


@settings(deadline=None, max_examples=60)
@given(x=vec2)
def test_subgradient_inequality_convex_case(x):
    sixmax = FX["sixmax"]
    sub = model.frechet_subdifferential(sixmax, (0, 0))
    fx = model.evaluate(sixmax, x)
    for g in sub.vertices:
        assert fx >= sum(gi * xi for gi, xi in zip(g, x))


@settings(deadline=None, max_examples=40)
@given(verts=st.lists(vec2, min_size=1, max_size=5))
def test_min_norm_point_certificate(verts):
    p, nrm, nsq = lp.min_norm_point(tuple(verts))
    assert nsq >= 0
    assert nrm == pytest.approx(float(nsq) ** 0.5)
    assert lp.point_in_hull(p, tuple(verts))
    for v in verts:
        # variational inequality: p is the projection of the origin
        assert sum(pi * (vi - pi) for pi, vi in zip(p, v)) >= 0


@settings(deadline=None, max_examples=25)
@given(grads=st.lists(int_grad, min_size=2, max_size=4, unique=True))
def test_strict_system_dichotomy(grads):
    import itertools
    for size in (1, 2):
        for D in itertools.combinations(range(len(grads)), size):
            eqs = tuple(grads[j] for j in D)
            sts = tuple(g for k, g in enumerate(grads) if k not in D)
            sys_ = lp.StrictSystem(eqs, sts)
            res = lp.strict_feasible(sys_)
            if isinstance(res, lp.Infeasible):
                assert lp.verify_certificate(sys_, res)
            else:
                assert lp.verify_direction(sys_, res)


@settings(deadline=None, max_examples=25)
@given(grads=st.lists(int_grad, min_size=2, max_size=5, unique=True))
def test_subset_union_equals_sweep_for_max_affine(grads):
    equal, deviation = outer.check_identity_affine(grads)
    assert equal, deviation


@settings(deadline=None, max_examples=50)
@given(pts=st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
                    min_size=1, max_size=8))
def test_canonical_vertices_idempotent_and_minimal(pts):
    canon = geometry.canonical_vertices(tuple(pts))
    assert geometry.canonical_vertices(canon) == canon
    assert set(canon) <= set(pts)
    for q in pts:
        # dropped points are hull-redundant
        assert lp.point_in_hull(q, canon)


@settings(deadline=None, max_examples=50)
@given(pts=st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)),
                    min_size=1, max_size=8))
def test_canonical_vertices_permutation_invariant(pts):
    rolled = pts[1:] + pts[:1]
    assert geometry.canonical_vertices(tuple(pts)) == \
        geometry.canonical_vertices(tuple(rolled))


@settings(deadline=None, max_examples=30)
@given(a=st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
                  min_size=3, max_size=3, unique=True),
       b=st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
                  min_size=3, max_size=3, unique=True))
def test_intersection_vertices_lie_in_both(a, b):
    A, B = geometry.Polytope(tuple(a)), geometry.Polytope(tuple(b))
    R = geometry.intersect(A, B)
    S = geometry.intersect(B, A)
    assert (R is None) == (S is None)
    if R is None:
        return
    for v in R.vertices:
        assert geometry.contains_point(A, v, tol=1e-7)
        assert geometry.contains_point(B, v, tol=1e-7)


def test_model_invariant_under_piece_and_component_order():
    mm = FX["minmax"]
    comps = tuple(
        model.Component(c.kind, tuple(reversed(c.pieces)))
        for c in reversed(mm.components))
    shuffled = model.MinMaxFunction(mm.dim, mm.basepoint, comps)
    for x in ((0, 0), (1, 0), (F(-1, 3), F(2, 5)), (0, -2)):
        assert model.evaluate(shuffled, x) == model.evaluate(mm, x)
    a = model.frechet_subdifferential(mm, (0, 0))
    b = model.frechet_subdifferential(shuffled, (0, 0))
    assert set(geometry.canonical_vertices(a.vertices)) == \
        set(geometry.canonical_vertices(b.vertices))


@settings(deadline=None, max_examples=30)
@given(grads=st.lists(vec2, min_size=1, max_size=4),
       offs=st.lists(rat, min_size=4, max_size=4))
def test_problem_json_round_trip(grads, offs):
    pieces = tuple(model.Affine(g, o) for g, o in zip(grads, offs))
    fn = model.MinMaxFunction(2, (0, 0),
                              (model.Component("max_affine", pieces),))
    fn2, _ = io.parse_problem(io.problem_to_json(fn))
    assert fn2 == fn


@settings(deadline=None, max_examples=10)
@given(grads=st.lists(int_grad, min_size=2, max_size=4, unique=True),
       seed=st.integers(0, 2 ** 16))
def test_cloud_lands_on_the_exact_union_for_homogeneous_max(grads, seed):
    pieces = tuple(model.Affine(g, 0) for g in grads)
    fn = model.MinMaxFunction(2, (0, 0),
                              (model.Component("max_affine", pieces),))
    cloud = oracle.sample_limsup(fn, (0, 0), radii=(1e-2,),
                                 dirs_per_radius=120, seed=seed)
    if not cloud.points:
        return
    U = outer.outer_limit_exact_2d(fn, (0, 0), with_closure=True)
    assert not U.is_empty
    pts = np.array([list(map(float, g)) for g, _, _ in cloud.points])
    d = geometry.dists_to_union(pts, U)
    assert float(d.max()) <= 1e-9
