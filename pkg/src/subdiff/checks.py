"""Golden-fixture acceptance checks, shared by the test suite and the
`check` command. Each check returns a CheckResult with a one-line detail;
the expected values are frozen here and cross-checked against the exact
and sampled code paths.
"""
from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import errorbound, geometry, io, lp, model, oracle, outer

FIXTURE_NAMES = ("sixmax", "sixmax_mod", "minmax", "quadmax", "paraboloids",
                 "disks", "disks_mod", "absx", "linear2")

# fixtures whose exact sweep union (after closure) is known to equal the
# true outer limit: piecewise-affine data and the ball-support pair
_EQUALITY_NAMES = ("sixmax", "sixmax_mod", "minmax", "disks", "disks_mod",
                   "absx", "linear2")
# single max-of-affine components, where the bound holds with equality
_CONVEX_NAMES = ("sixmax", "sixmax_mod", "absx", "linear2")

_SLACK = 0.02
_HAUS_TOL = 0.05


class MissingFixture(Exception):
    def __init__(self, name):
        super().__init__("missing fixture: %s" % name)
        self.name = name


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    within_budget: bool
    detail: str
    elapsed: float
    budget: float

    @property
    def passed(self):
        return self.ok and self.within_budget


def _finish(number, name, ok, detail, t0, budget):
    dt = time.time() - t0
    return CheckResult(number, name, bool(ok), dt < budget, detail, dt, budget)


def load_fixtures(directory) -> dict:
    directory = Path(directory)
    out = {}
    for name in FIXTURE_NAMES:
        path = directory / (name + ".json")
        if not path.exists():
            raise MissingFixture(name)
        out[name], _ = io.load_problem(str(path))
    return out


def _gradients(fn: model.MinMaxFunction):
    comp = fn.components[0]
    return [p.gradient(fn.basepoint) for p in comp.pieces]


def _fr(v):
    return Fraction(v)


def _poly(*verts):
    return geometry.Polytope(tuple(tuple(_fr(c) for c in v) for v in verts))


def _min_cloud_norm(pts):
    return float(np.linalg.norm(pts, axis=1).min())


# 1. D-subset family on the six-gradient fixture and its modification

def check_d_family(fx) -> CheckResult:
    t0 = time.time()
    want = {frozenset(s) for s in ({1}, {2}, {4}, {5}, {1, 2}, {1, 5}, {4, 5})}
    got = {frozenset(s) for s in
           outer.enumerate_D(_gradients(fx["sixmax"])).subsets()}
    want_mod = want - {frozenset({4}), frozenset({4, 5})}
    got_mod = {frozenset(s) for s in
               outer.enumerate_D(_gradients(fx["sixmax_mod"])).subsets()}
    ok = got == want and got_mod == want_mod
    detail = ("families %d and %d subsets as expected" % (len(got), len(got_mod))
              if ok else "got %s / %s" % (sorted(map(sorted, got)),
                                          sorted(map(sorted, got_mod))))
    return _finish(1, "d-family", ok, detail, t0, 1.0)


# 2. min-max fixture: exact closed union and sampled equality

def check_minmax_outer(fx) -> CheckResult:
    t0 = time.time()
    fn = fx["minmax"]
    U = outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)
    golden = geometry.FaceUnion((_poly((2, 1), (0, 1)),
                                 _poly((2, 1), (0, -1)),
                                 _poly((2, -1))))
    exact_ok = geometry.union_equal_exact(U, golden)
    cloud = oracle.sample_limsup(fn, fn.basepoint)
    d_uc, d_cu = geometry.hausdorff_cloud(U, cloud.limit_points())
    sym_ok = d_uc <= _HAUS_TOL and d_cu <= _HAUS_TOL
    ok = exact_ok and sym_ok
    detail = ("closed union matches, Hausdorff %.3f/%.3f" % (d_uc, d_cu)
              if ok else "exact=%s haus=%.3f/%.3f" % (exact_ok, d_uc, d_cu))
    return _finish(2, "minmax-outer", ok, detail, t0, 10.0)


# 3. quadmax fixture: subset family, its union, and cloud coverage

def check_quadmax(fx) -> CheckResult:
    t0 = time.time()
    fn = fx["quadmax"]
    grads = _gradients(fn)
    fam = outer.enumerate_D(grads)
    fam_ok = {frozenset(s) for s in fam.subsets()} == {frozenset({2})}
    du = outer.d_union(grads, fam)
    du_ok = geometry.union_equal_exact(du, geometry.FaceUnion((_poly((1, 1)),)))
    seg = geometry.FaceUnion((_poly(("1/2", "1/2"), (1, 1)),))
    cloud = oracle.sample_limsup(fn, fn.basepoint)
    d_cover, _ = geometry.hausdorff_cloud(seg, cloud.limit_points())
    cover_ok = d_cover <= _HAUS_TOL
    ok = fam_ok and du_ok and cover_ok
    detail = ("family {{2}}, union {(1,1)}, segment covered at %.4f" % d_cover
              if ok else "family=%s union=%s cover=%.4f" % (fam_ok, du_ok,
                                                            d_cover))
    return _finish(3, "quadmax-inclusion", ok, detail, t0, 10.0)


# 4. paraboloids fixture: empty exact set, sampled clusters, infinite bound

def check_paraboloids(fx) -> CheckResult:
    t0 = time.time()
    fn = fx["paraboloids"]
    U = outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)
    empty_ok = U.is_empty
    rep = errorbound.lower_bound_from_outer(U)
    inf_ok = errorbound.is_infinite(rep.lower_bound)
    cloud = oracle.sample_limsup(fn, fn.basepoint, dirs_per_radius=2_000_000)
    pts = cloud.limit_points()
    if len(pts):
        d1 = np.linalg.norm(pts - np.asarray([1.0, 0.0]), axis=1)
        d2 = np.linalg.norm(pts - np.asarray([-2.0, 0.0]), axis=1)
        cluster_ok = (float(np.minimum(d1, d2).max()) <= 1e-2
                      and bool((d1 <= 1e-2).any()) and bool((d2 <= 1e-2).any()))
    else:
        cluster_ok = False
    ok = empty_ok and inf_ok and cluster_ok
    detail = ("empty exact set, +inf bound, %d points on both clusters"
              % len(pts) if ok else
              "empty=%s inf=%s clusters=%s (%d pts)" % (empty_ok, inf_ok,
                                                        cluster_ok, len(pts)))
    return _finish(4, "paraboloids-degenerate", ok, detail, t0, 10.0)


# 5. ball-support fixtures: exact arc parameters and sampled equality

def _arc_matches(piece, center, theta0, theta1, tol=1e-9):
    if not isinstance(piece, geometry.Arc):
        return False
    if max(abs(piece.center[0] - center[0]),
           abs(piece.center[1] - center[1])) > tol:
        return False
    if abs(piece.radius - 1.0) > tol:
        return False
    two_pi = 2 * math.pi
    shift = (piece.theta0 - theta0) % two_pi
    if min(shift, two_pi - shift) > tol:
        return False
    return abs((piece.theta1 - piece.theta0) - (theta1 - theta0)) <= tol


def _match_arc_union(U, golden):
    if len(U.pieces) != len(golden):
        return False
    used = set()
    for want in golden:
        hit = next((i for i, p in enumerate(U.pieces)
                    if i not in used and _arc_matches(p, *want)), None)
        if hit is None:
            return False
        used.add(hit)
    return True


def check_disks(fx) -> CheckResult:
    t0 = time.time()
    pi = math.pi
    bnd = math.acos(-2.0 / 3.0)
    fn = fx["disks"]
    U = outer.outer_limit_exact_2d(fn, fn.basepoint)
    first_ok = _match_arc_union(U, [((-0.5, 0.0), 1.5 * pi, 2.5 * pi),
                                    ((0.5, 0.0), 0.5 * pi, 1.5 * pi)])
    open_ok = all(isinstance(p, geometry.Arc)
                  and not p.closed0 and not p.closed1 for p in U.pieces)
    fn_mod = fx["disks_mod"]
    U_mod = outer.outer_limit_exact_2d(fn_mod, fn_mod.basepoint)
    mod_ok = _match_arc_union(U_mod, [((0.5, 0.0), 1.5 * pi, 2.5 * pi),
                                      ((1.5, 0.0), 0.5 * pi, bnd),
                                      ((1.5, 0.0), 2 * pi - bnd, 1.5 * pi)])
    cloud = oracle.sample_limsup(fn, fn.basepoint)
    d_uc, d_cu = geometry.hausdorff_cloud(U.closure(), cloud.limit_points())
    sym_ok = d_uc <= _HAUS_TOL and d_cu <= _HAUS_TOL
    ok = first_ok and open_ok and mod_ok and sym_ok
    detail = ("semicircles and boundary cos %.12f match, Hausdorff %.3f/%.3f"
              % (-2.0 / 3.0, d_uc, d_cu) if ok else
              "first=%s open=%s mod=%s haus=%.3f/%.3f"
              % (first_ok, open_ok, mod_ok, d_uc, d_cu))
    return _finish(5, "disks-arcs", ok, detail, t0, 20.0)


# 6. subset-union identity on random rational max-affine instances

def random_gradients(rng, max_pieces=8):
    m = int(rng.integers(2, max_pieces + 1))
    return [tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
                  for _ in range(2)) for _ in range(m)]


def check_identity_random(fx, instances=50, seed=118) -> CheckResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    bad = None
    for k in range(instances):
        grads = random_gradients(rng)
        equal, disc = outer.check_identity_affine(grads)
        if not equal:
            bad = (k, grads, disc)
            break
    ok = bad is None
    detail = ("%d random instances agree exactly" % instances if ok else
              "instance %d disagrees by %s: %s" % bad)
    return _finish(6, "identity-random", ok, detail, t0, 30.0)


# 7. error-bound inequality on every fixture with a nonempty limit

def check_error_bound(fx) -> CheckResult:
    t0 = time.time()
    failures = []
    for name in FIXTURE_NAMES:
        if name == "paraboloids":
            continue
        fn = fx[name]
        rep = oracle.empirical_error_bound_modulus(fn, fn.basepoint)
        est = rep.estimate
        if est is None:
            failures.append("%s: no estimate" % name)
            continue
        pts = oracle.sample_limsup(fn, fn.basepoint).limit_points()
        if not len(pts):
            failures.append("%s: empty cloud" % name)
            continue
        cdist = _min_cloud_norm(pts)
        if est < cdist - _SLACK:
            failures.append("%s: est %.4f < cloud dist %.4f - %.2f"
                            % (name, est, cdist, _SLACK))
        if name in _EQUALITY_NAMES:
            U = outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)
            lb = errorbound.lower_bound_from_outer(U).lower_bound
            if est < lb - _SLACK:
                failures.append("%s: est %.4f < exact bound %.4f - %.2f"
                                % (name, est, lb, _SLACK))
            if name in _CONVEX_NAMES and abs(est - lb) > _SLACK:
                failures.append("%s: |est %.4f - bound %.4f| > %.2f"
                                % (name, est, lb, _SLACK))
        if name == "absx" and abs(est - 1.0) > 1e-3:
            failures.append("absx: est %.6f not within 1e-3 of 1" % est)
        if name == "linear2" and abs(est - 2.0) > 1e-3:
            failures.append("linear2: est %.6f not within 1e-3 of 2" % est)
    ok = not failures
    detail = ("inequality holds on all %d fixtures"
              % (len(FIXTURE_NAMES) - 1) if ok else "; ".join(failures))
    return _finish(7, "error-bound", ok, detail, t0, 30.0)


# 8. invariant property suites

def _rational_dirs(rng, count, dim):
    out = []
    while len(out) < count:
        d = tuple(Fraction(int(rng.integers(-9, 10)),
                           int(rng.integers(1, 5))) for _ in range(dim))
        if any(d):
            out.append(d)
    return out


def _subdiff_candidates(fn):
    """Points of the subdifferential at the basepoint, for inequality tests."""
    try:
        sub = model.frechet_subdifferential(fn, fn.basepoint)
    except geometry.UnsupportedPair:
        sub = None
        hulls = [model.component_subdifferential(fn, i, fn.basepoint)
                 for i in model.active_components(fn, fn.basepoint)]
        grid = [(x * 0.25, y * 0.25) for x in range(-12, 13)
                for y in range(-12, 13)]
        return [g for g in grid
                if all(geometry.piece_contains(h, g, tol=1e-12) for h in hulls)]
    if sub is None:
        return []
    return geometry.discretize_piece(sub, res=0.05)


def _check_homogeneity(fn, rng, failures, name):
    dirs = _rational_dirs(rng, 25, fn.dim)
    for p in dirs:
        base = model.directional_derivative(fn, fn.basepoint, p)
        for t in (Fraction(1, 2), Fraction(3), Fraction(7, 3)):
            scaled = model.directional_derivative(
                fn, fn.basepoint, tuple(t * c for c in p))
            want = t * base
            if isinstance(base, Fraction) and isinstance(scaled, Fraction):
                good = scaled == want
            else:
                good = abs(float(scaled) - float(want)) <= 1e-9 * max(
                    1.0, abs(float(want)))
            if not good:
                failures.append("%s: homogeneity broke at p=%s t=%s"
                                % (name, p, t))
                return


def _check_subgradient_inequality(fn, rng, failures, name):
    cands = _subdiff_candidates(fn)
    if not cands:
        return
    C = np.asarray([[float(c) for c in g] for g in cands])
    tol = 1e-9 if fn.all_affine else 1e-6
    dirs = _rational_dirs(rng, 1000, fn.dim)
    for p in dirs:
        dd = float(model.directional_derivative(fn, fn.basepoint, p))
        top = float((C @ np.asarray([float(c) for c in p])).max())
        if top > dd + tol * max(1.0, abs(dd)):
            failures.append("%s: subgradient inequality broke at p=%s "
                            "(%.2e > %.2e)" % (name, p, top, dd))
            return


def _check_fd_consistency(fn, rng, failures, name, t=1e-4):
    raw = rng.normal(size=(200, fn.dim))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    xb = np.asarray([float(c) for c in fn.basepoint])
    fbar = float(model.evaluate(fn, fn.basepoint))
    checked = 0
    for p in raw:
        dd = float(model.directional_derivative(
            fn, fn.basepoint, tuple(float(c) for c in p)))
        if abs(dd) < 0.2:
            continue
        checked += 1
        fd = (float(model.evaluate(fn, tuple(xb + t * p))) - fbar) / t
        if abs(fd / dd - 1.0) >= 1e-3:
            failures.append("%s: finite difference ratio off at p=%s "
                            "(fd=%.6f dd=%.6f)" % (name, tuple(p), fd, dd))
            return
    if checked < 50:
        failures.append("%s: too few informative directions (%d)"
                        % (name, checked))


def _check_min_norm_certificates(rng, failures):
    for k in range(30):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 7))
        verts = [tuple(Fraction(int(rng.integers(-6, 7)),
                                int(rng.integers(1, 4))) for _ in range(n))
                 for _ in range(m)]
        pt, nrm, nsq = lp.min_norm_point(verts)
        if abs(nrm - math.sqrt(float(nsq))) > 1e-12 * max(1.0, nrm):
            failures.append("min-norm: norm mismatch on %s" % (verts,))
            return
        for v in verts:
            lhs = sum(pi * vi for pi, vi in zip(pt, v))
            bad = (lhs < nsq if isinstance(nsq, Fraction)
                   else lhs < nsq - 1e-12 * max(1.0, float(nsq)))
            if bad:
                failures.append("min-norm: certificate violated on %s at %s"
                                % (verts, v))
                return


def _check_strict_replay(fx, failures):
    grad_sets = [_gradients(fx["sixmax"]), _gradients(fx["sixmax_mod"])]
    mm = fx["minmax"]
    grad_sets.extend([[p.a for p in comp.pieces] for comp in mm.components])
    for grads in grad_sets:
        fam = outer.enumerate_D(grads)
        members = {tuple(sorted(ind)) for ind, _ in fam.entries}
        for ind, d in fam.entries:
            vals = [sum(a * di for a, di in zip(grads[j - 1], d)) for j in ind]
            rest = [sum(a * di for a, di in zip(grads[k], d))
                    for k in range(len(grads)) if (k + 1) not in ind]
            if any(v != 1 for v in vals) or any(v >= 1 for v in rest):
                failures.append("replay: certificate for %s fails" % (ind,))
                return
        m = len(grads)
        for size in range(1, m + 1):
            for combo in itertools.combinations(range(m), size):
                key = tuple(j + 1 for j in combo)
                if key in members:
                    continue
                res = lp.strict_feasible(lp.StrictSystem(
                    tuple(tuple(grads[j]) for j in combo),
                    tuple(tuple(grads[k]) for k in range(m)
                          if k not in combo)))
                if not isinstance(res, lp.Infeasible):
                    failures.append("replay: %s newly feasible" % (key,))
                    return
                rows = ([tuple(grads[j]) for j in combo]
                        + [tuple(grads[k]) for k in range(m)
                           if k not in combo])
                ys = list(res.y_eq) + list(res.y_strict)
                combo_sum = [sum(y * row[i] for y, row in zip(ys, rows))
                             for i in range(len(rows[0]))]
                total = sum(ys)
                if (any(y < 0 for y in res.y_strict)
                        or any(c != 0 for c in combo_sum)
                        or not (total < 0 or (total == 0
                                              and any(y > 0
                                                      for y in res.y_strict)))):
                    failures.append("replay: Motzkin certificate for %s "
                                    "does not verify" % (key,))
                    return


def check_properties(fx) -> CheckResult:
    t0 = time.time()
    failures = []
    for name in FIXTURE_NAMES:
        fn = fx[name]
        rng = np.random.default_rng(7)
        _check_homogeneity(fn, rng, failures, name)
        _check_subgradient_inequality(fn, rng, failures, name)
        _check_fd_consistency(fn, rng, failures, name)
    rng = np.random.default_rng(13)
    _check_min_norm_certificates(rng, failures)
    _check_strict_replay(fx, failures)
    ok = not failures
    detail = ("homogeneity, subgradient, finite-difference, certificate "
              "suites all pass" if ok else "; ".join(failures[:3]))
    return _finish(8, "property-suites", ok, detail, t0, 60.0)


ALL_CHECKS = (check_d_family, check_minmax_outer, check_quadmax,
              check_paraboloids, check_disks, check_identity_random,
              check_error_bound, check_properties)


def run_all(fixtures_dir) -> list:
    fx = load_fixtures(fixtures_dir)
    return [chk(fx) for chk in ALL_CHECKS]


# expected-output files: NAME.expected.json next to NAME.json

def expected_payload(fn: model.MinMaxFunction) -> dict:
    U = outer.outer_limit_exact_2d(fn, fn.basepoint, with_closure=True)
    rep = errorbound.lower_bound_from_outer(U)
    out = {"outer_limit": io.union_to_json(U),
           "lower_bound": io.erbound_result_json(rep)["lower_bound"]}
    if len(fn.components) == 1 and fn.components[0].kind == "max_affine":
        out["d_family"] = io.dfamily_result_json(
            outer.enumerate_D(_gradients(fn)))["d_family"]
    return out


def compare_expected(fixtures_dir) -> list:
    """(name, ok, detail) per expected file present in the directory."""
    results = []
    directory = Path(fixtures_dir)
    for name in FIXTURE_NAMES:
        path = directory / (name + ".expected.json")
        if not path.exists():
            continue
        try:
            with open(path) as fh:
                want = json.load(fh)
        except ValueError as err:
            results.append((name, False, "unreadable expected file: %s" % err))
            continue
        fn, _ = io.load_problem(str(directory / (name + ".json")))
        got = expected_payload(fn)
        diffs = [k for k in sorted(set(want) | set(got))
                 if want.get(k) != got.get(k)]
        if diffs:
            k = diffs[0]
            results.append((name, False, "field %r differs: expected %r, "
                            "got %r" % (k, want.get(k), got.get(k))))
        else:
            results.append((name, True, "matches"))
    return results
