"""Direction sweeps over the unit circle computing unions of intersected
argmax faces, the index-subset family with strict-feasibility certificates,
and the identity check between the two constructions for max-affine data.

Two sweep engines: an exact rational one (all component subdifferentials are
polytopes with rational vertices) and a float angle sweep used whenever a
ball term is present. Both enumerate every direction where the active
structure can change, then evaluate open arcs at interior representatives.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import geometry, lp, model
from .exact import dot, is_rational, norm_sq, vsub
from .geometry import Arc, Ball, FaceUnion, Polytope, point

_TWO_PI = 2.0 * math.pi
_POS_TOL = 1e-11     # float-mode strict positivity guard for f'(xbar; p)
_ANG_TOL = 1e-12


class EnumerationCapExceeded(Exception):
    """Too many gradients for exhaustive subset enumeration."""


@dataclass(frozen=True)
class IndexFamily:
    """Subsets D (1-based, sorted) with a certificate direction d each."""
    entries: tuple    # of (indices: tuple[int], certificate: tuple)

    def subsets(self):
        return [set(ind) for ind, _ in self.entries]


@dataclass(frozen=True)
class DirectionCell:
    angle_lo: float
    angle_hi: float
    at_breakpoint: bool
    representative: tuple
    dd_positive: bool
    i_min: tuple = ()
    face: object = None


def _subdiff_pieces(fn: model.MinMaxFunction, xbar, tol=None):
    idx = model.active_components(fn, xbar, tol)
    return idx, [model.component_subdifferential(fn, i, xbar, tol) for i in idx]


# exact rational sweep

def _primitive(v):
    fr = [Fraction(x) if not isinstance(x, Fraction) else x for x in v]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero direction")
    return tuple(x // g for x in ints)


def _quadrant(p):
    x, y = p
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def _dir_cmp(u, w):
    qu, qw = _quadrant(u), _quadrant(w)
    if qu != qw:
        return -1 if qu < qw else 1
    cr = u[0] * w[1] - u[1] * w[0]
    if cr > 0:
        return -1
    if cr < 0:
        return 1
    return 0


def _perp(v):
    return (-v[1], v[0])


def _breakpoints_exact(pieces):
    dirs = set()
    all_vertex_lists = [p.vertices for p in pieces]
    flat = [v for vs in all_vertex_lists for v in vs]
    for vs in all_vertex_lists:
        for u, w in itertools.combinations(vs, 2):
            d = vsub(u, w)
            if any(d):
                pp = _perp(d)
                dirs.add(_primitive(pp))
                dirs.add(_primitive([-x for x in pp]))
    for va, vb in itertools.combinations(all_vertex_lists, 2):
        for u in va:
            for w in vb:
                d = vsub(u, w)
                if any(d):
                    pp = _perp(d)
                    dirs.add(_primitive(pp))
                    dirs.add(_primitive([-x for x in pp]))
    for u in flat:
        if any(u):
            pp = _perp(u)
            dirs.add(_primitive(pp))
            dirs.add(_primitive([-x for x in pp]))
    dirs.update([(1, 0), (0, 1), (-1, 0), (0, -1)])
    return sorted(dirs, key=functools.cmp_to_key(_dir_cmp))


def _eval_exact(pieces, p):
    vals = [geometry.support_value(piece, p) for piece in pieces]
    fp = min(vals)
    if fp <= 0:
        return fp, (), None
    i_min = tuple(i for i, v in enumerate(vals) if v == fp)
    faces = [geometry.argmax_face(pieces[i], p, tol=0) for i in i_min]
    cur = faces[0]
    for nxt in faces[1:]:
        cur = geometry.intersect(cur, nxt)
        if cur is None:
            return fp, i_min, None
    return fp, i_min, cur


def _face_key(face):
    if face is None:
        return None
    return face.vertex_set()


def _sweep_rational(pieces, validate=True):
    bps = _breakpoints_exact(pieces)
    cells = []
    out = []
    k = len(bps)
    for idx in range(k):
        p = bps[idx]
        q = bps[(idx + 1) % k]
        fp, i_min, face = _eval_exact(pieces, p)
        ang = math.atan2(float(p[1]), float(p[0]))
        cells.append(DirectionCell(ang, ang, True, p, fp > 0, i_min, face))
        if fp > 0 and face is not None:
            out.append(face)
        mid = tuple(a + b for a, b in zip(p, q))
        fp_m, i_m, face_m = _eval_exact(pieces, mid)
        if validate and fp_m > 0:
            # the structure must not change inside an open cell
            for probe in (tuple(3 * a + b for a, b in zip(p, q)),
                          tuple(a + 3 * b for a, b in zip(p, q))):
                fp_p, i_p, face_p = _eval_exact(pieces, probe)
                if i_p != i_m or _face_key(face_p) != _face_key(face_m):
                    raise AssertionError("direction cell is not stable")
        ang2 = math.atan2(float(q[1]), float(q[0]))
        cells.append(DirectionCell(ang, ang2, False, mid, fp_m > 0, i_m, face_m))
        if fp_m > 0 and face_m is not None:
            out.append(face_m)
    return cells, out


# float angle sweep (ball terms present)

def _ang(v):
    return math.atan2(float(v[1]), float(v[0])) % _TWO_PI


def _tie_angles(c, target):
    """Angles phi with <c, (cos phi, sin phi)> = target, if any."""
    nc = math.hypot(float(c[0]), float(c[1]))
    if nc == 0:
        return []
    ratio = float(target) / nc
    if abs(ratio) > 1:
        return []
    base = _ang(c)
    off = math.acos(max(-1.0, min(1.0, ratio)))
    return [(base + off) % _TWO_PI, (base - off) % _TWO_PI]


def _breakpoints_float(pieces):
    angs = [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]
    polys = [p for p in pieces if isinstance(p, Polytope)]
    balls = [p for p in pieces if isinstance(p, Ball)]
    vlists = [p.vertices for p in polys]
    flat = [v for vs in vlists for v in vs]
    for vs in vlists:
        for u, w in itertools.combinations(vs, 2):
            d = vsub(u, w)
            if any(float(x) != 0 for x in d):
                a = _ang(_perp(d))
                angs += [a, (a + math.pi) % _TWO_PI]
    for va, vb in itertools.combinations(vlists, 2):
        for u in va:
            for w in vb:
                d = vsub(u, w)
                if any(float(x) != 0 for x in d):
                    a = _ang(_perp(d))
                    angs += [a, (a + math.pi) % _TWO_PI]
    for u in flat:
        if any(float(x) != 0 for x in u):
            a = _ang(_perp(u))
            angs += [a, (a + math.pi) % _TWO_PI]
    for b in balls:
        # f' sign changes of the ball support
        angs += _tie_angles(b.center, -float(b.radius))
        # support ties against polytope vertices, and moving-point coincidence
        for w in flat:
            d = vsub(b.center, w)
            angs += _tie_angles(d, -float(b.radius))
            if abs(geometry.norm(d) - float(b.radius)) <= 1e-9:
                angs.append(_ang([-x for x in d]))
    for b1, b2 in itertools.combinations(balls, 2):
        d = vsub(b1.center, b2.center)
        angs += _tie_angles(d, float(b2.radius) - float(b1.radius))
        dr = float(b2.radius) - float(b1.radius)
        if dr != 0 and abs(geometry.norm(d) - abs(dr)) <= 1e-9:
            angs.append(_ang([x / dr for x in d]))
    angs = sorted(a % _TWO_PI for a in angs)
    dedup = []
    for a in angs:
        if not dedup or a - dedup[-1] > _ANG_TOL:
            dedup.append(a)
    if dedup and dedup[0] + _TWO_PI - dedup[-1] <= _ANG_TOL:
        dedup.pop()
    return dedup


def _eval_float(pieces, phi):
    p = (math.cos(phi), math.sin(phi))
    vals = [float(geometry.support_value(piece, p)) for piece in pieces]
    fp = min(vals)
    scale = max(1.0, max(abs(v) for v in vals))
    if fp <= _POS_TOL * scale:
        return fp, (), None, p
    tol = geometry.TAU_ACT * scale
    i_min = tuple(i for i, v in enumerate(vals) if v - fp <= tol)
    faces = [geometry.argmax_face(pieces[i], p) for i in i_min]
    cur = faces[0]
    for nxt in faces[1:]:
        cur = geometry.intersect(cur, nxt, tol=1e-9)
        if cur is None:
            return fp, i_min, None, p
    return fp, i_min, cur, p


def _unique_piece_indices(pieces, i_min):
    reps = []
    for i in i_min:
        if not any(geometry._same_piece(pieces[i], pieces[j]) for j in reps):
            reps.append(i)
    return reps


def _merge_arcs(arcs, covered):
    """Chain arcs of one circle whose junction points were recorded."""
    arcs = sorted(arcs, key=lambda a: a.theta0)
    changed = True
    while changed and len(arcs) > 1:
        changed = False
        m = len(arcs)
        for i in range(m):
            a = arcs[i]
            b = arcs[(i + 1) % m]
            if a is b:
                continue
            gap = (b.theta0 - a.theta1) % _TWO_PI
            if min(gap, _TWO_PI - gap) > 1e-9 or not covered(a.theta1):
                continue
            span = a.theta1 - a.theta0 + b.theta1 - b.theta0
            if span >= _TWO_PI - 1e-9:
                return [Arc(a.center, a.radius, 0.0, _TWO_PI, True, True)]
            merged = Arc(a.center, a.radius, a.theta0,
                         a.theta0 + span, a.closed0, b.closed1)
            rest = [arcs[j] for j in range(m) if j not in (i, (i + 1) % m)]
            arcs = sorted(rest + [merged], key=lambda x: x.theta0)
            changed = True
            break
    return arcs


def _sweep_float(pieces, validate=True):
    angs = _breakpoints_float(pieces)
    if not angs:
        angs = [0.0]
    cells = []
    out = []
    arcs = []
    bp_info = {}
    k = len(angs)
    for idx in range(k):
        a0 = angs[idx]
        a1 = angs[(idx + 1) % k]
        if idx == k - 1:
            a1 += _TWO_PI
        fp, i_min, face, p = _eval_float(pieces, a0)
        bp_info[a0 % _TWO_PI] = face
        cells.append(DirectionCell(a0, a0, True, p, fp > 0, i_min, face))
        if fp > 0 and face is not None:
            out.append(face)
        probes = [a0 + (a1 - a0) * t for t in (0.25, 0.5, 0.75)]
        fp_m, i_m, face_m, pm = _eval_float(pieces, probes[1])
        cells.append(DirectionCell(a0, a1, False, pm, fp_m > 0, i_m, face_m))
        if fp_m <= 0:
            continue
        reps = _unique_piece_indices(pieces, i_m)
        if len(reps) == 1 and isinstance(pieces[reps[0]], Ball):
            b = pieces[reps[0]]
            if validate:
                for t in (probes[0], probes[2]):
                    _, i_p, _, _ = _eval_float(pieces, t)
                    if _unique_piece_indices(pieces, i_p) != reps:
                        raise AssertionError("unstable ball cell")
            arcs.append(Arc(tuple(float(c) for c in b.center), float(b.radius),
                            a0, a1, False, False))
        elif all(isinstance(pieces[i], Polytope) for i in reps):
            if validate:
                for t in (probes[0], probes[2]):
                    _, i_p, f_p, _ = _eval_float(pieces, t)
                    if i_p != i_m or _face_key(f_p) != _face_key(face_m):
                        raise AssertionError("direction cell is not stable")
            if face_m is not None:
                out.append(face_m)
        else:
            # mixed ball/polytope tie on an open arc: supports cannot agree
            # on an interval, and isolated coincidences are breakpoints
            if validate:
                for t in (probes[0], probes[2]):
                    _, _, f_p, _ = _eval_float(pieces, t)
                    if f_p is not None:
                        raise AssertionError("unexpected face on mixed arc")
    by_circle = {}
    for a in arcs:
        by_circle.setdefault((a.center, a.radius), []).append(a)
    merged = []
    for (c, r), group in by_circle.items():
        def covered(theta, c=c, r=r):
            q = (c[0] + r * math.cos(theta), c[1] + r * math.sin(theta))
            piece = bp_info.get(theta % _TWO_PI)
            return piece is not None and geometry.contains_point(piece, q, 1e-9)
        merged.extend(_merge_arcs(group, covered))
    return cells, out + merged


def sweep_cells(fn: model.MinMaxFunction, xbar, validate=True):
    """Direction-cell decomposition of the unit circle at the basepoint."""
    _, pieces = _subdiff_pieces(fn, xbar)
    if all(isinstance(p, Polytope) for p in pieces) and \
            all(is_rational(c) for v in (w for p in pieces for w in p.vertices) for c in v):
        return _sweep_rational(pieces, validate)
    return _sweep_float(pieces, validate)


def _sweep_1d(fn, xbar):
    _, pieces = _subdiff_pieces(fn, xbar)
    out = []
    cells = []
    for p in ((1,), (-1,)):
        vals = [geometry.support_value(piece, p) for piece in pieces]
        fp = min(vals)
        pos = fp > 0
        face = None
        if pos:
            i_min = tuple(i for i, v in enumerate(vals) if v == fp)
            faces = [geometry.argmax_face(pieces[i], p, tol=0) for i in i_min]
            cur = faces[0]
            for nxt in faces[1:]:
                cur = geometry.intersect(cur, nxt)
                if cur is None:
                    break
            face = cur
            if face is not None:
                out.append(face)
        ang = 0.0 if p[0] > 0 else math.pi
        cells.append(DirectionCell(ang, ang, True, p, pos,
                                   i_min if pos else (), face))
    return cells, out


def outer_limit_exact_2d(fn: model.MinMaxFunction, xbar, with_closure=False):
    """Union over directions with positive derivative of the intersected
    argmax faces of the active component subdifferentials. Dimension 1 or 2."""
    if fn.dim == 1:
        _, out = _sweep_1d(fn, xbar)
    elif fn.dim == 2:
        _, out = sweep_cells(fn, xbar)
    else:
        raise ValueError("exact sweep supports dimensions 1 and 2 only")
    U = geometry.normalize_union(out)
    return U.closure() if with_closure else U


def _bisect_root(g, lo, hi):
    glo = g(lo)
    ghi = g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if (glo > 0) == (ghi > 0):
        return None
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0 or hi - lo < 1e-15:
            return mid
        if (gm > 0) == (glo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _tie_roots(pieces, phi_a, phi_b):
    """Angles inside (phi_a, phi_b) where a support order or an argmax
    vertex changes; the ties are located on the continuous differences."""
    def pvec(phi):
        return (math.cos(phi), math.sin(phi))

    def supp(i, phi):
        return float(geometry.support_value(pieces[i], pvec(phi)))

    roots = []
    m = len(pieces)
    for i, j in itertools.combinations(range(m), 2):
        r = _bisect_root(lambda t: supp(i, t) - supp(j, t), phi_a, phi_b)
        if r is not None:
            roots.append(r)
    for i in range(m):
        if not isinstance(pieces[i], Polytope):
            continue
        fa = geometry.argmax_face(pieces[i], pvec(phi_a))
        fb = geometry.argmax_face(pieces[i], pvec(phi_b))
        for u in fa.vertices:
            for w in fb.vertices:
                d = vsub(u, w)
                if not any(float(x) != 0 for x in d):
                    continue
                r = _bisect_root(
                    lambda t, d=d: float(dot(d, pvec(t))), phi_a, phi_b)
                if r is not None:
                    roots.append(r)
    roots.sort()
    dedup = []
    for r in roots:
        if not dedup or r - dedup[-1] > 1e-12:
            dedup.append(r)
    return dedup


def _sample_signature(pieces, phi):
    fp, i_min, face, p = _eval_float(pieces, phi)
    keys = []
    for i in i_min:
        if isinstance(pieces[i], Ball):
            keys.append(("ball", i))
        else:
            keys.append(_face_key(geometry.argmax_face(pieces[i], p)))
    return (fp > 0, i_min, tuple(keys), face is None), fp, face


def outer_limit_sampled(fn: model.MinMaxFunction, xbar, n_dirs=10000, seed=42):
    """Sampled inner approximation: a point cloud of face surface samples
    over quasi-uniform directions with positive directional derivative.
    In the plane, structure changes between consecutive directions are
    located by bisection so that tie faces are sampled too."""
    import numpy as np
    n = fn.dim
    _, pieces = _subdiff_pieces(fn, xbar)
    mags = []
    for piece in pieces:
        if isinstance(piece, Polytope):
            mags += [geometry.norm(v) for v in piece.vertices]
        else:
            mags.append(geometry.norm(piece.center) + float(piece.radius))
    M = max(1.0, max(mags))
    rng = np.random.default_rng(seed)
    cloud = []

    def emit(fp, face):
        if fp > 0 and face is not None:
            cloud.extend(geometry.discretize_piece(face, res=0.01 * M))

    if n == 2:
        offset = rng.uniform(0, _TWO_PI / n_dirs)
        angles = offset + _TWO_PI * np.arange(n_dirs) / n_dirs
        prev = None
        for phi in list(angles) + [angles[0] + _TWO_PI]:
            sig, fp, face = _sample_signature(pieces, phi)
            emit(fp, face)
            if prev is not None and sig != prev[1]:
                for root in _tie_roots(pieces, prev[0], phi):
                    fp_t, _, face_t, _ = _eval_float(pieces, root)
                    emit(fp_t, face_t)
            prev = (phi, sig)
    else:
        raw = rng.normal(size=(n_dirs, n))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        for row in dirs:
            p = tuple(float(x) for x in row)
            vals = [float(geometry.support_value(piece, p)) for piece in pieces]
            fp = min(vals)
            if fp <= _POS_TOL * M:
                continue
            scale = max(1.0, max(abs(v) for v in vals))
            tol = geometry.TAU_ACT * scale
            i_min = [i for i, v in enumerate(vals) if v - fp <= tol]
            faces = [geometry.argmax_face(pieces[i], p) for i in i_min]
            faces.sort(key=lambda f: 0 if isinstance(f, Polytope) and f.is_point
                       else 1 if isinstance(f, Polytope) else 2)
            cur = faces[0]
            try:
                for nxt in faces[1:]:
                    cur = geometry.intersect(cur, nxt, tol=1e-9)
                    if cur is None:
                        break
            except geometry.UnsupportedPair:
                continue
            if cur is not None:
                cloud.extend(geometry.discretize_piece(cur, res=0.01 * M))
    if not cloud:
        return np.zeros((0, n))
    pts = np.asarray(cloud, dtype=float)
    return np.unique(np.round(pts, 12), axis=0)


def enumerate_D(gradients, cap=20) -> IndexFamily:
    """All nonempty index subsets whose equality/strict system is solvable,
    each with a certified direction. Subsets are reported 1-based."""
    m = len(gradients)
    if m > cap:
        raise EnumerationCapExceeded(
            "subset enumeration over %d gradients exceeds the cap of %d; "
            "use sampled mode" % (m, cap))
    grads = [tuple(g) for g in gradients]
    entries = []
    for size in range(1, m + 1):
        for combo in itertools.combinations(range(m), size):
            eqs = [grads[j] for j in combo]
            stricts = [grads[j] for j in range(m) if j not in combo]
            res = lp.strict_feasible(lp.StrictSystem(tuple(eqs), tuple(stricts)))
            if not isinstance(res, lp.Infeasible):
                entries.append((tuple(j + 1 for j in combo), tuple(res)))
    return IndexFamily(tuple(entries))


def d_union(gradients, family: IndexFamily) -> FaceUnion:
    grads = [tuple(g) for g in gradients]
    pieces = [Polytope(tuple(grads[j - 1] for j in ind))
              for ind, _ in family.entries]
    return geometry.normalize_union(pieces)


def check_identity_affine(gradients):
    """Compare the subset-family union against the direction sweep for the
    max of the affine pieces <g_j, x>. Returns (equal, discrepancy)."""
    grads = [tuple(g) for g in gradients]
    n = len(grads[0])
    comp = model.Component("max_affine",
                           tuple(model.Affine(g, 0 * g[0]) for g in grads))
    fn = model.MinMaxFunction(n, tuple(0 * grads[0][0] for _ in range(n)), (comp,))
    left = d_union(grads, enumerate_D(grads))
    right = outer_limit_exact_2d(fn, fn.basepoint, with_closure=False)
    exact = all(is_rational(c) for g in grads for c in g)
    if exact:
        if left.is_empty and right.is_empty:
            return True, 0.0
        if left.is_empty != right.is_empty:
            return False, math.inf
        equal, _ = geometry.union_equal_exact(left, right)
        if equal:
            return True, 0.0
        _, dev = geometry.union_equal_sampled(left, right, res=1e-3)
        return False, dev
    equal, dev = geometry.union_equal_sampled(left, right, tol=1e-9, res=1e-3)
    return equal, dev
