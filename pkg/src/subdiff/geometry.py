"""Convex geometry kernel: polytopes, balls, circular arcs, face unions.

Exact rational arithmetic whenever the data is rational; float arithmetic
with a relative activity tolerance otherwise. Pieces are immutable and all
operations are pure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import lp
from .exact import dot, is_rational, norm_sq, vsub

TAU_ACT = 1e-9    # float-mode activity tolerance, relative to value magnitude
_TWO_PI = 2.0 * math.pi


class UnsupportedPair(Exception):
    """Intersection pair outside the supported combinations."""


class EmptySetError(Exception):
    """An operation that needs a nonempty set received an empty one."""


def all_rational(points) -> bool:
    return all(is_rational(x) for p in points for x in p)


def scale_tol(values, tol=TAU_ACT):
    mags = [abs(float(v)) for v in values]
    return tol * max(1.0, max(mags) if mags else 1.0)


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points):
    """Monotone chain; extreme points only, counter-clockwise order."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        hull = hull[:1]
    return hull


def canonical_vertices(points):
    """Extreme points of the input set, deterministically ordered.

    1-D and 2-D are handled directly; 3-D filters by hull membership tests.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValueError("empty vertex list")
    n = len(pts[0])
    uniq = sorted(set(pts))
    if len(uniq) == 1:
        return tuple(uniq)
    if n == 1:
        return tuple(sorted({min(uniq), max(uniq)}))
    if n == 2:
        hull = convex_hull_2d(uniq)
        start = min(range(len(hull)), key=lambda i: hull[i])
        return tuple(hull[start:] + hull[:start])
    keep = []
    for i, v in enumerate(uniq):
        others = uniq[:i] + uniq[i + 1:]
        if not lp.point_in_hull(v, others, tol=0 if all_rational(uniq) else 1e-9):
            keep.append(v)
    return tuple(keep) if keep else (uniq[0],)


@dataclass(frozen=True)
class Polytope:
    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", canonical_vertices(self.vertices))

    @property
    def dim(self):
        return len(self.vertices[0])

    @property
    def is_point(self):
        return len(self.vertices) == 1

    @property
    def closed(self):
        return True

    def vertex_set(self):
        return frozenset(self.vertices)


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: object

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        if self.radius < 0:
            raise ValueError("negative radius")

    @property
    def dim(self):
        return len(self.center)

    @property
    def closed(self):
        return True


@dataclass(frozen=True)
class Arc:
    """Circular arc {center + radius*(cos t, sin t) : t in [theta0, theta1]},
    with per-endpoint closure flags. A span of 2*pi is a full circle."""
    center: tuple
    radius: float
    theta0: float
    theta1: float
    closed0: bool = True
    closed1: bool = True

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.theta1 < self.theta0:
            raise ValueError("need theta1 >= theta0")
        if self.theta1 - self.theta0 > _TWO_PI + 1e-9:
            raise ValueError("arc span exceeds a full turn")

    @property
    def dim(self):
        return 2

    @property
    def full_circle(self):
        return self.theta1 - self.theta0 >= _TWO_PI - 1e-12

    @property
    def closed(self):
        return self.full_circle or (self.closed0 and self.closed1)

    def point_at(self, theta):
        return (self.center[0] + self.radius * math.cos(theta),
                self.center[1] + self.radius * math.sin(theta))

    def contains_angle(self, phi, tol=1e-9):
        if self.full_circle:
            return True
        span = self.theta1 - self.theta0
        rel = (phi - self.theta0) % _TWO_PI
        if rel > _TWO_PI - tol:
            rel = 0.0
        if rel < -tol or rel > span + tol:
            return False
        if rel <= tol and not self.closed0:
            return False
        if rel >= span - tol and not self.closed1:
            return False
        return True

    def closure(self):
        return Arc(self.center, self.radius, self.theta0, self.theta1, True, True)


@dataclass(frozen=True)
class FaceUnion:
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def is_empty(self):
        return len(self.pieces) == 0

    def closure(self):
        return FaceUnion(tuple(p.closure() if isinstance(p, Arc) else p
                               for p in self.pieces))


def point(coords) -> Polytope:
    return Polytope((tuple(coords),))


def segment(a, b) -> Polytope:
    return Polytope((tuple(a), tuple(b)))


def norm(v) -> float:
    return math.sqrt(float(norm_sq(v)))


def support_value(piece, p):
    """h(p) = max over the piece of <v, p>."""
    if isinstance(piece, Polytope):
        return max(dot(v, p) for v in piece.vertices)
    if isinstance(piece, Ball):
        return dot(piece.center, p) + piece.radius * norm(p)
    raise TypeError("support requires a convex piece, got %r" % type(piece).__name__)


def argmax_face(piece, p, tol=None):
    """Exposed face of the piece in direction p.

    Polytope: hull of vertices attaining the support value within the
    activity tolerance (exact equality for rational data). Ball: the single
    boundary point c + r*p/|p|. p = 0 returns the piece itself.
    """
    if all(x == 0 for x in p):
        return piece
    if isinstance(piece, Polytope):
        vals = [dot(v, p) for v in piece.vertices]
        h = max(vals)
        if tol is None:
            tol = 0 if (all_rational(piece.vertices) and all(is_rational(x) for x in p)) \
                else scale_tol([h])
        keep = [v for v, val in zip(piece.vertices, vals) if h - val <= tol]
        return Polytope(tuple(keep))
    if isinstance(piece, Ball):
        np_ = norm(p)
        c = piece.center
        return point(tuple(float(ci) + float(piece.radius) * float(pi) / np_
                           for ci, pi in zip(c, p)))
    raise TypeError("argmax face requires a convex piece")


def contains_point(piece, x, tol=None) -> bool:
    if isinstance(piece, Polytope):
        if tol is None:
            tol = 0 if (all_rational(piece.vertices) and all(is_rational(c) for c in x)) \
                else 1e-9
        if piece.is_point:
            v = piece.vertices[0]
            if tol == 0:
                return tuple(x) == v
            return norm(vsub(x, v)) <= tol
        return lp.point_in_hull(x, piece.vertices, tol=tol)
    if isinstance(piece, Ball):
        exact = (all_rational([piece.center]) and is_rational(piece.radius)
                 and all(is_rational(c) for c in x))
        if exact and tol in (None, 0):
            # compare squared norms to stay rational
            return norm_sq(vsub(x, piece.center)) <= piece.radius * piece.radius
        t = tol if tol is not None else 1e-9
        return norm(vsub(x, piece.center)) <= float(piece.radius) + t
    if isinstance(piece, Arc):
        if tol is None:
            tol = 1e-9
        d = norm(vsub(x, piece.center))
        if abs(d - piece.radius) > tol:
            return False
        phi = math.atan2(float(x[1]) - piece.center[1], float(x[0]) - piece.center[0])
        ang_tol = tol / max(piece.radius, 1e-12)
        return piece.contains_angle(phi, tol=ang_tol)
    raise TypeError("unknown piece kind")


def _seg_seg_intersection(a1, a2, b1, b2):
    """Proper crossing point of two 2-D segments, or None (exact capable)."""
    d1 = vsub(a2, a1)
    d2 = vsub(b2, b1)
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    rhs = vsub(b1, a1)
    t = (rhs[0] * d2[1] - rhs[1] * d2[0]) / den
    s = (rhs[0] * d1[1] - rhs[1] * d1[0]) / den
    if 0 <= t <= 1 and 0 <= s <= 1:
        return (a1[0] + t * d1[0], a1[1] + t * d1[1])
    return None


def _edges(poly: Polytope):
    vs = poly.vertices
    if len(vs) == 1:
        return []
    if len(vs) == 2:
        return [(vs[0], vs[1])]
    return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _facets_3d(vertices, tol):
    """H-representation of a full-dimensional 3-D polytope (brute force)."""
    facets = []
    for tri in itertools.combinations(vertices, 3):
        u = vsub(tri[1], tri[0])
        w = vsub(tri[2], tri[0])
        nrm = (u[1] * w[2] - u[2] * w[1],
               u[2] * w[0] - u[0] * w[2],
               u[0] * w[1] - u[1] * w[0])
        if all(x == 0 for x in nrm):
            continue
        off = dot(nrm, tri[0])
        vals = [dot(nrm, v) - off for v in vertices]
        if all(v <= tol for v in vals):
            facets.append((nrm, off))
        elif all(v >= -tol for v in vals):
            facets.append((tuple(-x for x in nrm), -off))
    return facets


def intersect(A, B, tol=None):
    """Exact intersection of two pieces, or None when empty.

    Supported: point with anything, polytope with polytope (n <= 3 full
    support in 1-D/2-D, full-dimensional or segment cases in 3-D). Ball-ball
    and ball-polytope pairs raise UnsupportedPair; callers fall back to
    sampling in those cases.
    """
    if isinstance(A, Polytope) and A.is_point:
        return A if contains_point(B, A.vertices[0], tol) else None
    if isinstance(B, Polytope) and B.is_point:
        return B if contains_point(A, B.vertices[0], tol) else None
    if isinstance(A, Ball) or isinstance(B, Ball):
        raise UnsupportedPair("ball intersections beyond points are not supported")
    if isinstance(A, Arc) or isinstance(B, Arc):
        raise UnsupportedPair("arc intersections are not supported")
    n = A.dim
    if n != B.dim:
        raise ValueError("dimension mismatch")
    exact = all_rational(A.vertices) and all_rational(B.vertices)
    if tol is None:
        tol = 0 if exact else 1e-9
    if n == 1:
        lo = max(min(v[0] for v in A.vertices), min(v[0] for v in B.vertices))
        hi = min(max(v[0] for v in A.vertices), max(v[0] for v in B.vertices))
        if lo > hi:
            return None
        return Polytope(((lo,), (hi,)))
    if n == 2:
        cands = [v for v in A.vertices if contains_point(B, v, tol)]
        cands += [v for v in B.vertices if contains_point(A, v, tol)]
        for e1 in _edges(A):
            for e2 in _edges(B):
                q = _seg_seg_intersection(e1[0], e1[1], e2[0], e2[1])
                if q is not None:
                    cands.append(q)
        if not cands:
            return None
        return Polytope(tuple(cands))
    if n == 3:
        segs = [P for P in (A, B) if len(P.vertices) <= 2]
        if len(segs) >= 1 and len(A.vertices) >= 1:
            # clip the segment against the other polytope's facets
            S = A if len(A.vertices) <= 2 else B
            Q = B if S is A else A
            if len(Q.vertices) <= 2:
                raise UnsupportedPair("3-D segment-segment intersection not supported")
            fac = _facets_3d(Q.vertices, tol)
            if not fac:
                raise UnsupportedPair("degenerate 3-D polytope")
            a, b = S.vertices[0], S.vertices[-1]
            d = vsub(b, a)
            lo, hi = 0 * a[0], 1 + 0 * a[0]
            for nrm, off in fac:
                num = off - dot(nrm, a)
                den = dot(nrm, d)
                if den == 0:
                    if dot(nrm, a) - off > tol:
                        return None
                elif den > 0:
                    hi = min(hi, num / den)
                else:
                    lo = max(lo, num / den)
            if lo > hi:
                return None
            p1 = tuple(ai + lo * di for ai, di in zip(a, d))
            p2 = tuple(ai + hi * di for ai, di in zip(a, d))
            return Polytope((p1, p2))
        facA = _facets_3d(A.vertices, tol)
        facB = _facets_3d(B.vertices, tol)
        if not facA or not facB:
            raise UnsupportedPair("degenerate 3-D polytope pair")
        fac = facA + facB
        cands = []
        for trio in itertools.combinations(fac, 3):
            rows = [list(nrm) for nrm, _ in trio]
            rhs = [off for _, off in trio]
            from .exact import gauss_solve, matrix_rank
            if matrix_rank(rows) < 3:
                continue
            sol = gauss_solve(rows, rhs)
            if sol is None:
                continue
            if all(dot(nrm, sol) - off <= tol for nrm, off in fac):
                cands.append(tuple(sol))
        if not cands:
            return None
        return Polytope(tuple(cands))
    raise UnsupportedPair("polytope intersection only up to dimension 3")


def project(piece, x):
    """Nearest point of the piece's closure to x and the distance."""
    if isinstance(piece, Polytope):
        shifted = [vsub(v, x) for v in piece.vertices]
        pt, dist, _ = lp.min_norm_point(shifted)
        return tuple(pi + xi for pi, xi in zip(pt, x)), dist
    if isinstance(piece, Ball):
        c, r = piece.center, float(piece.radius)
        d = norm(vsub(x, c))
        if d <= r:
            return tuple(x), 0.0
        f = r / d
        return tuple(float(ci) + f * (float(xi) - float(ci)) for ci, xi in zip(c, x)), d - r
    if isinstance(piece, Arc):
        cx, cy = piece.center
        dx, dy = float(x[0]) - cx, float(x[1]) - cy
        cands = []
        if dx != 0 or dy != 0:
            phi = math.atan2(dy, dx)
            if piece.full_circle or piece.contains_angle(phi, tol=0.0):
                cands.append(piece.point_at(phi))
        cands.append(piece.point_at(piece.theta0))
        cands.append(piece.point_at(piece.theta1))
        best = min(cands, key=lambda q: (q[0] - float(x[0])) ** 2 + (q[1] - float(x[1])) ** 2)
        return best, norm(vsub(best, x))
    raise TypeError("unknown piece kind")


def project_union(U: FaceUnion, x):
    """Minimum over pieces of project; returns (index, point, distance)."""
    if U.is_empty:
        raise EmptySetError("projection onto an empty union")
    best = None
    for i, piece in enumerate(U.pieces):
        pt, d = project(piece, x)
        if best is None or d < best[2]:
            best = (i, pt, d)
    return best


def discretize_piece(piece, res=0.01):
    """Deterministic covering sample of the piece's closure, spacing <= res."""
    pts = []
    if isinstance(piece, Polytope):
        pts.extend(tuple(float(c) for c in v) for v in piece.vertices)
        for a, b in _edges(piece):
            af = tuple(float(c) for c in a)
            bf = tuple(float(c) for c in b)
            length = norm(vsub(bf, af))
            k = max(1, int(math.ceil(length / res)))
            for i in range(1, k):
                t = i / k
                pts.append(tuple(ai + t * (bi - ai) for ai, bi in zip(af, bf)))
        return pts
    if isinstance(piece, Ball):
        c = tuple(float(v) for v in piece.center)
        r = float(piece.radius)
        if r == 0:
            return [c]
        rings = max(1, int(math.ceil(r / res)))
        pts.append(c)
        for ring in range(1, rings + 1):
            rr = r * ring / rings
            k = max(6, int(math.ceil(_TWO_PI * rr / res)))
            pts.extend((c[0] + rr * math.cos(_TWO_PI * i / k),
                        c[1] + rr * math.sin(_TWO_PI * i / k)) for i in range(k))
        return pts
    if isinstance(piece, Arc):
        span = piece.theta1 - piece.theta0
        k = max(2, int(math.ceil(span * piece.radius / res)) + 1)
        return [piece.point_at(piece.theta0 + span * i / (k - 1)) for i in range(k)]
    raise TypeError("unknown piece kind")


def discretize_union(U: FaceUnion, res=0.01):
    pts = []
    for piece in U.pieces:
        pts.extend(discretize_piece(piece, res))
    return pts


def dists_to_piece(points: np.ndarray, piece) -> np.ndarray:
    """Euclidean distances from an (m, n) float array to the piece's closure."""
    X = np.asarray(points, dtype=float)
    if isinstance(piece, Ball):
        c = np.array([float(v) for v in piece.center])
        d = np.linalg.norm(X - c, axis=1)
        return np.maximum(d - float(piece.radius), 0.0)
    if isinstance(piece, Arc):
        c = np.array(piece.center)
        rel = X - c
        phi = np.arctan2(rel[:, 1], rel[:, 0])
        span = piece.theta1 - piece.theta0
        relang = np.mod(phi - piece.theta0, _TWO_PI)
        inside = relang <= span
        out = np.empty(len(X))
        rad = np.linalg.norm(rel, axis=1)
        out[inside] = np.abs(rad[inside] - piece.radius)
        e0 = np.array(piece.point_at(piece.theta0))
        e1 = np.array(piece.point_at(piece.theta1))
        d_ends = np.minimum(np.linalg.norm(X - e0, axis=1),
                            np.linalg.norm(X - e1, axis=1))
        out[~inside] = d_ends[~inside]
        return out
    if isinstance(piece, Polytope):
        verts = np.array([[float(c) for c in v] for v in piece.vertices])
        if len(verts) == 1:
            return np.linalg.norm(X - verts[0], axis=1)
        best = np.full(len(X), np.inf)
        edges = _edges(piece)
        for a, b in edges:
            af = np.array([float(c) for c in a])
            bf = np.array([float(c) for c in b])
            d = bf - af
            L2 = float(d @ d)
            t = np.clip(((X - af) @ d) / L2, 0.0, 1.0)
            proj = af[None, :] + t[:, None] * d[None, :]
            best = np.minimum(best, np.linalg.norm(X - proj, axis=1))
        if len(verts) >= 3 and X.shape[1] == 2:
            inside = np.ones(len(X), dtype=bool)
            for a, b in edges:
                ax, ay = float(a[0]), float(a[1])
                bx, by = float(b[0]), float(b[1])
                crossv = (bx - ax) * (X[:, 1] - ay) - (by - ay) * (X[:, 0] - ax)
                inside &= crossv >= -1e-12
            best[inside] = 0.0
        return best
    raise TypeError("unknown piece kind")


def dists_to_union(points, U: FaceUnion) -> np.ndarray:
    if U.is_empty:
        raise EmptySetError("distance to an empty union")
    X = np.asarray(points, dtype=float)
    best = np.full(len(X), np.inf)
    for piece in U.pieces:
        best = np.minimum(best, dists_to_piece(X, piece))
    return best


def hausdorff_cloud(U: FaceUnion, cloud, res=0.01):
    """Directed Hausdorff distances (sup_U_to_cloud, sup_cloud_to_U).

    The union side is evaluated on a deterministic surface discretization at
    the given resolution. Raises EmptySetError on empty input.
    """
    pts = np.asarray(cloud, dtype=float)
    if U.is_empty or len(pts) == 0:
        raise EmptySetError("hausdorff between empty sets")
    from scipy.spatial import cKDTree
    disc = np.asarray(discretize_union(U, res), dtype=float)
    tree = cKDTree(pts)
    d_u_to_p = float(np.max(tree.query(disc)[0]))
    d_p_to_u = float(np.max(dists_to_union(pts, U)))
    return d_u_to_p, d_p_to_u


def piece_contains(A, B, tol=None) -> bool:
    """Conservative containment test B subset of A (False when uncertain)."""
    if isinstance(B, Polytope):
        return all(contains_point(A, v, tol) for v in B.vertices) \
            if isinstance(A, (Polytope, Ball)) else (
                B.is_point and contains_point(A, B.vertices[0], tol))
    if isinstance(B, Ball):
        if isinstance(A, Ball):
            gap = float(A.radius) - float(B.radius) - norm(vsub(B.center, A.center))
            return gap >= -(tol or 0)
        return False
    if isinstance(B, Arc):
        if isinstance(A, Arc):
            t = tol if tol is not None else 1e-9
            if norm(vsub(A.center, B.center)) > t or abs(A.radius - B.radius) > t:
                return False
            if A.full_circle:
                return True
            ang_t = t / max(A.radius, 1e-12)
            return (A.contains_angle(B.theta0, ang_t) and A.contains_angle(B.theta1, ang_t)
                    and A.contains_angle((B.theta0 + B.theta1) / 2, ang_t))
        if isinstance(A, Ball):
            # whole supporting circle inside the disk suffices
            gap = float(A.radius) - B.radius - norm(vsub(B.center, A.center))
            return gap >= -(tol if tol is not None else 1e-9)
        return False
    return False


def normalize_union(pieces) -> FaceUnion:
    """Drop empty and dominated pieces, deduplicate, deterministic order."""
    live = [p for p in pieces if p is not None]
    # dedupe exact representation first
    seen = []
    for p in live:
        if not any(_same_piece(p, q) for q in seen):
            seen.append(p)
    kept = []
    for i, p in enumerate(seen):
        dominated = False
        for j, q in enumerate(seen):
            if i == j:
                continue
            if piece_contains(q, p) and not (piece_contains(p, q) and j > i):
                dominated = True
                break
        if not dominated:
            kept.append(p)
    return FaceUnion(tuple(sorted(kept, key=_piece_sort_key)))


def _same_piece(p, q) -> bool:
    if type(p) is not type(q):
        return False
    if isinstance(p, Polytope):
        return p.vertex_set() == q.vertex_set()
    if isinstance(p, Ball):
        return p.center == q.center and p.radius == q.radius
    if isinstance(p, Arc):
        return (p.center == q.center and p.radius == q.radius
                and abs(p.theta0 - q.theta0) < 1e-12 and abs(p.theta1 - q.theta1) < 1e-12
                and p.closed0 == q.closed0 and p.closed1 == q.closed1)
    return False


def _piece_sort_key(p):
    if isinstance(p, Polytope):
        return (0, tuple(sorted(tuple(float(c) for c in v) for v in p.vertices)))
    if isinstance(p, Ball):
        return (1, tuple(float(c) for c in p.center), float(p.radius))
    return (2, tuple(p.center), p.radius, p.theta0, p.theta1)


def _collinear(a, b, c) -> bool:
    return _cross2(a, b, c) == 0


def _segment_param(seg_a, seg_b, q):
    """Parameter t with q = a + t (b - a), or None if q is off the line."""
    d = vsub(seg_b, seg_a)
    r = vsub(q, seg_a)
    if d[0] * r[1] - d[1] * r[0] != 0:
        return None
    den = norm_sq(d)
    return dot(r, d) / den


def union_equal_exact(A: FaceUnion, B: FaceUnion):
    """Set equality for unions of rational points and segments (exact).

    Returns (equal, witness) where witness names an uncovered piece region.
    """
    for U, V, label in ((A, B, "left"), (B, A, "right")):
        for piece in U.pieces:
            if not isinstance(piece, Polytope) or len(piece.vertices) > 2:
                raise ValueError("exact union comparison handles points and segments")
            if piece.is_point:
                v = piece.vertices[0]
                if not any(contains_point(q, v, 0) for q in V.pieces):
                    return False, (label, piece)
            else:
                a, b = piece.vertices
                intervals = []
                for q in V.pieces:
                    if not isinstance(q, Polytope):
                        continue
                    if q.is_point:
                        t = _segment_param(a, b, q.vertices[0])
                        if t is not None and 0 <= t <= 1:
                            intervals.append((t, t))
                    else:
                        c, d = q.vertices
                        if _collinear(a, b, c) and _collinear(a, b, d):
                            t1 = _segment_param(a, b, c)
                            t2 = _segment_param(a, b, d)
                            lo, hi = min(t1, t2), max(t1, t2)
                            lo = max(lo, Fraction(0) if is_rational(lo) else 0.0)
                            hi = min(hi, Fraction(1) if is_rational(hi) else 1.0)
                            if lo <= hi:
                                intervals.append((lo, hi))
                intervals.sort()
                covered_to = None
                for lo, hi in intervals:
                    if covered_to is None:
                        if lo > 0:
                            return False, (label, piece)
                        covered_to = hi
                    elif lo <= covered_to:
                        covered_to = max(covered_to, hi)
                    else:
                        return False, (label, piece)
                if covered_to is None or covered_to < 1:
                    return False, (label, piece)
    return True, None


def union_equal_sampled(A: FaceUnion, B: FaceUnion, tol=1e-9, res=1e-3):
    """Symmetric discretized set comparison; returns max one-sided deviation."""
    if A.is_empty and B.is_empty:
        return True, 0.0
    if A.is_empty or B.is_empty:
        return False, math.inf
    da = float(np.max(dists_to_union(np.asarray(discretize_union(A, res)), B)))
    db = float(np.max(dists_to_union(np.asarray(discretize_union(B, res)), A)))
    dev = max(da, db)
    return dev <= tol + res, dev
