"""Shell sampling of subgradients at nearby points with strictly larger
value, distances to sublevel sets, and the empirical error bound modulus.

Sampling records the subdifferential at each hit. Samples landing near a
component or piece tie are additionally snapped onto the suspected tie set
(Gauss-Newton on the value gaps) and the subdifferential attained at the
snapped point is recorded too, provided the function value there still
exceeds the base value; that is what lets segment-shaped limits show up in
a finite cloud without admitting faces the limit never attains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry, model
from .exact import dot, gauss_solve, is_rational, norm_sq, vsub
from .geometry import EmptySetError, Polytope

DEFAULT_RADII = (1e-1, 1e-2, 1e-3, 1e-4)
DEFAULT_DIRS = 2000
DEFAULT_SEED = 42
# samples within this fraction of the shell radius of a tie get snapped
# onto the tie set; gradients drift by O(radius) inside the band
NEAR_TIE_FRACTION = 0.05


@dataclass(frozen=True)
class OracleCloud:
    points: tuple          # of (subgradient, at_radius, direction)
    radii: tuple
    skipped_empty_subdiff: int

    def array(self, radius: Optional[float] = None) -> np.ndarray:
        if radius is None:
            radius = min(self.radii)
        sel = [p for p, r, _ in self.points if r == radius]
        if not sel:
            return np.zeros((0, 0))
        return np.asarray(sel, dtype=float)

    def limit_points(self) -> np.ndarray:
        return self.array(min(self.radii))


@dataclass(frozen=True)
class EmpiricalReport:
    radii: tuple
    per_radius_min_ratio: tuple   # float or None per radius
    n_samples: tuple
    estimate: Optional[float]     # None when the smallest shell had no hits
    monotone: Optional[bool]


def _shell_directions(rng, k, n):
    raw = rng.normal(size=(k, n))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return raw / norms


def _record_piece(piece, out, res=0.01):
    if isinstance(piece, Polytope) and piece.is_point:
        out.append(tuple(float(c) for c in piece.vertices[0]))
    else:
        out.extend(geometry.discretize_piece(piece, res=res))


def _validate_radii(radii):
    radii = tuple(float(r) for r in radii)
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    return radii


def _piece_value_grad(comp, j, y):
    """Float value and gradient of one piece at y; None at a ball kink."""
    term = comp.pieces[j]
    if comp.kind == "ball_support":
        nrm = float(np.linalg.norm(y))
        if nrm < 1e-300:
            return None
        c = np.asarray([float(v) for v in term.center])
        rho = float(term.radius)
        return float(c @ y) + rho * nrm, c + rho * (y / nrm)
    if isinstance(term, model.Affine):
        a = np.asarray([float(v) for v in term.a])
        return float(a @ y) + float(term.b), a
    Q = np.asarray([[float(v) for v in row] for row in term.Q])
    a = np.asarray([float(v) for v in term.a])
    return float(y @ Q @ y + a @ y) + float(term.b), (Q + Q.T) @ y + a


def _snap_to_ties(fn: model.MinMaxFunction, x, tau, max_move):
    """Move a sample onto the tie set its near-active structure suggests.

    The residuals are the pairwise value gaps between near-active pieces
    (within each near component, and across the representatives of distinct
    near components). Returns the refined point, or None when there is no
    near tie or the refinement does not converge within max_move.
    """
    near = model.active_components(fn, x, tau)
    refs = []
    for i in near:
        comp = fn.components[i]
        if comp.kind == "ball_support":
            refs.append((i, [0]))
        else:
            refs.append((i, model.active_pieces(comp, x, tau)))
    rows = []
    for i, picks in refs:
        rows.extend(((i, picks[0]), (i, j)) for j in picks[1:])
    lead = (refs[0][0], refs[0][1][0])
    rows.extend((lead, (i, picks[0])) for i, picks in refs[1:])
    if not rows:
        return None
    x0 = np.asarray([float(c) for c in x])
    y = x0.copy()
    for _ in range(6):
        resid = np.empty(len(rows))
        jac = np.empty((len(rows), len(y)))
        scale = 1.0
        for k, (pref, qref) in enumerate(rows):
            pv = _piece_value_grad(fn.components[pref[0]], pref[1], y)
            qv = _piece_value_grad(fn.components[qref[0]], qref[1], y)
            if pv is None or qv is None:
                return None
            resid[k] = qv[0] - pv[0]
            jac[k] = qv[1] - pv[1]
            scale = max(scale, abs(pv[0]), abs(qv[0]))
        if np.abs(resid).max() <= 1e-12 * scale:
            if np.linalg.norm(y - x0) > max_move:
                return None
            return tuple(float(v) for v in y)
        step, *_ = np.linalg.lstsq(jac, -resid, rcond=None)
        y = y + step
    return None


def sample_limsup(fn: model.MinMaxFunction, xbar, radii=DEFAULT_RADII,
                  dirs_per_radius=DEFAULT_DIRS, seed=DEFAULT_SEED,
                  extra_directions=None) -> OracleCloud:
    """Sample shells around the basepoint, keep points with f(x) > f(xbar),
    and collect their subdifferentials. extra_directions, if given, is an
    iterable of unit vectors appended to every shell (a diagnostic hook)."""
    radii = _validate_radii(radii)
    n = fn.dim
    xb = np.asarray([float(c) for c in xbar])
    fbar = float(model.evaluate(fn, xbar))
    rng = np.random.default_rng(seed)
    points = []
    skipped = 0
    for r in radii:
        dirs = _shell_directions(rng, dirs_per_radius, n)
        if extra_directions is not None:
            dirs = np.vstack([dirs, np.asarray(extra_directions, dtype=float)])
        X = xb + r * dirs
        vals = model.evaluate_batch(fn, X)
        tau = NEAR_TIE_FRACTION * r
        for idx in np.nonzero(vals > fbar)[0]:
            x = tuple(float(c) for c in X[idx])
            q = tuple(float(c) for c in dirs[idx])
            try:
                sub = model.frechet_subdifferential(fn, x)
            except geometry.UnsupportedPair:
                continue
            found = []
            if sub is None:
                skipped += 1
            else:
                _record_piece(sub, found)
            xs = _snap_to_ties(fn, x, tau, 0.5 * r)
            if xs is not None and model.evaluate(fn, xs) > fbar + 1e-13 * r:
                try:
                    sub2 = model.frechet_subdifferential(fn, xs)
                except geometry.UnsupportedPair:
                    sub2 = None
                if sub2 is not None and (sub is None or
                                         not geometry._same_piece(sub2, sub)):
                    _record_piece(sub2, found)
            points.extend((g, r, q) for g in found)
    return OracleCloud(tuple(points), radii, skipped)


# distances to the sublevel set {y: f(y) <= f(xbar)}

def _halfplanes(comp: model.Component, level):
    rows = []
    for piece in comp.pieces:
        rows.append((tuple(piece.a), level - piece.b))
    return rows


def _dist_poly_batch(X, constraints, inf=np.inf):
    """Distance from each row of X to {y: a_j . y <= c_j for all j}."""
    k, n = X.shape
    A = np.asarray([[float(c) for c in a] for a, _ in constraints])
    C = np.asarray([float(c) for _, c in constraints])
    G = X @ A.T - C
    scale = np.maximum(1.0, np.abs(C).max() if len(C) else 1.0)
    feas_tol = 1e-12 * scale
    best = np.where(G.max(axis=1) <= feas_tol, 0.0, inf)
    m = len(constraints)
    for j in range(m):
        nj = float(A[j] @ A[j])
        if nj == 0:
            continue
        feet = X - (G[:, j] / nj)[:, None] * A[j]
        ok = (feet @ A.T - C).max(axis=1) <= feas_tol
        d = np.linalg.norm(X - feet, axis=1)
        best = np.minimum(best, np.where(ok, d, inf))
    if n == 2:
        for j in range(m):
            for k2 in range(j + 1, m):
                det = A[j, 0] * A[k2, 1] - A[j, 1] * A[k2, 0]
                if abs(det) < 1e-15:
                    continue
                v = np.asarray([(C[j] * A[k2, 1] - C[k2] * A[j, 1]) / det,
                                (A[j, 0] * C[k2] - A[k2, 0] * C[j]) / det])
                if (A @ v - C).max() <= feas_tol:
                    best = np.minimum(best, np.linalg.norm(X - v, axis=1))
    return best


def _dist_cone_batch(X, center, rho):
    """Distance to {y: <c, y> + rho * |y| <= 0} (a closed cone)."""
    c = np.asarray([float(v) for v in center])
    rho = float(rho)
    nc = float(np.linalg.norm(c))
    nx = np.linalg.norm(X, axis=1)
    if nc < rho - 1e-15:
        return nx
    u = -c / nc if nc > 0 else None
    if u is None:
        # zero center: rho |y| <= 0 forces the origin (rho > 0)
        return nx if rho > 0 else np.zeros(len(X))
    proj = X @ u
    if abs(nc - rho) <= 1e-15:
        t = np.maximum(proj, 0.0)
        return np.linalg.norm(X - t[:, None] * u, axis=1)
    beta = math.acos(max(-1.0, min(1.0, rho / nc)))
    with np.errstate(invalid="ignore"):
        ct = np.where(nx > 0, proj / np.maximum(nx, 1e-300), 1.0)
    theta = np.arccos(np.clip(ct, -1.0, 1.0))
    d = np.where(theta <= beta, 0.0,
                 np.where(theta >= beta + 0.5 * math.pi, nx,
                          nx * np.sin(theta - beta)))
    return np.where(nx == 0, 0.0, d)


def _quad_constraints(comp: model.Component, level):
    """Per piece: ("half", a, c) | ("ball", center, R) | ("ballc", center, R),
    or None when a piece is not spherical."""
    out = []
    for piece in comp.pieces:
        Q = [[float(v) for v in row] for row in piece.Q]
        n = len(Q)
        sigma = Q[0][0]
        ok = all(abs(Q[i][j] - (sigma if i == j else 0.0)) <= 1e-15
                 for i in range(n) for j in range(n))
        if not ok:
            return None
        a = [float(v) for v in piece.a]
        c = float(level - piece.b)
        if sigma == 0:
            out.append(("half", tuple(a), c))
            continue
        center = tuple(-ai / (2 * sigma) for ai in a)
        rhs = c / sigma + sum(ai * ai for ai in a) / (4 * sigma * sigma)
        if sigma > 0:
            if rhs < 0:
                return [("empty",)]
            out.append(("ball", center, math.sqrt(rhs)))
        else:
            if rhs < 0:
                # sigma < 0 flips the inequality; negative rhs means all of
                # space satisfies it
                continue
            out.append(("ballc", center, math.sqrt(rhs)))
    return out


def _dist_quad_comp_batch(X, cons):
    """Distance to the intersection described by _quad_constraints output."""
    if cons == [("empty",)]:
        return np.full(len(X), np.inf)
    halves = [(c[1], c[2]) for c in cons if c[0] == "half"]
    balls = [(c[1], c[2]) for c in cons if c[0] == "ball"]
    ballcs = [(c[1], c[2]) for c in cons if c[0] == "ballc"]
    if not cons:
        return np.zeros(len(X))
    if not balls and not ballcs:
        return _dist_poly_batch(X, halves)
    if len(balls) == 1 and not ballcs:
        bc = np.asarray([float(v) for v in balls[0][0]])
        R = float(balls[0][1])
        if not halves:
            return np.maximum(np.linalg.norm(X - bc, axis=1) - R, 0.0)
        return _dist_ball_halves_batch(X, bc, R, halves)
    if len(ballcs) == 1 and not balls and not halves:
        bc = np.asarray([float(v) for v in ballcs[0][0]])
        R = float(ballcs[0][1])
        return np.maximum(R - np.linalg.norm(X - bc, axis=1), 0.0)
    return None


def _dist_ball_halves_batch(X, bc, R, halves):
    """Distance to ball(bc, R) intersected with halfplanes, in the plane."""
    A = np.asarray([[float(v) for v in a] for a, _ in halves])
    C = np.asarray([float(c) for _, c in halves])
    feas_tol = 1e-12 * max(1.0, float(np.abs(C).max()))

    def feas_half(P):
        return (P @ A.T - C).max(axis=1) <= feas_tol

    def feas_ball(P):
        return np.linalg.norm(P - bc, axis=1) <= R + 1e-12

    best = np.full(len(X), np.inf)
    ok = feas_half(X) & feas_ball(X)
    best[ok] = 0.0
    # projection onto the sphere
    delta = X - bc
    nd = np.linalg.norm(delta, axis=1)
    safe = np.maximum(nd, 1e-300)
    Ps = bc + delta * (R / safe)[:, None]
    okS = feas_half(Ps)
    best = np.minimum(best, np.where(okS, np.abs(nd - R), np.inf))
    # projections onto each halfplane boundary
    m = len(halves)
    for j in range(m):
        nj = float(A[j] @ A[j])
        if nj == 0:
            continue
        G = X @ A[j] - C[j]
        feet = X - (G / nj)[:, None] * A[j]
        ok = feas_half(feet) & feas_ball(feet)
        best = np.minimum(best, np.where(ok, np.abs(G) / math.sqrt(nj), np.inf))
    # fixed candidate points: line/line and circle/line crossings
    fixed = []
    for j in range(m):
        for k2 in range(j + 1, m):
            det = A[j][0] * A[k2][1] - A[j][1] * A[k2][0]
            if abs(det) < 1e-15:
                continue
            vx = (C[j] * A[k2][1] - C[k2] * A[j][1]) / det
            vy = (A[j][0] * C[k2] - A[k2][0] * C[j]) / det
            fixed.append((vx, vy))
    for j in range(m):
        nj = math.sqrt(float(A[j] @ A[j]))
        if nj == 0:
            continue
        # foot of the center on the line, then offsets along the line
        g = float(bc @ A[j] - C[j])
        foot = bc - (g / (nj * nj)) * A[j]
        h2 = R * R - (g / nj) ** 2
        if h2 < 0:
            continue
        toff = math.sqrt(max(h2, 0.0)) / nj
        tang = np.asarray([-A[j][1], A[j][0]])
        fixed.append(tuple(foot + toff * tang))
        fixed.append(tuple(foot - toff * tang))
    for v in fixed:
        P = np.asarray([v])
        if feas_half(P)[0] and feas_ball(P)[0]:
            best = np.minimum(best, np.linalg.norm(X - np.asarray(v), axis=1))
    return best


def _comp_dist_batch(fn, i, level, X):
    comp = fn.components[i]
    if comp.kind == "max_affine":
        return _dist_poly_batch(X, _halfplanes(comp, level))
    if comp.kind == "ball_support":
        if float(level) != 0.0:
            return None
        b = comp.pieces[0]
        return _dist_cone_batch(X, b.center, b.radius)
    cons = _quad_constraints(comp, level)
    if cons is None:
        return None
    return _dist_quad_comp_batch(X, cons)


_GRID_CACHE = {}


def _grid_distances(fn, xbar, X):
    xb = np.asarray([float(c) for c in xbar])
    level = float(model.evaluate(fn, xbar))
    r = float(np.max(np.linalg.norm(X - xb, axis=1)))
    r = max(r, 1e-9)
    bucket = 2.0 ** math.ceil(math.log2(r))
    key = (fn, round(level, 15), bucket)
    tree = _GRID_CACHE.get(key)
    if tree is None:
        from scipy.spatial import cKDTree
        h = bucket / 128.0
        axes = [np.arange(-2 * bucket, 2 * bucket + h / 2, h) + xb[d]
                for d in range(fn.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = model.evaluate_batch(fn, pts)
        feas = pts[vals <= level + 1e-12 * max(1.0, abs(level))]
        if len(feas) == 0:
            raise EmptySetError("no sublevel points inside the search box")
        tree = cKDTree(feas)
        _GRID_CACHE[key] = tree
    d, _ = tree.query(X)
    return np.asarray(d)


def sublevel_distance_batch(fn: model.MinMaxFunction, xbar, X) -> np.ndarray:
    """Distances from the rows of X to {y: f(y) <= f(xbar)}."""
    X = np.asarray(X, dtype=float)
    level = model.evaluate(fn, xbar)
    per_comp = []
    for i in range(len(fn.components)):
        d = _comp_dist_batch(fn, i, level, X)
        if d is None:
            return _grid_distances(fn, xbar, X)
        per_comp.append(d)
    dist = np.min(np.stack(per_comp, axis=0), axis=0)
    if np.isinf(dist).any():
        raise EmptySetError("sublevel set is empty near the basepoint")
    return dist


def _sublevel_distance_exact(fn, xbar, x):
    """All-affine rational path: exact candidate enumeration per component."""
    level = model.evaluate(fn, xbar)
    n = fn.dim
    best = None
    for comp in fn.components:
        cons = [(tuple(p.a), level - p.b) for p in comp.pieces]
        cands = []
        if all(dot(a, x) <= c for a, c in cons):
            cands.append(tuple(x))
        for a, c in cons:
            na = norm_sq(a)
            if na == 0:
                continue
            g = dot(a, x) - c
            foot = tuple(xi - g * ai / na for xi, ai in zip(x, a))
            if all(dot(aa, foot) <= cc for aa, cc in cons):
                cands.append(foot)
        if n == 2:
            for j in range(len(cons)):
                for k in range(j + 1, len(cons)):
                    sol = gauss_solve([list(cons[j][0]), list(cons[k][0])],
                                      [cons[j][1], cons[k][1]])
                    if sol is None:
                        continue
                    v = tuple(sol)
                    if all(dot(aa, v) <= cc for aa, cc in cons):
                        cands.append(v)
        for v in cands:
            d2 = norm_sq(vsub(v, x))
            if best is None or d2 < best:
                best = d2
    if best is None:
        raise EmptySetError("sublevel set is empty")
    return math.sqrt(float(best))


def sublevel_distance(fn: model.MinMaxFunction, xbar, x) -> float:
    """Distance from x to the sublevel set {y: f(y) <= f(xbar)}."""
    if fn.all_affine and fn.exact and is_rational(x) and fn.dim <= 2:
        return _sublevel_distance_exact(fn, xbar, x)
    d = sublevel_distance_batch(fn, xbar,
                                np.asarray([[float(c) for c in x]]))
    return float(d[0])


def empirical_error_bound_modulus(fn: model.MinMaxFunction, xbar,
                                  radii=DEFAULT_RADII,
                                  dirs_per_radius=DEFAULT_DIRS,
                                  seed=DEFAULT_SEED) -> EmpiricalReport:
    """Per shell, the minimum of (f(x) - f(xbar)) / dist(x, sublevel set)
    over sampled x with f(x) > f(xbar); the estimate is the minimum on the
    smallest shell. Directions reproduce sample_limsup's for equal seeds."""
    radii = _validate_radii(radii)
    n = fn.dim
    xb = np.asarray([float(c) for c in xbar])
    fbar = float(model.evaluate(fn, xbar))
    rng = np.random.default_rng(seed)
    minima = []
    counts = []
    for r in radii:
        dirs = _shell_directions(rng, dirs_per_radius, n)
        X = xb + r * dirs
        vals = model.evaluate_batch(fn, X)
        mask = vals > fbar
        counts.append(int(mask.sum()))
        if not mask.any():
            minima.append(None)
            continue
        dists = sublevel_distance_batch(fn, xbar, X[mask])
        ratios = (vals[mask] - fbar) / np.maximum(dists, 1e-300)
        minima.append(float(ratios.min()))
    smallest = radii.index(min(radii))
    estimate = minima[smallest]
    seen = [m for m in minima if m is not None]
    monotone = None
    if len(seen) >= 2:
        monotone = all(a >= b - 1e-12 for a, b in zip(seen, seen[1:]))
    return EmpiricalReport(radii, tuple(minima), tuple(counts),
                           estimate, monotone)
