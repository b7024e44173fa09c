"""Small deterministic LP kernel.

Two-phase dense simplex with Bland's rule, exact when fed rational data.
Provides strict-inequality feasibility for index-set systems (rows
<g_j, d> = 1 for j in the chosen subset, < 1 outside it), minimum-norm point
over a polytope by exhaustive face enumeration, and convex-hull membership.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Sequence

from .exact import (affinely_independent, dot, is_rational, norm_sq,
                    project_affine)

FLOAT_SLACK = 1e-8    # strict feasibility threshold in float mode
_PIVOT_TOL = 1e-11
_COST_TOL = 1e-9
_MAX_PIVOTS = 20000


@dataclass(frozen=True)
class StrictSystem:
    """Rows <g,d> = 1 over `equalities`, rows <g,d> < 1 over `stricts`."""
    equalities: tuple
    stricts: tuple

    def __post_init__(self):
        if not self.equalities:
            raise ValueError("strict system needs at least one equality row")
        n = len(self.equalities[0])
        for g in tuple(self.equalities) + tuple(self.stricts):
            if len(g) != n:
                raise ValueError("row dimension mismatch")


@dataclass(frozen=True)
class Infeasible:
    """Motzkin-type certificate: y_strict >= 0 componentwise,
    sum_j y_j g_j = 0, and either sum_j y_j < 0, or sum_j y_j = 0 with a
    strictly positive strict part."""
    y_eq: tuple
    y_strict: tuple


def _exact_data(*arrays) -> bool:
    return all(is_rational(x) for arr in arrays for row in arr for x in row)


class _Simplex:
    """Maximize c.z subject to A z = b, z >= 0 (dense two-phase, Bland)."""

    def __init__(self, A, b, c):
        self.exact = _exact_data(A, [b], [c])
        cast = Fraction if self.exact else float
        self.m0 = len(A)            # original row count
        self.n0 = len(c)            # structural column count
        self.T = [[cast(x) for x in row] for row in A]
        self.rhs = [cast(x) for x in b]
        self.c = [cast(x) for x in c]
        self.zero = cast(0)
        self.signs = [1] * self.m0
        for i in range(self.m0):
            if self.rhs[i] < 0:
                self.T[i] = [-x for x in self.T[i]]
                self.rhs[i] = -self.rhs[i]
                self.signs[i] = -1
        self.m = self.m0
        self.tol = self.zero if self.exact else _PIVOT_TOL
        self.ctol = self.zero if self.exact else _COST_TOL

    def _pivot(self, row, col):
        T, rhs = self.T, self.rhs
        p = T[row][col]
        T[row] = [x / p for x in T[row]]
        rhs[row] = rhs[row] / p
        for r in range(self.m):
            if r != row and T[r][col] != 0:
                f = T[r][col]
                T[r] = [x - f * y for x, y in zip(T[r], T[row])]
                rhs[r] = rhs[r] - f * rhs[row]
        self.basis[row] = col

    def _run(self, cost, ncols):
        for _ in range(_MAX_PIVOTS):
            cb = [cost[j] for j in self.basis]
            enter = -1
            for j in range(ncols):
                if j in self.basis:
                    continue
                red = cost[j] - sum(cb[i] * self.T[i][j] for i in range(self.m))
                if red > self.ctol:
                    enter = j
                    break           # Bland: first improving index
            if enter < 0:
                return True
            leave, best = -1, None
            for r in range(self.m):
                if self.T[r][enter] > self.tol:
                    ratio = self.rhs[r] / self.T[r][enter]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[r] < self.basis[leave]):
                        leave, best = r, ratio
            if leave < 0:
                return False        # unbounded
            self._pivot(leave, enter)
        raise RuntimeError("simplex pivot cap exceeded")

    def _duals(self, cost):
        """y = c_B B^-1 read off the artificial columns, in original row
        order and with the original row signs."""
        cb = [cost[self.basis[r]] for r in range(self.m)]
        y = []
        for j in range(self.m0):
            col = self.n0 + j
            yj = sum(cb[r] * self.T[r][col] for r in range(self.m))
            y.append(yj * self.signs[j])
        return y

    def solve(self):
        """Returns (status, x, value, y).

        status 'optimal': x solves the LP, y are the row duals.
        status 'infeasible': y is a Farkas vector with y.A <= 0 (on every
        structural column) and y.b > 0, both in the original row data.
        status 'unbounded': everything else None.
        """
        n, m = self.n0, self.m0
        for i in range(self.m):
            self.T[i].extend(self.zero + (1 if i == j else 0) for j in range(m))
        self.basis = list(range(n, n + m))
        cost1 = [self.zero] * n + [self.zero - 1] * m
        self._run(cost1, n + m)
        val1 = sum(cost1[self.basis[i]] * self.rhs[i] for i in range(self.m))
        if val1 < (self.zero if self.exact else -1e-9):
            return "infeasible", None, None, self._duals(cost1)
        drop = []
        for r in range(self.m):
            if self.basis[r] >= n:
                piv = -1
                for j in range(n):
                    if abs(self.T[r][j]) > self.tol:
                        piv = j
                        break
                if piv >= 0:
                    self._pivot(r, piv)
                else:
                    drop.append(r)  # redundant row, all-zero in structurals
        if drop:
            keep = [r for r in range(self.m) if r not in drop]
            self.T = [self.T[r] for r in keep]
            self.rhs = [self.rhs[r] for r in keep]
            self.basis = [self.basis[r] for r in keep]
            self.m = len(keep)
        cost2 = list(self.c) + [self.zero] * m
        if not self._run(cost2, n):
            return "unbounded", None, None, None
        x = [self.zero] * n
        for r in range(self.m):
            if self.basis[r] < n:
                x[self.basis[r]] = self.rhs[r]
        value = sum(self.c[j] * x[j] for j in range(n))
        return "optimal", x, value, self._duals(cost2)


def simplex_max(A, b, c):
    """Maximize c.z st A z = b, z >= 0. Returns (status, x, value, y)."""
    return _Simplex(A, b, c).solve()


def strict_feasible(system: StrictSystem, float_threshold: float = FLOAT_SLACK):
    """Decide the strict system by maximizing the slack t (capped at 1).

    Feasible iff the optimal t is positive (exactly in exact mode, above
    `float_threshold` in float mode). Returns a certificate direction d, or an
    Infeasible record whose dual vector replays the inconsistency.
    """
    eqs = [tuple(g) for g in system.equalities]
    sts = [tuple(g) for g in system.stricts]
    n = len(eqs[0])
    exact = _exact_data(eqs, sts)
    one = Fraction(1) if exact else 1.0
    zero = one - one
    nd, ns = len(eqs), len(sts)
    # variables: u(n), w(n), s(ns), t+, t-, s_cap; constraints in row order
    # D rows, strict rows, cap row. Strict rows read g.(u-w) + s + t = 1.
    ncols = 2 * n + ns + 3
    A, b = [], []
    for g in eqs:
        A.append(list(g) + [-x for x in g] + [zero] * (ns + 3))
        b.append(one)
    for k, g in enumerate(sts):
        row = list(g) + [-x for x in g] + [zero] * (ns + 3)
        row[2 * n + k] = one
        row[2 * n + ns] = one
        row[2 * n + ns + 1] = -one
        A.append(row)
        b.append(one)
    cap = [zero] * ncols
    cap[2 * n + ns] = one
    cap[2 * n + ns + 1] = -one
    cap[2 * n + ns + 2] = one
    A.append(cap)
    b.append(one)
    c = [zero] * ncols
    c[2 * n + ns] = one
    c[2 * n + ns + 1] = -one
    status, x, value, y = simplex_max(A, b, c)
    if status == "unbounded":
        raise RuntimeError("slack LP unbounded despite cap row")
    if status == "infeasible":
        # phase-1 duals of a maximization satisfy y.A >= 0 and y.b < 0,
        # which is already the Motzkin shape after dropping the cap row
        return Infeasible(y_eq=tuple(y[i] for i in range(nd)),
                          y_strict=tuple(y[nd + i] for i in range(ns)))
    threshold = zero if exact else float_threshold
    if value > threshold:
        return tuple(x[k] - x[n + k] for k in range(n))
    return Infeasible(y_eq=tuple(y[i] for i in range(nd)),
                      y_strict=tuple(y[nd + i] for i in range(ns)))


def verify_certificate(system: StrictSystem, cert, tol=0) -> bool:
    """Replay an Infeasible certificate against its system."""
    if not isinstance(cert, Infeasible):
        return False
    rows = list(system.equalities) + list(system.stricts)
    ys = list(cert.y_eq) + list(cert.y_strict)
    if len(rows) != len(ys):
        return False
    n = len(rows[0])
    comb = [sum(y * g[k] for y, g in zip(ys, rows)) for k in range(n)]
    if any(abs(x) > tol for x in comb):
        return False
    if any(y < -tol for y in cert.y_strict):
        return False
    total = sum(ys)
    if total < -tol:
        return True
    return abs(total) <= tol and sum(cert.y_strict) > tol


def verify_direction(system: StrictSystem, d, tol=0) -> bool:
    """Replay a feasibility certificate d against its system."""
    for g in system.equalities:
        if abs(dot(g, d) - 1) > tol:
            return False
    for g in system.stricts:
        if not dot(g, d) < 1:
            return False
    return True


def min_norm_point(vertices: Sequence[Sequence]):
    """Nearest point of conv(vertices) to the origin.

    Exhaustive enumeration of affinely independent vertex subsets of size up
    to n+1; by Caratheodory the optimal face's spanning simplex is among them.
    Returns (point, norm, norm_squared) with norm a float and norm_squared in
    the input arithmetic.
    """
    verts = [tuple(v) for v in vertices]
    if not verts:
        raise ValueError("empty vertex list")
    n = len(verts[0])
    exact = _exact_data(verts)
    tol = 0 if exact else 1e-9
    origin = tuple(x - x for x in verts[0])
    best_pt, best_sq = None, None
    for size in range(1, min(len(verts), n + 1) + 1):
        for sub in itertools.combinations(verts, size):
            if not affinely_independent(sub):
                continue
            pt, lam = project_affine(sub, origin)
            if any(l < -tol for l in lam):
                continue
            sq = norm_sq(pt)
            if best_sq is None or sq < best_sq:
                best_pt, best_sq = pt, sq
    return best_pt, sqrt(float(best_sq)), best_sq


def point_in_hull(x, vertices, tol=0) -> bool:
    """Convex-combination membership test, decided by a phase-1 LP."""
    verts = [tuple(v) for v in vertices]
    if not verts:
        return False
    n = len(verts[0])
    if not _exact_data(verts, [tuple(x)]):
        verts = [tuple(float(c) for c in v) for v in verts]
        x = tuple(float(c) for c in x)
    m = len(verts)
    if tol:
        # lambda(m) plus coordinate slack pairs; maximize minus total slack
        A = []
        for k in range(n):
            A.append([verts[j][k] for j in range(m)]
                     + [1 if i == k else 0 for i in range(n)]
                     + [-1 if i == k else 0 for i in range(n)])
        A.append([1] * m + [0] * (2 * n))
        b = list(x) + [1]
        c = [0] * m + [-1] * (2 * n)
        status, z, value, _ = simplex_max(A, b, c)
        return status == "optimal" and -value <= tol * max(1, n)
    A = [[verts[j][k] for j in range(m)] for k in range(n)]
    A.append([1] * m)
    b = list(x) + [1]
    status, _, _, _ = simplex_max(A, b, [0] * m)
    return status == "optimal"
