"""Min-max structured functions: min over components of max over pieces.

Piece kinds: affine <a,x>+b, quadratic x'Qx + <a,x> + b, and the ball
support term <c,x> + r|x| (a single-piece component). Values and gradients
stay rational whenever the data and the evaluation point are rational.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry
from .exact import dot, is_rational, norm_sq, vadd, vscale
from .geometry import Ball, Polytope, TAU_ACT, point, scale_tol


@dataclass(frozen=True)
class Affine:
    a: tuple
    b: object

    def value(self, x):
        return dot(self.a, x) + self.b

    def gradient(self, x):
        return self.a


@dataclass(frozen=True)
class Quadratic:
    Q: tuple          # rows, symmetric
    a: tuple
    b: object

    def value(self, x):
        qx = tuple(dot(row, x) for row in self.Q)
        return dot(x, qx) + dot(self.a, x) + self.b

    def gradient(self, x):
        qx = tuple(dot(row, x) for row in self.Q)
        return vadd(vscale(2, qx), self.a)


@dataclass(frozen=True)
class BallSupport:
    center: tuple
    radius: object

    def value(self, x):
        return float(dot(self.center, x)) + float(self.radius) * geometry.norm(x)

    def gradient(self, x):
        # valid away from the kink at the origin
        nx = geometry.norm(x)
        if nx == 0:
            raise ValueError("ball support term is nonsmooth at the origin")
        f = float(self.radius) / nx
        return tuple(float(c) + f * float(xi) for c, xi in zip(self.center, x))


@dataclass(frozen=True)
class Component:
    kind: str                 # "max_affine" | "max_quadratic" | "ball_support"
    pieces: tuple

    def __post_init__(self):
        if self.kind == "ball_support" and len(self.pieces) != 1:
            raise ValueError("ball support must be a single-piece component")
        if not self.pieces:
            raise ValueError("component needs at least one piece")

    def value(self, x):
        return max(p.value(x) for p in self.pieces)


@dataclass(frozen=True)
class MinMaxFunction:
    dim: int
    basepoint: tuple
    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("need at least one component")
        if len(self.basepoint) != self.dim:
            raise ValueError("basepoint dimension mismatch")

    @property
    def exact(self) -> bool:
        if not all(is_rational(c) for c in self.basepoint):
            return False
        for comp in self.components:
            for p in comp.pieces:
                if isinstance(p, Affine):
                    ok = all(is_rational(v) for v in p.a) and is_rational(p.b)
                elif isinstance(p, Quadratic):
                    ok = (all(is_rational(v) for row in p.Q for v in row)
                          and all(is_rational(v) for v in p.a) and is_rational(p.b))
                else:
                    ok = all(is_rational(v) for v in p.center) and is_rational(p.radius)
                if not ok:
                    return False
        return True

    @property
    def has_ball(self) -> bool:
        return any(c.kind == "ball_support" for c in self.components)

    @property
    def all_affine(self) -> bool:
        return all(c.kind == "max_affine" for c in self.components)


def evaluate(fn: MinMaxFunction, x):
    return min(comp.value(x) for comp in fn.components)


def component_values(fn: MinMaxFunction, x):
    return [comp.value(x) for comp in fn.components]


def _activity_tol(values, tol):
    if tol is not None:
        return tol
    if all(is_rational(v) for v in values):
        return 0
    return scale_tol(values, TAU_ACT)


def active_components(fn: MinMaxFunction, x, tol=None):
    """Indices of components attaining the min at x, within tolerance."""
    vals = component_values(fn, x)
    fval = min(vals)
    t = _activity_tol(vals, tol)
    return [i for i, v in enumerate(vals) if v - fval <= t]


def active_pieces(comp: Component, x, tol=None):
    vals = [p.value(x) for p in comp.pieces]
    top = max(vals)
    t = _activity_tol(vals, tol)
    return [j for j, v in enumerate(vals) if top - v <= t]


def _is_origin(x) -> bool:
    return all(float(v) == 0.0 for v in x)


def component_subdifferential(fn: MinMaxFunction, i: int, x, tol=None):
    """Subdifferential of component i at x as a convex piece.

    Max components give the hull of active-piece gradients. The ball support
    term gives the full ball at its kink (the origin) and a boundary point
    elsewhere.
    """
    comp = fn.components[i]
    if comp.kind == "ball_support":
        term = comp.pieces[0]
        if _is_origin(x):
            return Ball(term.center, term.radius)
        return point(term.gradient(x))
    act = active_pieces(comp, x, tol)
    grads = [comp.pieces[j].gradient(x) for j in act]
    return Polytope(tuple(grads))


def directional_derivative(fn: MinMaxFunction, x, p, tol=None):
    """One-sided directional derivative: min over active components of the
    support value of that component's subdifferential."""
    idx = active_components(fn, x, tol)
    return min(geometry.support_value(component_subdifferential(fn, i, x, tol), p)
               for i in idx)


def min_active_set(fn: MinMaxFunction, x, p, tol=None):
    """Active components that also attain the directional derivative at p."""
    idx = active_components(fn, x, tol)
    sup = {i: geometry.support_value(component_subdifferential(fn, i, x, tol), p)
           for i in idx}
    target = min(sup.values())
    t = _activity_tol(list(sup.values()), tol)
    return [i for i in idx if sup[i] - target <= t]


def _intersect_many(pieces, tol=None):
    """Fold intersection over convex pieces; None means empty."""
    uniq = []
    for p in pieces:
        if not any(geometry._same_piece(p, q) for q in uniq):
            uniq.append(p)
    # points first so ball pairs reduce through memberships when possible
    uniq.sort(key=lambda p: (0 if isinstance(p, Polytope) and p.is_point else
                             1 if isinstance(p, Polytope) else 2))
    cur = uniq[0]
    for nxt in uniq[1:]:
        cur = geometry.intersect(cur, nxt, tol)
        if cur is None:
            return None
    return cur


def frechet_subdifferential(fn: MinMaxFunction, x, tol=None):
    """Regular subdifferential at x: intersection over active components of
    their subdifferentials. Returns a convex piece or None when empty."""
    idx = active_components(fn, x, tol)
    pieces = [component_subdifferential(fn, i, x, tol) for i in idx]
    return _intersect_many(pieces, tol)


# float evaluation caches, keyed by the (hashable) function object

@functools.lru_cache(maxsize=16)
def _float_tables(fn: MinMaxFunction):
    tables = []
    for comp in fn.components:
        if comp.kind == "ball_support":
            term = comp.pieces[0]
            tables.append(("ball",
                           np.array([float(v) for v in term.center]),
                           float(term.radius)))
        else:
            rows = []
            for p in comp.pieces:
                if isinstance(p, Affine):
                    Q = np.zeros((fn.dim, fn.dim))
                    a = np.array([float(v) for v in p.a])
                    b = float(p.b)
                else:
                    Q = np.array([[float(v) for v in row] for row in p.Q])
                    a = np.array([float(v) for v in p.a])
                    b = float(p.b)
                rows.append((Q, a, b))
            tables.append(("max", rows))
    return tables


def component_values_batch(fn: MinMaxFunction, X: np.ndarray) -> np.ndarray:
    """(m, n_components) float matrix of component values."""
    X = np.asarray(X, dtype=float)
    cols = []
    for entry in _float_tables(fn):
        if entry[0] == "ball":
            _, c, r = entry
            cols.append(X @ c + r * np.linalg.norm(X, axis=1))
        else:
            piece_vals = [np.einsum("ij,jk,ik->i", X, Q, X) + X @ a + b
                          for Q, a, b in entry[1]]
            cols.append(np.max(np.stack(piece_vals, axis=0), axis=0))
    return np.stack(cols, axis=1)


def evaluate_batch(fn: MinMaxFunction, X: np.ndarray) -> np.ndarray:
    return np.min(component_values_batch(fn, X), axis=1)
