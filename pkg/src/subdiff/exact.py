"""Rational scalar helpers and small exact linear algebra.

Scalars throughout the package are either fractions.Fraction (exact mode) or
float (float mode). The helpers here are generic over both; exactness is
preserved whenever every input is a Fraction or int.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


def parse_scalar(value, exact: bool):
    """Parse a JSON scalar: int, float, or a "num/den" rational string."""
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, bool):
        raise ValueError("boolean is not a scalar")
    if isinstance(value, int):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if exact:
            raise ValueError("float %r not allowed in exact mode, use 'num/den'" % value)
        return value
    raise ValueError("not a scalar: %r" % (value,))


def format_scalar(x):
    """Serialize a scalar: Fractions as "num/den" (or int), floats as-is."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, int):
        return x
    return float(x)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum(a * b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def norm_sq(u):
    return sum(a * a for a in u)


def gauss_solve(rows, rhs) -> Optional[list]:
    """Solve A x = b by fraction-free-ish Gaussian elimination.

    rows: list of coefficient lists, rhs: list of right-hand sides. Returns
    one solution (free variables set to 0) or None if inconsistent. Exact when
    the inputs are rational.
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    a = [list(map(Fraction, r)) if all(is_rational(x) for x in r) else list(map(float, r))
         for r in rows]
    b = list(rhs)
    exact = all(all(is_rational(x) for x in r) for r in rows) and all(is_rational(x) for x in rhs)
    if exact:
        b = [Fraction(x) for x in b]
    else:
        a = [[float(x) for x in r] for r in rows]
        b = [float(x) for x in b]
    piv_cols = []
    row = 0
    for col in range(n):
        # partial pivot; exact mode only needs a nonzero entry
        best = None
        for r in range(row, m):
            if a[r][col] != 0 and (best is None or abs(a[r][col]) > abs(a[best][col])):
                best = r
                if exact:
                    break
        if best is None:
            continue
        a[row], a[best] = a[best], a[row]
        b[row], b[best] = b[best], b[row]
        p = a[row][col]
        for r in range(m):
            if r != row and a[r][col] != 0:
                f = a[r][col] / p
                for c in range(col, n):
                    a[r][c] -= f * a[row][c]
                b[r] -= f * b[row]
        piv_cols.append(col)
        row += 1
        if row == m:
            break
    tol = 0 if exact else 1e-12 * max(1.0, max((abs(x) for r in rows for x in r), default=1.0))
    for r in range(row, m):
        if abs(b[r]) > tol:
            return None
    x = [Fraction(0) if exact else 0.0] * n
    for i, col in enumerate(piv_cols):
        x[col] = b[i] / a[i][col]
    return x


def matrix_rank(rows) -> int:
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    exact = all(all(is_rational(x) for x in r) for r in rows)
    a = [[Fraction(x) for x in r] for r in rows] if exact else [[float(x) for x in r] for r in rows]
    tol = 0 if exact else 1e-12 * max(1.0, max((abs(x) for r in rows for x in r), default=1.0))
    rank = 0
    row = 0
    for col in range(n):
        best = None
        for r in range(row, m):
            if abs(a[r][col]) > tol and (best is None or abs(a[r][col]) > abs(a[best][col])):
                best = r
                if exact:
                    break
        if best is None:
            continue
        a[row], a[best] = a[best], a[row]
        p = a[row][col]
        for r in range(row + 1, m):
            if abs(a[r][col]) > tol:
                f = a[r][col] / p
                for c in range(col, n):
                    a[r][c] -= f * a[row][c]
        row += 1
        rank += 1
        if row == m:
            break
    return rank


def affinely_independent(points) -> bool:
    """True if the points span an affine subspace of dimension len(points)-1."""
    if len(points) <= 1:
        return True
    base = points[0]
    rows = [list(vsub(p, base)) for p in points[1:]]
    return matrix_rank(rows) == len(points) - 1


def project_affine(points, x):
    """Project x onto the affine hull of affinely independent points.

    Returns (point, barycentric coefficients). Exact for rational inputs.
    """
    base = points[0]
    if len(points) == 1:
        one = Fraction(1) if is_rational(base[0]) and is_rational(x[0]) else 1.0
        return tuple(base), [one]
    dirs = [vsub(p, base) for p in points[1:]]
    gram = [[dot(di, dj) for dj in dirs] for di in dirs]
    rhs = [dot(vsub(x, base), di) for di in dirs]
    sol = gauss_solve(gram, rhs)
    if sol is None:
        raise ValueError("degenerate affine hull")
    pt = list(base)
    for c, d in zip(sol, dirs):
        for k in range(len(pt)):
            pt[k] = pt[k] + c * d[k]
    lam0 = (Fraction(1) if all(is_rational(c) for c in sol) else 1.0) - sum(sol)
    return tuple(pt), [lam0] + list(sol)
