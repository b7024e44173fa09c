"""Error bound lower bounds: the distance from zero to an outer-limit union.

The distance from the origin to the outer limit of subdifferentials bounds
the error bound modulus from below. An empty union makes that distance an
infimum over nothing; it is reported with an explicit marker object rather
than a sentinel float so the degenerate case cannot be mistaken for zero.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from . import geometry

DEFAULT_SLACK = 0.02


class _PlusInfinity:
    """Tagged marker for the empty-union case; a singleton."""
    __slots__ = ()

    def __repr__(self):
        return "PLUS_INFINITY"


PLUS_INFINITY = _PlusInfinity()


def is_infinite(value) -> bool:
    return value is PLUS_INFINITY


@dataclass(frozen=True)
class ErrorBoundReport:
    lower_bound: object           # float >= 0, or PLUS_INFINITY
    attaining_piece: Optional[int]
    attaining_point: Optional[tuple]
    empirical_estimate: Optional[float] = None
    inequality_satisfied: Optional[bool] = None


def lower_bound_from_outer(U: geometry.FaceUnion) -> ErrorBoundReport:
    """Distance from the origin to the union, with the attaining piece.

    Expects the closure already applied (the distance to a set equals the
    distance to its closure, so this only matters for reporting the
    attaining point). Empty unions give the PLUS_INFINITY marker.
    """
    if U.is_empty:
        return ErrorBoundReport(PLUS_INFINITY, None, None)
    dim = U.pieces[0].dim
    origin = (0.0,) * dim
    idx, pt, dist = geometry.project_union(U, origin)
    return ErrorBoundReport(float(dist), idx,
                            tuple(float(c) for c in pt))


def attach_empirical(report: ErrorBoundReport, estimate: Optional[float],
                     slack: float = DEFAULT_SLACK) -> ErrorBoundReport:
    """Record a sampled modulus estimate and whether it clears the bound.

    The verdict is None when either side is unavailable: an undefined
    estimate, or the infinite marker (nothing to compare against).
    """
    if estimate is None or is_infinite(report.lower_bound):
        verdict = None
    else:
        verdict = bool(estimate >= report.lower_bound - slack)
    return replace(report, empirical_estimate=estimate,
                   inequality_satisfied=verdict)
