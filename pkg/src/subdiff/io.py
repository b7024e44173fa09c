"""Problem files and result serialization.

A problem file is JSON:

    {"dim": 2,
     "basepoint": [0, 0],
     "mode": "exact",
     "components": [
        {"kind": "max_affine",
         "pieces": [{"a": [5, 0], "b": 0}, ...]},
        {"kind": "ball_support",
         "pieces": [{"center": ["1/2", 0], "radius": 1}]},
        {"kind": "max_quadratic",
         "pieces": [{"Q": [[1, 0], [0, 1]], "a": ["1/2", "1/2"], "b": 0}]}],
     "options": {"seed": 7}}

Scalars are ints, floats, or "num/den" strings; exact mode forbids bare
floats so nothing is silently rounded. Parse failures carry the offending
field path. Serializers below keep rationals lossless and round-trip every
value they emit.
"""
from __future__ import annotations

import json
from fractions import Fraction

from . import errorbound, geometry, model, oracle, outer
from .exact import format_scalar, parse_scalar

MODES = ("exact", "float")
KINDS = ("max_affine", "max_quadratic", "ball_support")


class ParseError(ValueError):
    """Problem/result schema violation; .path names the offending field."""

    def __init__(self, path, message):
        super().__init__("%s: %s" % (path, message))
        self.path = path


def _want(obj, key, types, path):
    if key not in obj:
        raise ParseError("%s.%s" % (path, key), "missing field")
    val = obj[key]
    if types is not None and not isinstance(val, types):
        raise ParseError("%s.%s" % (path, key),
                         "expected %s, got %r" % (
                             "/".join(t.__name__ for t in types), type(val).__name__))
    return val


def _scalar(value, exact, path):
    try:
        return parse_scalar(value, exact)
    except (ValueError, ZeroDivisionError) as err:
        raise ParseError(path, str(err))


def _vector(value, exact, dim, path):
    if not isinstance(value, list) or len(value) != dim:
        raise ParseError(path, "expected a list of %d scalars" % dim)
    return tuple(_scalar(v, exact, "%s[%d]" % (path, i))
                 for i, v in enumerate(value))


def _piece(obj, kind, exact, dim, path):
    if not isinstance(obj, dict):
        raise ParseError(path, "expected an object")
    if kind == "max_affine":
        a = _vector(_want(obj, "a", (list,), path), exact, dim, path + ".a")
        b = _scalar(obj.get("b", 0), exact, path + ".b")
        return model.Affine(a, b)
    if kind == "max_quadratic":
        rows = _want(obj, "Q", (list,), path)
        if len(rows) != dim:
            raise ParseError(path + ".Q", "expected %d rows" % dim)
        Q = tuple(_vector(row, exact, dim, "%s.Q[%d]" % (path, i))
                  for i, row in enumerate(rows))
        for i in range(dim):
            for j in range(i + 1, dim):
                if Q[i][j] != Q[j][i]:
                    raise ParseError(path + ".Q", "matrix must be symmetric")
        a = _vector(_want(obj, "a", (list,), path), exact, dim, path + ".a")
        b = _scalar(obj.get("b", 0), exact, path + ".b")
        return model.Quadratic(Q, a, b)
    center = _vector(_want(obj, "center", (list,), path), exact, dim,
                     path + ".center")
    radius = _scalar(_want(obj, "radius", None, path), exact, path + ".radius")
    if radius < 0:
        raise ParseError(path + ".radius", "radius must be nonnegative")
    return model.BallSupport(center, radius)


def parse_problem(obj):
    """Dict -> (MinMaxFunction, options dict). Raises ParseError."""
    if not isinstance(obj, dict):
        raise ParseError("$", "problem file must be a JSON object")
    mode = obj.get("mode", "exact")
    if mode not in MODES:
        raise ParseError("$.mode", "expected one of %s" % (MODES,))
    exact = mode == "exact"
    dim = _want(obj, "dim", (int,), "$")
    if isinstance(dim, bool) or dim < 1:
        raise ParseError("$.dim", "dimension must be a positive integer")
    basepoint = _vector(_want(obj, "basepoint", (list,), "$"), exact, dim,
                        "$.basepoint")
    comps_obj = _want(obj, "components", (list,), "$")
    if not comps_obj:
        raise ParseError("$.components", "need at least one component")
    comps = []
    for i, cobj in enumerate(comps_obj):
        cpath = "$.components[%d]" % i
        if not isinstance(cobj, dict):
            raise ParseError(cpath, "expected an object")
        kind = _want(cobj, "kind", (str,), cpath)
        if kind not in KINDS:
            raise ParseError(cpath + ".kind", "expected one of %s" % (KINDS,))
        pieces_obj = _want(cobj, "pieces", (list,), cpath)
        if not pieces_obj:
            raise ParseError(cpath + ".pieces", "need at least one piece")
        if kind == "ball_support" and len(pieces_obj) != 1:
            raise ParseError(cpath + ".pieces",
                             "ball support takes exactly one piece")
        pieces = tuple(_piece(p, kind, exact, dim,
                              "%s.pieces[%d]" % (cpath, j))
                       for j, p in enumerate(pieces_obj))
        comps.append(model.Component(kind, pieces))
    try:
        fn = model.MinMaxFunction(dim, basepoint, tuple(comps))
    except ValueError as err:
        raise ParseError("$", str(err))
    options = obj.get("options", {})
    if not isinstance(options, dict):
        raise ParseError("$.options", "expected an object")
    return fn, options


def load_problem(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as err:
            raise ParseError("%s:%d:%d" % (path, err.lineno, err.colno),
                             err.msg)
    return parse_problem(obj)


def problem_to_json(fn: model.MinMaxFunction, options=None) -> dict:
    comps = []
    for comp in fn.components:
        pieces = []
        for p in comp.pieces:
            if isinstance(p, model.Affine):
                pieces.append({"a": [format_scalar(v) for v in p.a],
                               "b": format_scalar(p.b)})
            elif isinstance(p, model.Quadratic):
                pieces.append({"Q": [[format_scalar(v) for v in row]
                                     for row in p.Q],
                               "a": [format_scalar(v) for v in p.a],
                               "b": format_scalar(p.b)})
            else:
                pieces.append({"center": [format_scalar(v) for v in p.center],
                               "radius": format_scalar(p.radius)})
        comps.append({"kind": comp.kind, "pieces": pieces})
    out = {"dim": fn.dim,
           "basepoint": [format_scalar(v) for v in fn.basepoint],
           "mode": "exact" if fn.exact else "float",
           "components": comps}
    if options:
        out["options"] = options
    return out


# result serialization

def piece_to_json(piece) -> dict:
    if isinstance(piece, geometry.Polytope):
        return {"kind": "polytope",
                "vertices": [[format_scalar(c) for c in v]
                             for v in piece.vertices]}
    if isinstance(piece, geometry.Ball):
        return {"kind": "ball",
                "center": [format_scalar(c) for c in piece.center],
                "radius": format_scalar(piece.radius)}
    if isinstance(piece, geometry.Arc):
        return {"kind": "arc",
                "center": [float(c) for c in piece.center],
                "radius": float(piece.radius),
                "theta0": piece.theta0, "theta1": piece.theta1,
                "closed0": piece.closed0, "closed1": piece.closed1}
    raise TypeError("unknown piece kind %r" % (piece,))


def _result_scalar(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise ParseError(path, "expected a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as err:
            raise ParseError(path, str(err))
    return value


def piece_from_json(obj, path="$") -> object:
    kind = _want(obj, "kind", (str,), path)
    if kind == "polytope":
        verts = _want(obj, "vertices", (list,), path)
        return geometry.Polytope(tuple(
            tuple(_result_scalar(c, "%s.vertices[%d][%d]" % (path, i, j))
                  for j, c in enumerate(v))
            for i, v in enumerate(verts)))
    if kind == "ball":
        return geometry.Ball(
            tuple(_result_scalar(c, path + ".center")
                  for c in _want(obj, "center", (list,), path)),
            _result_scalar(_want(obj, "radius", None, path), path + ".radius"))
    if kind == "arc":
        return geometry.Arc(
            tuple(float(c) for c in _want(obj, "center", (list,), path)),
            float(_want(obj, "radius", (int, float), path)),
            float(_want(obj, "theta0", (int, float), path)),
            float(_want(obj, "theta1", (int, float), path)),
            bool(obj.get("closed0", True)), bool(obj.get("closed1", True)))
    raise ParseError(path + ".kind", "unknown piece kind %r" % kind)


def union_to_json(U: geometry.FaceUnion) -> dict:
    return {"pieces": [piece_to_json(p) for p in U.pieces]}


def union_from_json(obj, path="$") -> geometry.FaceUnion:
    pieces = _want(obj, "pieces", (list,), path)
    return geometry.FaceUnion(tuple(
        piece_from_json(p, "%s.pieces[%d]" % (path, i))
        for i, p in enumerate(pieces)))


def outer_result_json(U: geometry.FaceUnion, closure_applied: bool,
                      mode: str, **meta) -> dict:
    out = {"outer_limit": union_to_json(U),
           "closure_applied": bool(closure_applied),
           "mode": mode}
    out.update(meta)
    return out


def dfamily_result_json(family: outer.IndexFamily) -> dict:
    return {"d_family": [{"D": list(ind),
                          "certificate": [format_scalar(v) for v in cert]}
                         for ind, cert in family.entries]}


def erbound_result_json(report: errorbound.ErrorBoundReport) -> dict:
    lb = report.lower_bound
    return {"lower_bound": "+inf" if errorbound.is_infinite(lb) else float(lb),
            "attaining_piece": report.attaining_piece,
            "attaining_point": (None if report.attaining_point is None
                                else [float(c) for c in report.attaining_point]),
            "empirical_estimate": report.empirical_estimate,
            "inequality_satisfied": report.inequality_satisfied}


def oracle_result_json(cloud: oracle.OracleCloud, seed,
                       report: oracle.EmpiricalReport = None, **meta) -> dict:
    out = {"cloud": [[[float(c) for c in g], r, [float(c) for c in q]]
                     for g, r, q in cloud.points],
           "radii": list(cloud.radii),
           "skipped_empty_subdiff": cloud.skipped_empty_subdiff,
           "seed": seed}
    if report is not None:
        out["per_radius_min_ratio"] = list(report.per_radius_min_ratio)
        out["er_estimate"] = report.estimate
        out["n_samples"] = list(report.n_samples)
    out.update(meta)
    return out


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
