"""Static SVG rendering of result sets.

Renders a face union (bold), optional secondary unions (thin), and an
optional sampled cloud (dots) into a standalone SVG string. Rendering is
purely a view of already-computed data; nothing here feeds back into the
computations.
"""
from __future__ import annotations

import math

from . import geometry

_BOLD = "#b2182b"
_THIN = "#2166ac"
_DOT = "#555555"
_AXIS = "#bbbbbb"


def _as_xy(pt):
    pt = tuple(float(c) for c in pt)
    if len(pt) == 1:
        return (pt[0], 0.0)
    return pt[:2]


def _content_points(U, cloud, extras):
    pts = []
    for union in (U,) + tuple(extras):
        if union is None:
            continue
        for piece in union.pieces:
            pts.extend(_as_xy(p) for p in geometry.discretize_piece(piece, res=0.05))
    if cloud is not None:
        pts.extend(_as_xy(p) for p in cloud)
    if not pts:
        pts = [(0.0, 0.0)]
    pts.append((0.0, 0.0))  # keep the origin in frame; it anchors the bound
    return pts


class _Frame:
    def __init__(self, pts, size, margin):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        lo = (min(xs), min(ys))
        hi = (max(xs), max(ys))
        span = max(hi[0] - lo[0], hi[1] - lo[1], 1e-6)
        pad = margin * span
        self.lo = (lo[0] - pad, lo[1] - pad)
        self.scale = size / (span + 2 * pad)
        self.size = size
        self.h = (hi[1] - lo[1] + 2 * pad) * self.scale

    def map(self, pt):
        x, y = _as_xy(pt)
        return ((x - self.lo[0]) * self.scale,
                self.h - (y - self.lo[1]) * self.scale)


def _fmt(v):
    return "%.2f" % v


def _polyline(frame, pts, color, width, close=False, fill=None):
    mapped = [frame.map(p) for p in pts]
    coords = " ".join("%s,%s" % (_fmt(x), _fmt(y)) for x, y in mapped)
    tag = "polygon" if close else "polyline"
    fill_attr = fill if fill else "none"
    return ('<%s points="%s" fill="%s" stroke="%s" stroke-width="%s" '
            'stroke-linecap="round" stroke-linejoin="round"/>'
            % (tag, coords, fill_attr, color, width))


def _dot(frame, pt, color, r):
    x, y = frame.map(pt)
    return '<circle cx="%s" cy="%s" r="%s" fill="%s"/>' % (_fmt(x), _fmt(y), r, color)


def _piece_svg(frame, piece, color, width):
    out = []
    if isinstance(piece, geometry.Polytope):
        verts = [tuple(float(c) for c in v) for v in piece.vertices]
        if len(verts) == 1:
            out.append(_dot(frame, verts[0], color, 3.5))
        elif len(verts) == 2:
            out.append(_polyline(frame, verts, color, 3))
        else:
            hull = geometry.convex_hull_2d(verts)
            out.append(_polyline(frame, hull, color, 3, close=True,
                                 fill=color + "33"))
        return out
    if isinstance(piece, geometry.Ball):
        c = _as_xy(piece.center)
        r = float(piece.radius)
        ring = [(c[0] + r * math.cos(t), c[1] + r * math.sin(t))
                for t in [2 * math.pi * k / 96 for k in range(96)]]
        out.append(_polyline(frame, ring, color, 3, close=True,
                             fill=color + "33"))
        return out
    if isinstance(piece, geometry.Arc):
        span = piece.theta1 - piece.theta0
        k = max(2, int(math.ceil(span / 0.02)))
        pts = [piece.point_at(piece.theta0 + span * i / k) for i in range(k + 1)]
        out.append(_polyline(frame, pts, color, 3))
        for theta, closed in ((piece.theta0, piece.closed0),
                              (piece.theta1, piece.closed1)):
            if not piece.full_circle:
                fill = color if closed else "#ffffff"
                x, y = frame.map(piece.point_at(theta))
                out.append('<circle cx="%s" cy="%s" r="3" fill="%s" '
                           'stroke="%s" stroke-width="1.2"/>'
                           % (_fmt(x), _fmt(y), fill, color))
        return out
    raise TypeError("unknown piece kind")


def render_svg(U: geometry.FaceUnion, cloud=None, extras=(),
               size=480, margin=0.08, title=None) -> str:
    """SVG string: U bold, extras thin, cloud as dots, origin marked."""
    pts = _content_points(U, cloud, extras)
    frame = _Frame(pts, size, margin)
    body = []
    ox, oy = frame.map((0.0, 0.0))
    body.append('<line x1="0" y1="%s" x2="%s" y2="%s" stroke="%s"/>'
                % (_fmt(oy), _fmt(frame.size), _fmt(oy), _AXIS))
    body.append('<line x1="%s" y1="0" x2="%s" y2="%s" stroke="%s"/>'
                % (_fmt(ox), _fmt(ox), _fmt(frame.h), _AXIS))
    for extra in extras:
        if extra is None:
            continue
        for piece in extra.pieces:
            for el in _piece_svg(frame, piece, _THIN, 1.5):
                body.append(el)
    if cloud is not None:
        for p in cloud:
            body.append(_dot(frame, p, _DOT, 1.4))
    for piece in U.pieces:
        body.extend(_piece_svg(frame, piece, _BOLD, 3))
    body.append(_dot(frame, (0.0, 0.0), "#000000", 2.5))
    if title:
        body.append('<text x="8" y="16" font-family="sans-serif" '
                    'font-size="12" fill="#333">%s</text>' % title)
    return ('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
            'viewBox="0 0 %s %s">\n%s\n</svg>\n'
            % (frame.size, int(frame.h) + 1, _fmt(frame.size), _fmt(frame.h),
               "\n".join(body)))


def write_svg(path, U, cloud=None, extras=(), **kw):
    with open(path, "w") as fh:
        fh.write(render_svg(U, cloud=cloud, extras=extras, **kw))
