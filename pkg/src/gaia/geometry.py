"""Query shapes and their projection onto grid rows.

Three shape kinds are supported: discs, axis-aligned rectangles, and
simple polygons.  Containment is boundary-inclusive for all three.

The key operation is row_span: the x-extent a shape occupies within one
grid row's horizontal band, expressed in column indices.  Two span modes
exist:

* BOUNDING: every row gets the shape's full bounding-box x-extent.
* TIGHT: each row gets only the x-extent the shape actually reaches
  inside that row's band, so covers shrink near the top and bottom of
  a disc and along slanted polygon edges.

A tight span is always contained in the bounding span for the same row,
and both always cover every shape point falling in that row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import DomainError, EmptyIntersectionError
from .grid import GridConfig, Point, col_of, row_of


def _check_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"{name} has non-finite coordinate {v!r}")


@dataclass(frozen=True, slots=True)
class Disc:
    """Closed disc; radius 0 denotes a single point."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        _check_finite("disc", self.center.x, self.center.y, self.radius)
        if self.radius < 0:
            raise DomainError(f"disc radius must be >= 0, got {self.radius}")


@dataclass(frozen=True, slots=True)
class Rect:
    """Closed axis-aligned rectangle spanned by min corner lo and max corner hi."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        _check_finite("rect", self.lo.x, self.lo.y, self.hi.x, self.hi.y)
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise DomainError(f"rect lo {tuple(self.lo)} must not exceed hi {tuple(self.hi)}")


def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True if open segments ab and cd properly intersect."""

    def orient(p: Point, q: Point, r: Point) -> float:
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


@dataclass(frozen=True, slots=True)
class Polygon:
    """Simple polygon (no self-intersection, nonzero area), any winding."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if n < 3:
            raise DomainError(f"polygon needs >= 3 vertices, got {n}")
        for v in self.vertices:
            _check_finite("polygon", v.x, v.y)
        area2 = 0.0
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            area2 += a.x * b.y - b.x * a.y
        if area2 == 0.0:
            raise DomainError("polygon has zero area")
        edges = [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(*edges[i], *edges[j]):
                    raise DomainError(f"polygon self-intersects (edges {i} and {j})")


GeoShape = Union[Disc, Rect, Polygon]


class SpanMode(Enum):
    """How wide the per-row cover is: full bounding box or row-exact."""

    BOUNDING = "bounding"
    TIGHT = "tight"


def bounds(shape: GeoShape) -> tuple[Point, Point]:
    """Axis-aligned bounding box as (min corner, max corner)."""
    if isinstance(shape, Disc):
        c, r = shape.center, shape.radius
        return Point(c.x - r, c.y - r), Point(c.x + r, c.y + r)
    if isinstance(shape, Rect):
        return shape.lo, shape.hi
    xs = [v.x for v in shape.vertices]
    ys = [v.y for v in shape.vertices]
    return Point(min(xs), min(ys)), Point(max(xs), max(ys))


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    if cross != 0.0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def contains(shape: GeoShape, p: Point) -> bool:
    """Boundary-inclusive membership test."""
    if isinstance(shape, Disc):
        dx, dy = p.x - shape.center.x, p.y - shape.center.y
        return dx * dx + dy * dy <= shape.radius * shape.radius
    if isinstance(shape, Rect):
        return shape.lo.x <= p.x <= shape.hi.x and shape.lo.y <= p.y <= shape.hi.y
    verts = shape.vertices
    n = len(verts)
    inside = False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if _on_segment(p, a, b):
            return True
        # Even-odd ray cast to the right of p, half-open in y so a vertex
        # shared by two edges is counted exactly once.
        if (a.y > p.y) != (b.y > p.y):
            x_hit = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if p.x < x_hit:
                inside = not inside
    return inside


def intersects_world(shape: GeoShape, cfg: GridConfig) -> bool:
    """True if the shape's bounding box overlaps the world rectangle."""
    lo, hi = bounds(shape)
    return hi.x >= cfg.min_d and lo.x <= cfg.max_d and hi.y >= cfg.min_h and lo.y <= cfg.max_h


def row_range(shape: GeoShape, cfg: GridConfig) -> tuple[int, int]:
    """Inclusive (cy_lo, cy_hi) range of grid rows the shape touches.

    The shape's y-extent is clamped to the world before mapping, so a
    shape hanging over an edge still yields valid rows.  A shape whose
    bounding box misses the world entirely raises EmptyIntersectionError.
    """
    if not intersects_world(shape, cfg):
        raise EmptyIntersectionError(
            f"shape bounding box {tuple(bounds(shape)[0])}..{tuple(bounds(shape)[1])} "
            f"does not intersect the world"
        )
    lo, hi = bounds(shape)
    cy_lo = row_of(max(lo.y, cfg.min_h), cfg)
    cy_hi = row_of(min(hi.y, cfg.max_h), cfg)
    return cy_lo, cy_hi


def _disc_band_halfwidth(shape: Disc, y0: float, y1: float) -> float | None:
    """Half-width of the disc's x-extent within horizontal band [y0, y1]."""
    py = shape.center.y
    dy = max(0.0, y0 - py, py - y1)
    if dy > shape.radius:
        return None
    return math.sqrt(max(shape.radius * shape.radius - dy * dy, 0.0))


def _polygon_band_extent(shape: Polygon, y0: float, y1: float) -> tuple[float, float] | None:
    """x-extent of the polygon clipped to band [y0, y1], or None if empty.

    Every extreme x of the clipped region is either an original vertex
    inside the band or an edge's crossing of one of the band lines, so
    collecting those points is exact for any simple polygon.
    """
    xs: list[float] = []
    verts = shape.vertices
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if y0 <= a.y <= y1:
            xs.append(a.x)
        for k in (y0, y1):
            if (a.y - k) * (b.y - k) < 0:
                xs.append(a.x + (k - a.y) * (b.x - a.x) / (b.y - a.y))
    if not xs:
        return None
    return min(xs), max(xs)


def row_span(shape: GeoShape, cy: int, cfg: GridConfig, mode: SpanMode) -> tuple[int, int] | None:
    """Inclusive (cx_lo, cx_hi) column span of the shape within row cy.

    Returns None when the shape has no in-world x-extent in that row,
    which can happen for tight spans of concave polygons or of shapes
    partially hanging outside the world.
    """
    if not (0 <= cy < cfg.n_rows):
        raise DomainError(f"row {cy} outside grid of {cfg.n_rows} rows")
    if mode is SpanMode.BOUNDING:
        lo, hi = bounds(shape)
        x_lo, x_hi = lo.x, hi.x
    else:
        y0 = cfg.min_h + cy * cfg.cell_side
        y1 = y0 + cfg.cell_side
        if isinstance(shape, Disc):
            w = _disc_band_halfwidth(shape, y0, y1)
            if w is None:
                return None
            x_lo, x_hi = shape.center.x - w, shape.center.x + w
        elif isinstance(shape, Rect):
            x_lo, x_hi = shape.lo.x, shape.hi.x
        else:
            extent = _polygon_band_extent(shape, y0, y1)
            if extent is None:
                return None
            x_lo, x_hi = extent
    if x_hi < cfg.min_d or x_lo > cfg.max_d:
        return None
    return col_of(max(x_lo, cfg.min_d), cfg), col_of(min(x_hi, cfg.max_d), cfg)


def parse_shape(text: str) -> GeoShape:
    """Parse a shape literal.

    Formats: ``disc:px,py,R``  ``rect:x1,y1,x2,y2``  ``poly:x1,y1;x2,y2;...``
    Raises ValueError for malformed text; shape invariants may raise
    DomainError (e.g. a self-intersecting polygon).
    """
    kind, sep, body = text.partition(":")
    if not sep:
        raise ValueError(f"shape literal needs 'kind:...', got {text!r}")
    kind = kind.strip().lower()
    if kind == "disc":
        parts = [float(v) for v in body.split(",")]
        if len(parts) != 3:
            raise ValueError(f"disc needs px,py,R, got {body!r}")
        return Disc(Point(parts[0], parts[1]), parts[2])
    if kind == "rect":
        parts = [float(v) for v in body.split(",")]
        if len(parts) != 4:
            raise ValueError(f"rect needs x1,y1,x2,y2, got {body!r}")
        x1, y1, x2, y2 = parts
        return Rect(Point(min(x1, x2), min(y1, y2)), Point(max(x1, x2), max(y1, y2)))
    if kind == "poly":
        vertices = []
        for chunk in body.split(";"):
            parts = [float(v) for v in chunk.split(",")]
            if len(parts) != 2:
                raise ValueError(f"polygon vertex needs x,y, got {chunk!r}")
            vertices.append(Point(parts[0], parts[1]))
        return Polygon(tuple(vertices))
    raise ValueError(f"unknown shape kind {kind!r} (expected disc, rect, or poly)")
