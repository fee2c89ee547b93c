"""Shape containment, row ranges, and per-row span tests.

The span properties are checked against a sampling oracle: points known
to lie in a shape (by rejection sampling with contains) must always fall
inside the span computed for their row.
"""

from __future__ import annotations

import math
import random

import pytest

from gaia.errors import DomainError, EmptyIntersectionError
from gaia.geometry import (
    Disc,
    Polygon,
    Rect,
    SpanMode,
    bounds,
    contains,
    intersects_world,
    parse_shape,
    row_range,
    row_span,
)
from gaia.grid import DEFAULT_GRID, GridConfig, Point, col_of, row_of


def test_disc_contains_boundary_inclusive():
    d = Disc(Point(50, 50), 15)
    assert contains(d, Point(50, 50))
    assert contains(d, Point(65, 50))
    assert contains(d, Point(50, 35))
    assert not contains(d, Point(65.01, 50))
    assert not contains(d, Point(61, 61))


def test_disc_radius_zero_is_a_point():
    d = Disc(Point(5, 5), 0)
    assert contains(d, Point(5, 5))
    assert not contains(d, Point(5.000001, 5))


def test_rect_contains_all_edges():
    r = Rect(Point(10, 20), Point(30, 40))
    assert contains(r, Point(10, 20))
    assert contains(r, Point(30, 40))
    assert contains(r, Point(10, 40))
    assert contains(r, Point(20, 30))
    assert not contains(r, Point(9.999, 30))
    assert not contains(r, Point(20, 40.001))


def test_polygon_contains_interior_boundary_vertex():
    square = Polygon((Point(0, 0), Point(10, 0), Point(10, 10), Point(0, 10)))
    assert contains(square, Point(5, 5))
    assert contains(square, Point(0, 5))
    assert contains(square, Point(5, 10))
    assert contains(square, Point(0, 0))
    assert not contains(square, Point(-0.001, 5))
    assert not contains(square, Point(10.001, 10))


def test_concave_polygon_contains():
    # A "U": the notch between the arms is outside.
    u = Polygon(
        (
            Point(0, 0),
            Point(30, 0),
            Point(30, 30),
            Point(20, 30),
            Point(20, 10),
            Point(10, 10),
            Point(10, 30),
            Point(0, 30),
        )
    )
    assert contains(u, Point(5, 20))
    assert contains(u, Point(25, 20))
    assert contains(u, Point(15, 5))
    assert not contains(u, Point(15, 20))


def test_degenerate_shapes_rejected():
    with pytest.raises(DomainError):
        Disc(Point(0, 0), -1)
    with pytest.raises(DomainError):
        Rect(Point(10, 0), Point(0, 10))
    with pytest.raises(DomainError):
        Polygon((Point(0, 0), Point(1, 1)))
    with pytest.raises(DomainError, match="self-intersects"):
        Polygon((Point(0, 0), Point(10, 10), Point(10, 0), Point(0, 6)))
    with pytest.raises(DomainError, match="zero area"):
        Polygon((Point(0, 0), Point(5, 5), Point(10, 10)))
    with pytest.raises(DomainError):
        Disc(Point(math.nan, 0), 1)


def test_row_range_known_cases():
    cfg = DEFAULT_GRID
    assert row_range(Disc(Point(50, 50), 15), cfg) == (3, 6)
    assert row_range(Disc(Point(5, 5), 1), cfg) == (0, 0)
    assert row_range(Rect(Point(10, 35), Point(90, 38)), cfg) == (3, 3)
    # Hanging over the top edge clamps to the last row.
    assert row_range(Disc(Point(50, 98), 10), cfg) == (8, 9)


def test_row_range_outside_world_raises():
    cfg = DEFAULT_GRID
    with pytest.raises(EmptyIntersectionError):
        row_range(Disc(Point(150, 50), 5), cfg)
    with pytest.raises(EmptyIntersectionError):
        row_range(Rect(Point(-30, -30), Point(-1, -1)), cfg)
    assert not intersects_world(Disc(Point(150, 50), 5), cfg)
    assert intersects_world(Disc(Point(103, 50), 5), cfg)


def test_row_span_bounding_is_bbox_wide():
    cfg = DEFAULT_GRID
    d = Disc(Point(50, 50), 25)
    for cy in range(2, 8):
        assert row_span(d, cy, cfg, SpanMode.BOUNDING) == (2, 7)


def test_row_span_tight_shrinks_at_disc_edges():
    cfg = DEFAULT_GRID
    d = Disc(Point(50, 50), 25)
    # Row 2 band is [20, 30): nearest y is 30, dy = 20, half-width = 15.
    assert row_span(d, 2, cfg, SpanMode.TIGHT) == (3, 6)
    # Row 5 band [50, 60) passes through the center: full width.
    assert row_span(d, 5, cfg, SpanMode.TIGHT) == (2, 7)


def test_row_span_rect_tight_equals_bounding():
    cfg = DEFAULT_GRID
    r = Rect(Point(12, 5), Point(47, 95))
    for cy in range(0, 10):
        assert row_span(r, cy, cfg, SpanMode.TIGHT) == (1, 4)
        assert row_span(r, cy, cfg, SpanMode.BOUNDING) == (1, 4)


def test_row_span_bad_row_raises():
    with pytest.raises(DomainError):
        row_span(Disc(Point(50, 50), 5), 10, DEFAULT_GRID, SpanMode.TIGHT)


def _random_convex_polygon(rng: random.Random, cx: float, cy: float, r: float) -> Polygon:
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(rng.randrange(3, 9)))
    pts = [Point(cx + r * math.cos(a), cy + r * math.sin(a)) for a in angles]
    return Polygon(tuple(pts))


def test_tight_span_within_bounding_span():
    cfg = GridConfig(0, 100, 0, 100, 5.0)
    rng = random.Random(2024)
    for _ in range(200):
        kind = rng.randrange(3)
        if kind == 0:
            shape = Disc(Point(rng.uniform(5, 95), rng.uniform(5, 95)), rng.uniform(0.5, 20))
        elif kind == 1:
            x1, y1 = rng.uniform(0, 90), rng.uniform(0, 90)
            shape = Rect(Point(x1, y1), Point(x1 + rng.uniform(1, 10), y1 + rng.uniform(1, 10)))
        else:
            shape = _random_convex_polygon(rng, rng.uniform(20, 80), rng.uniform(20, 80), rng.uniform(2, 15))
        cy_lo, cy_hi = row_range(shape, cfg)
        for cy in range(cy_lo, cy_hi + 1):
            tight = row_span(shape, cy, cfg, SpanMode.TIGHT)
            bounding = row_span(shape, cy, cfg, SpanMode.BOUNDING)
            assert bounding is not None
            if tight is None:
                continue
            assert bounding[0] <= tight[0] <= tight[1] <= bounding[1], (
                f"tight {tight} escapes bounding {bounding} for {shape} row {cy}"
            )


def _sample_inside(rng: random.Random, shape, n: int) -> list[Point]:
    lo, hi = bounds(shape)
    pts = []
    attempts = 0
    while len(pts) < n and attempts < n * 200:
        attempts += 1
        p = Point(rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y))
        if contains(shape, p):
            pts.append(p)
    return pts


def test_tight_span_covers_every_contained_point():
    cfg = GridConfig(0, 100, 0, 100, 5.0)
    rng = random.Random(77)
    shapes = []
    for _ in range(40):
        shapes.append(Disc(Point(rng.uniform(10, 90), rng.uniform(10, 90)), rng.uniform(0.5, 9)))
        shapes.append(_random_convex_polygon(rng, rng.uniform(15, 85), rng.uniform(15, 85), rng.uniform(2, 12)))
        x1, y1 = rng.uniform(5, 85), rng.uniform(5, 85)
        shapes.append(Rect(Point(x1, y1), Point(x1 + rng.uniform(0.5, 10), y1 + rng.uniform(0.5, 10))))
    for shape in shapes:
        for p in _sample_inside(rng, shape, 25):
            cy = row_of(p.y, cfg)
            span = row_span(shape, cy, cfg, SpanMode.TIGHT)
            assert span is not None, f"row {cy} of {shape} has no span but holds {p}"
            cx = col_of(p.x, cfg)
            assert span[0] <= cx <= span[1], f"{p} (col {cx}) outside span {span} of {shape}"


def test_concave_polygon_band_extent_matches_sampling():
    u = Polygon(
        (
            Point(10, 10),
            Point(90, 10),
            Point(90, 80),
            Point(60, 80),
            Point(60, 30),
            Point(40, 30),
            Point(40, 80),
            Point(10, 80),
        )
    )
    cfg = DEFAULT_GRID
    rng = random.Random(13)
    cy_lo, cy_hi = row_range(u, cfg)
    for cy in range(cy_lo, cy_hi + 1):
        span = row_span(u, cy, cfg, SpanMode.TIGHT)
        assert span is not None
        y0 = cfg.min_h + cy * cfg.cell_side
        for _ in range(300):
            p = Point(rng.uniform(10, 90), rng.uniform(y0, min(y0 + cfg.cell_side, 80)))
            if contains(u, p):
                cx = col_of(p.x, cfg)
                assert span[0] <= cx <= span[1]


def test_disc_tight_span_near_symmetry():
    cfg = GridConfig(0, 100, 0, 100, 2.0)
    d = Disc(Point(50, 50), 17)
    center_col = col_of(50, cfg)
    cy_lo, cy_hi = row_range(d, cfg)
    for cy in range(cy_lo, cy_hi + 1):
        span = row_span(d, cy, cfg, SpanMode.TIGHT)
        assert span is not None
        # The continuous x-interval is symmetric about the center; after
        # column quantization each side can differ by at most one cell.
        left = center_col - span[0]
        right = span[1] - center_col
        assert abs(left - right) <= 1, f"row {cy}: span {span} skews past one cell"


def test_parse_shape_round_trips():
    d = parse_shape("disc:50,50,15")
    assert d == Disc(Point(50, 50), 15)
    r = parse_shape("rect:30,40,10,20")
    assert r == Rect(Point(10, 20), Point(30, 40))
    p = parse_shape("poly:0,0;10,0;10,10;0,10")
    assert isinstance(p, Polygon) and len(p.vertices) == 4


def test_parse_shape_malformed():
    for text in ("disc:1,2", "rect:1,2,3", "poly:1,2;3", "blob:1,2,3", "disc", "disc:a,b,c"):
        with pytest.raises(ValueError):
            parse_shape(text)
    with pytest.raises(DomainError):
        parse_shape("disc:0,0,-5")
