"""Turning a 2D shape into per-row 1D key segments.

Because keys are row-major, the cells a shape touches in one grid row
form a single contiguous key interval.  A plan is the ordered list of
those intervals, one per intersecting row.  Segments from different
rows are never merged even when their key ranges happen to be adjacent:
the gap cells between row ends would otherwise be scanned for nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, EmptyIntersectionError
from .geometry import GeoShape, SpanMode, row_range, row_span
from .grid import CellCoord, GridConfig, HashKey, hash_of_cell


@dataclass(frozen=True, slots=True)
class Segment:
    """One row's inclusive key interval [key_lo, key_hi]."""

    cy: int
    key_lo: HashKey
    key_hi: HashKey

    def __post_init__(self) -> None:
        if self.key_lo > self.key_hi:
            raise DomainError(f"segment keys inverted: {self.key_lo} > {self.key_hi}")

    @property
    def n_cells(self) -> int:
        return self.key_hi - self.key_lo + 1


@dataclass(frozen=True, slots=True)
class SegmentPlan:
    """Ordered, pairwise-disjoint segments covering a shape."""

    mode: SpanMode
    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        for prev, cur in zip(self.segments, self.segments[1:]):
            if cur.key_lo <= prev.key_hi:
                raise DomainError(
                    f"segments overlap or are unsorted: "
                    f"[{prev.key_lo},{prev.key_hi}] then [{cur.key_lo},{cur.key_hi}]"
                )

    @property
    def count(self) -> int:
        """Number of segments, i.e. of 1D range queries the plan costs."""
        return len(self.segments)

    @property
    def covered_cells(self) -> int:
        return sum(s.n_cells for s in self.segments)


def plan(shape: GeoShape, cfg: GridConfig, mode: SpanMode = SpanMode.TIGHT) -> SegmentPlan:
    """Build the per-row segment plan for a shape.

    Rows whose span is empty contribute no segment.  A plan with no
    segments at all raises EmptyIntersectionError, so callers can tell
    "the query asks about nothing" apart from "the query matched nothing".
    """
    cy_lo, cy_hi = row_range(shape, cfg)
    segments: list[Segment] = []
    for cy in range(cy_lo, cy_hi + 1):
        span = row_span(shape, cy, cfg, mode)
        if span is None:
            continue
        cx_lo, cx_hi = span
        segments.append(
            Segment(
                cy=cy,
                key_lo=hash_of_cell(CellCoord(cx_lo, cy), cfg),
                key_hi=hash_of_cell(CellCoord(cx_hi, cy), cfg),
            )
        )
    if not segments:
        raise EmptyIntersectionError("shape covers no grid cells inside the world")
    return SegmentPlan(mode=mode, segments=tuple(segments))


def format_plan(p: SegmentPlan) -> str:
    """One line per segment: ``cy key_lo key_hi``."""
    return "\n".join(f"{s.cy} {s.key_lo} {s.key_hi}" for s in p.segments)
