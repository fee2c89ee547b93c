"""Query execution for the four access models.

All models answer the same question: which stored entities does a shape
match?  They differ in what they ask the store for:

* RAW scans everything and filters.
* PROJECTION scans the vertical band of x-cell columns under the shape
  and filters (the band always over-covers, so filtering is mandatory).
* GRID fetches every cell of the shape's bounding box one by one.
* GAIA plans one key segment per grid row and issues the range scans
  concurrently, then gathers.

RAW and PROJECTION results are always exact.  GRID and GAIA return
whole cells, so with exact=False their result may over-cover the shape;
exact=True applies the containment filter afterwards.

Elapsed time is measured around the whole model execution, including
planning and filtering, with perf_counter (sub-microsecond resolution).
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from time import perf_counter

from .errors import ConfigError, EmptyIntersectionError
from .geometry import GeoShape, SpanMode, bounds, contains, intersects_world, row_range
from .grid import CellCoord, GridConfig, col_of
from .segments import Segment, SegmentPlan, plan
from .store import CostCounters, Entity, Store


class ModelKind(Enum):
    """Which access layout a query runs against."""

    RAW = "raw"
    PROJECTION = "projection"
    GRID = "grid"
    GAIA = "gaia"


@dataclass(frozen=True, slots=True)
class QueryResult:
    """Entities sorted by id, the work counters, wall time, and exactness."""

    entities: tuple[Entity, ...]
    counters: CostCounters
    elapsed_seconds: float
    exact: bool

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.entities)


# Segment scans from all queries share one pool: per-query pool creation
# would dominate sub-millisecond latencies and swamp the comparison.
_SCAN_POOL_SIZE = 64
_scan_pool: ThreadPoolExecutor | None = None
_scan_pool_lock = threading.Lock()


def _scan_executor() -> ThreadPoolExecutor:
    global _scan_pool
    if _scan_pool is None:
        with _scan_pool_lock:
            if _scan_pool is None:
                _scan_pool = ThreadPoolExecutor(
                    max_workers=_SCAN_POOL_SIZE, thread_name_prefix="gaia-scan"
                )
    return _scan_pool


def _scan_chunk(store: Store, chunk: tuple[Segment, ...]) -> tuple[CostCounters, list[Entity]]:
    counters = CostCounters()
    found: list[Entity] = []
    for seg in chunk:
        found.extend(store.range_scan(seg.key_lo, seg.key_hi, counters))
    return counters, found


def _run_gaia(
    store: Store,
    shape: GeoShape,
    cfg: GridConfig,
    mode: SpanMode,
    fan_out: int | None,
    counters: CostCounters,
) -> list[Entity]:
    p: SegmentPlan = plan(shape, cfg, mode)
    width = p.count if fan_out is None else max(1, min(fan_out, p.count))
    if width == 1:
        sub, found = _scan_chunk(store, p.segments)
        counters.merge(sub)
        return found
    chunks = [p.segments[i::width] for i in range(width)]
    pool = _scan_executor()
    futures = [pool.submit(_scan_chunk, store, chunk) for chunk in chunks]
    found = []
    for future in futures:
        sub, part = future.result()
        counters.merge(sub)
        found.extend(part)
    return found


def _run_grid(
    store: Store, shape: GeoShape, cfg: GridConfig, counters: CostCounters
) -> list[Entity]:
    cy_lo, cy_hi = row_range(shape, cfg)
    lo, hi = bounds(shape)
    cx_lo = col_of(max(lo.x, cfg.min_d), cfg)
    cx_hi = col_of(min(hi.x, cfg.max_d), cfg)
    found: list[Entity] = []
    for cy in range(cy_lo, cy_hi + 1):
        for cx in range(cx_lo, cx_hi + 1):
            found.extend(store.cell_get(CellCoord(cx, cy), counters))
    return found


def query(
    store: Store,
    shape: GeoShape,
    model: ModelKind,
    cfg: GridConfig | None = None,
    *,
    mode: SpanMode = SpanMode.TIGHT,
    exact: bool = True,
    fan_out: int | None = None,
) -> QueryResult:
    """Run one shape query under the given model.

    cfg defaults to the store's grid; passing a different grid raises
    ConfigError since keys would not line up.  A shape whose bounding
    box misses the world raises EmptyIntersectionError.  fan_out caps
    how many segment scans run concurrently (default: all of them).
    """
    if cfg is None:
        cfg = store.cfg
    elif cfg != store.cfg:
        raise ConfigError(
            f"query grid {cfg} does not match the store's grid {store.cfg}"
        )
    if not intersects_world(shape, cfg):
        raise EmptyIntersectionError("query shape does not intersect the world")

    start = perf_counter()
    counters = CostCounters()
    if model is ModelKind.RAW:
        found = [e for e in store.full_scan(counters) if contains(shape, e.point)]
        is_exact = True
    elif model is ModelKind.PROJECTION:
        lo, hi = bounds(shape)
        px_lo = col_of(max(lo.x, cfg.min_d), cfg)
        px_hi = col_of(min(hi.x, cfg.max_d), cfg)
        band = store.projection_scan(px_lo, px_hi, counters)
        found = [e for e in band if contains(shape, e.point)]
        is_exact = True
    elif model is ModelKind.GRID:
        found = _run_grid(store, shape, cfg, counters)
        if exact:
            found = [e for e in found if contains(shape, e.point)]
        is_exact = exact
    elif model is ModelKind.GAIA:
        found = _run_gaia(store, shape, cfg, mode, fan_out, counters)
        if exact:
            found = [e for e in found if contains(shape, e.point)]
        is_exact = exact
    else:
        raise ConfigError(f"unknown model {model!r}")

    # Layouts hand back disjoint runs, so ids are already unique; the
    # dedupe guards the invariant cheaply and fixes the output order
    # regardless of fan-out scheduling.
    by_id = {e.id: e for e in found}
    entities = tuple(by_id[i] for i in sorted(by_id))
    elapsed = perf_counter() - start
    return QueryResult(entities=entities, counters=counters, elapsed_seconds=elapsed, exact=is_exact)


def oracle(store: Store, shape: GeoShape) -> set[Entity]:
    """Reference answer: containment-test every entity, no index involved."""
    return {e for e in store.entities if contains(shape, e.point)}
