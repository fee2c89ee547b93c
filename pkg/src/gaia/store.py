"""In-memory entity store with four access layouts over the same data.

One build materializes every layout so models can be compared on equal
footing:

* RAW: entities in insertion order, only full scans.
* PROJECTION: entities sorted by their x-axis cell index, so a query
  can scan the vertical band of columns under a shape.
* GRID: a bucket per occupied cell, fetched one cell at a time.
* Linearized: entities sorted by (cell key, id), so each grid row a
  shape touches is one contiguous range scan with a log-cost seek.

Scans never filter by shape; they return everything in the requested
keys and charge it to the caller's CostCounters.  Exactness is layered
on top by the query engine.
"""

from __future__ import annotations

import csv
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BuildError, DomainError
from .grid import CellCoord, GridConfig, HashKey, Point, cell_of, hash_of


@dataclass(frozen=True, slots=True)
class Entity:
    """One stored record: integer id, world position, opaque payload text."""

    id: int
    point: Point
    payload: str


StoreKey = tuple[HashKey, int]
"""Composite sort key (cell key, entity id); the id keeps equal-hash entities distinct."""


@dataclass(slots=True)
class CostCounters:
    """Mutable tally of work charged to a caller across store calls."""

    queries_issued: int = 0
    entries_scanned: int = 0

    def charge(self, issued: int, scanned: int) -> None:
        self.queries_issued += issued
        self.entries_scanned += scanned

    def merge(self, other: "CostCounters") -> None:
        self.charge(other.queries_issued, other.entries_scanned)


class Store:
    """Immutable after build; all four layouts stay views of one entity set."""

    def __init__(self, cfg: GridConfig, entities: Sequence[Entity]):
        self._cfg = cfg
        self._raw: tuple[Entity, ...] = tuple(entities)

        seen: set[int] = set()
        for e in self._raw:
            if e.id in seen:
                raise BuildError(f"duplicate entity id {e.id}")
            seen.add(e.id)

        keyed = sorted(
            ((hash_of(e.point, cfg), e.id, e) for e in self._raw),
            key=lambda t: (t[0], t[1]),
        )
        self._gaia_hashes: list[HashKey] = [t[0] for t in keyed]
        self._gaia_entities: list[Entity] = [t[2] for t in keyed]

        projected = sorted(
            ((cell_of(e.point, cfg).cx, e.id, e) for e in self._raw),
            key=lambda t: (t[0], t[1]),
        )
        self._proj_cols: list[int] = [t[0] for t in projected]
        self._proj_entities: list[Entity] = [t[2] for t in projected]

        buckets: dict[CellCoord, list[Entity]] = {}
        for e in self._raw:
            buckets.setdefault(cell_of(e.point, cfg), []).append(e)
        self._grid: dict[CellCoord, tuple[Entity, ...]] = {
            cc: tuple(sorted(b, key=lambda e: e.id)) for cc, b in buckets.items()
        }

    @classmethod
    def build(cls, entities: Sequence[Entity], cfg: GridConfig) -> "Store":
        """Validate and index entities under the given grid."""
        return cls(cfg, entities)

    @property
    def cfg(self) -> GridConfig:
        return self._cfg

    @property
    def entities(self) -> tuple[Entity, ...]:
        return self._raw

    def __len__(self) -> int:
        return len(self._raw)

    def full_scan(self, counters: CostCounters) -> tuple[Entity, ...]:
        """Every entity; one issued query, N entries charged."""
        counters.charge(1, len(self._raw))
        return self._raw

    def range_scan(self, key_lo: HashKey, key_hi: HashKey, counters: CostCounters) -> list[Entity]:
        """Entities with cell key in inclusive [key_lo, key_hi], ordered by (key, id).

        Seeks by binary search, then returns the contiguous run.
        """
        if key_lo > key_hi:
            raise DomainError(f"inverted key range [{key_lo}, {key_hi}]")
        if key_lo < 0 or key_hi >= self._cfg.n_cells:
            raise DomainError(
                f"key range [{key_lo}, {key_hi}] outside [0, {self._cfg.n_cells})"
            )
        i = bisect_left(self._gaia_hashes, key_lo)
        j = bisect_right(self._gaia_hashes, key_hi)
        counters.charge(1, j - i)
        return self._gaia_entities[i:j]

    def cell_get(self, cc: CellCoord, counters: CostCounters) -> tuple[Entity, ...]:
        """Bucket of one cell (possibly empty); one issued query."""
        if not (0 <= cc.cx < self._cfg.n_cols and 0 <= cc.cy < self._cfg.n_rows):
            raise DomainError(
                f"cell {tuple(cc)} outside grid of "
                f"{self._cfg.n_cols} cols x {self._cfg.n_rows} rows"
            )
        bucket = self._grid.get(cc, ())
        counters.charge(1, len(bucket))
        return bucket

    def projection_scan(self, px_lo: int, px_hi: int, counters: CostCounters) -> list[Entity]:
        """Entities whose x-cell index lies in inclusive [px_lo, px_hi]."""
        if px_lo > px_hi:
            raise DomainError(f"inverted column range [{px_lo}, {px_hi}]")
        if px_lo < 0 or px_hi >= self._cfg.n_cols:
            raise DomainError(
                f"column range [{px_lo}, {px_hi}] outside [0, {self._cfg.n_cols})"
            )
        i = bisect_left(self._proj_cols, px_lo)
        j = bisect_right(self._proj_cols, px_hi)
        counters.charge(1, j - i)
        return self._proj_entities[i:j]


_CSV_HEADER = ["id", "x", "y", "payload"]


def write_entities(entities: Iterable[Entity], path: str) -> None:
    """Write entities as CSV with columns id,x,y,payload.

    Floats are written with repr so a reload reproduces them bit-exactly
    and two writes of the same entities are byte-identical.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for e in entities:
            writer.writerow([e.id, repr(e.point.x), repr(e.point.y), e.payload])


def read_entities(path: str) -> list[Entity]:
    """Read entities written by write_entities."""
    out: list[Entity] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise BuildError(f"{path}: expected header {','.join(_CSV_HEADER)!r}, got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise BuildError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                out.append(Entity(int(row[0]), Point(float(row[1]), float(row[2])), row[3]))
            except ValueError as exc:
                raise BuildError(f"{path}:{lineno}: bad field: {exc}") from exc
    return out
