"""World grid and cell-linearization keys.

A rectangular world is cut into square cells of side ``cell_side``; cells
are addressed by integer (cx, cy) coordinates and linearized row-major
into a single non-negative integer key::

    key = cx + cy * n_cols

Rows therefore occupy contiguous, disjoint key intervals, which is what
lets a 2D query shape be covered by one 1D key range per grid row.

Cells are half-open ``[lo, lo + cell_side)`` on both axes, except that
points lying exactly on the world's max edge belong to the last row or
column (the world is closed, and no cell may start at the max edge).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import ConfigError, DomainError

HashKey = int


class Point(NamedTuple):
    """A location in world coordinates."""

    x: float
    y: float


class CellCoord(NamedTuple):
    """Integer grid-cell coordinates: column cx, row cy."""

    cx: int
    cy: int


def _axis_cells(extent: float, cell_side: float) -> int:
    """Number of cells covering ``extent``, robust to float dust.

    The last cell may overhang the world edge; it is clipped by the
    half-open point-to-cell mapping, never by shrinking the count.
    """
    n = math.floor(extent / cell_side)
    # Add the partial trailing cell only if real area remains uncovered;
    # the tolerance absorbs rounding like 100 / 0.05 -> 2000.0000000000002.
    if extent - n * cell_side > cell_side * 1e-9:
        n += 1
    return max(n, 1)


@dataclass(frozen=True, slots=True)
class GridConfig:
    """World rectangle plus cell side; derives the grid dimensions.

    min_d/max_d bound the horizontal axis, min_h/max_h the vertical one.
    """

    min_d: float
    max_d: float
    min_h: float
    max_h: float
    cell_side: float
    n_cols: int = field(init=False, compare=False)
    n_rows: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not (self.max_d > self.min_d):
            raise ConfigError(f"max_d ({self.max_d}) must exceed min_d ({self.min_d})")
        if not (self.max_h > self.min_h):
            raise ConfigError(f"max_h ({self.max_h}) must exceed min_h ({self.min_h})")
        if not (self.cell_side > 0):
            raise ConfigError(f"cell_side must be positive, got {self.cell_side}")
        if self.cell_side > min(self.width, self.height):
            raise ConfigError(
                f"cell_side ({self.cell_side}) exceeds the world's shorter extent "
                f"({min(self.width, self.height)})"
            )
        object.__setattr__(self, "n_cols", _axis_cells(self.width, self.cell_side))
        object.__setattr__(self, "n_rows", _axis_cells(self.height, self.cell_side))

    @property
    def width(self) -> float:
        return self.max_d - self.min_d

    @property
    def height(self) -> float:
        return self.max_h - self.min_h

    @property
    def n_cells(self) -> int:
        return self.n_cols * self.n_rows


DEFAULT_GRID = GridConfig(min_d=0.0, max_d=100.0, min_h=0.0, max_h=100.0, cell_side=10.0)


def _axis_index(value: float, lo: float, hi: float, cell_side: float, n: int, name: str) -> int:
    if not (lo <= value <= hi):
        raise DomainError(f"{name}={value!r} outside world range [{lo}, {hi}]")
    idx = int((value - lo) // cell_side)
    # Clamp: the max edge belongs to the last cell, and float dust must
    # never produce an index outside [0, n).
    if idx < 0:
        return 0
    if idx >= n:
        return n - 1
    return idx


def col_of(x: float, cfg: GridConfig) -> int:
    """Column index of a world x coordinate."""
    return _axis_index(x, cfg.min_d, cfg.max_d, cfg.cell_side, cfg.n_cols, "x")


def row_of(y: float, cfg: GridConfig) -> int:
    """Row index of a world y coordinate."""
    return _axis_index(y, cfg.min_h, cfg.max_h, cfg.cell_side, cfg.n_rows, "y")


def cell_of(p: Point, cfg: GridConfig) -> CellCoord:
    """Cell containing a world point; DomainError if the point is outside."""
    return CellCoord(col_of(p.x, cfg), row_of(p.y, cfg))


def _check_cell(cc: CellCoord, cfg: GridConfig) -> None:
    if not (0 <= cc.cx < cfg.n_cols and 0 <= cc.cy < cfg.n_rows):
        raise DomainError(
            f"cell {tuple(cc)} outside grid of {cfg.n_cols} cols x {cfg.n_rows} rows"
        )


def hash_of_cell(cc: CellCoord, cfg: GridConfig) -> HashKey:
    """Row-major linear key of a cell."""
    _check_cell(cc, cfg)
    return cc.cx + cc.cy * cfg.n_cols


def hash_of(p: Point, cfg: GridConfig) -> HashKey:
    """Linear key of the cell containing a point."""
    return hash_of_cell(cell_of(p, cfg), cfg)


def cell_of_hash(key: HashKey, cfg: GridConfig) -> CellCoord:
    """Inverse of hash_of_cell; DomainError for keys outside [0, n_cells)."""
    if not (0 <= key < cfg.n_cells):
        raise DomainError(f"key {key} outside [0, {cfg.n_cells})")
    cy, cx = divmod(key, cfg.n_cols)
    return CellCoord(cx, cy)


def cell_origin(cc: CellCoord, cfg: GridConfig) -> Point:
    """World coordinates of a cell's min corner."""
    _check_cell(cc, cfg)
    return Point(cfg.min_d + cc.cx * cfg.cell_side, cfg.min_h + cc.cy * cfg.cell_side)


_CONFIG_KEYS = ("min_d", "max_d", "min_h", "max_h", "cell_side")


def read_grid_config(path: str) -> GridConfig:
    """Parse a ``key = value`` grid config file.

    Blank lines and ``#`` comments are ignored.  Exactly the keys
    min_d, max_d, min_h, max_h, cell_side are required, each once.
    """
    values: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            try:
                values[key] = float(text.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad number for {key!r}: {text.strip()!r}") from exc
    missing = [k for k in _CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{path}: missing keys: {', '.join(missing)}")
    return GridConfig(**values)


def write_grid_config(cfg: GridConfig, path: str) -> None:
    """Write a grid config in the format read_grid_config parses."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in _CONFIG_KEYS:
            fh.write(f"{key} = {getattr(cfg, key)!r}\n")
