"""Seeded synthetic datasets and query mixes.

Spatial dispersion follows a per-cell Poisson model: each grid cell
draws a count with rate dss / n_cells, then positions are uniform
inside the cell (clipped to the world for overhanging edge cells).
The draw is adjusted to hit the requested cardinality exactly: surplus
entities are removed at random, a shortfall is topped up with points
uniform over the whole world.  Ids are assigned 0..dss-1 afterwards.

All randomness comes from numpy's default_rng (the PCG64 generator),
so one (seed, parameters) pair reproduces identical output on any
platform.  Stream seeds for the benchmark are derived with numpy's
SeedSequence so dataset and query streams never collide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Disc
from .grid import GridConfig, Point
from .store import Entity


@dataclass(frozen=True, slots=True)
class WorkloadSpec:
    """Dataset size plus the query mix parameters tied to one seed."""

    dss: int
    seed: int
    radius_range: tuple[float, float] = (1.0, 5.0)
    query_count: int = 100

    def __post_init__(self) -> None:
        if self.dss < 0:
            raise DomainError(f"dss must be >= 0, got {self.dss}")
        if self.query_count < 1:
            raise DomainError(f"query_count must be >= 1, got {self.query_count}")
        r_lo, r_hi = self.radius_range
        if not (0 < r_lo <= r_hi):
            raise DomainError(f"radius range must satisfy 0 < lo <= hi, got {self.radius_range}")


def derive_seed(base: int, stream: int, index: int = 0) -> int:
    """Deterministic child seed for (stream, index) under a base seed."""
    seq = np.random.SeedSequence(entropy=base, spawn_key=(stream, index))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def generate_entities(cfg: GridConfig, dss: int, seed: int) -> list[Entity]:
    """Generate exactly dss entities with Poisson spatial dispersion."""
    if dss < 0:
        raise DomainError(f"dss must be >= 0, got {dss}")
    rng = np.random.default_rng(seed)
    lam = dss / cfg.n_cells
    counts = rng.poisson(lam, cfg.n_cells)
    total = int(counts.sum())

    keys = np.repeat(np.arange(cfg.n_cells, dtype=np.int64), counts)
    cx = keys % cfg.n_cols
    cy = keys // cfg.n_cols
    x0 = cfg.min_d + cx * cfg.cell_side
    y0 = cfg.min_h + cy * cfg.cell_side
    x1 = np.minimum(x0 + cfg.cell_side, cfg.max_d)
    y1 = np.minimum(y0 + cfg.cell_side, cfg.max_h)
    xs = x0 + rng.random(total) * (x1 - x0)
    ys = y0 + rng.random(total) * (y1 - y0)

    if total > dss:
        keep = np.ones(total, dtype=bool)
        keep[rng.choice(total, size=total - dss, replace=False)] = False
        xs, ys = xs[keep], ys[keep]
    elif total < dss:
        extra = dss - total
        xs = np.concatenate([xs, rng.uniform(cfg.min_d, cfg.max_d, extra)])
        ys = np.concatenate([ys, rng.uniform(cfg.min_h, cfg.max_h, extra)])

    tokens = rng.integers(0, 2**32, size=dss, dtype=np.uint64)
    return [
        Entity(i, Point(float(xs[i]), float(ys[i])), f"{int(tokens[i]):08x}")
        for i in range(dss)
    ]


def generate_queries(
    cfg: GridConfig,
    count: int,
    radius_range: tuple[float, float],
    seed: int,
) -> list[Disc]:
    """Generate disc queries with uniform radii, centered to fit in-world."""
    r_lo, r_hi = radius_range
    if not (0 < r_lo <= r_hi):
        raise DomainError(f"radius range must satisfy 0 < lo <= hi, got {radius_range}")
    if r_hi > min(cfg.width, cfg.height) / 2:
        raise DomainError(
            f"max radius {r_hi} exceeds half the world's shorter extent "
            f"({min(cfg.width, cfg.height) / 2}); discs could not fit in-world"
        )
    if count < 1:
        raise DomainError(f"query count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    radii = rng.uniform(r_lo, r_hi, count)
    px = rng.uniform(cfg.min_d + radii, cfg.max_d - radii)
    py = rng.uniform(cfg.min_h + radii, cfg.max_h - radii)
    return [Disc(Point(float(px[i]), float(py[i])), float(radii[i])) for i in range(count)]
