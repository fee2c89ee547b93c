"""Grid configuration and cell-linearization key tests."""

from __future__ import annotations

import random

import pytest

from gaia.errors import ConfigError, DomainError
from gaia.grid import (
    DEFAULT_GRID,
    CellCoord,
    GridConfig,
    Point,
    cell_of,
    cell_of_hash,
    cell_origin,
    col_of,
    hash_of,
    hash_of_cell,
    read_grid_config,
    row_of,
    write_grid_config,
)


def test_default_grid_dimensions():
    cfg = DEFAULT_GRID
    assert (cfg.n_cols, cfg.n_rows, cfg.n_cells) == (10, 10, 100)
    assert cfg.width == 100.0 and cfg.height == 100.0


def test_cell_of_known_points():
    cfg = DEFAULT_GRID
    assert cell_of(Point(0.0, 0.0), cfg) == CellCoord(0, 0)
    assert cell_of(Point(35.0, 27.0), cfg) == CellCoord(3, 2)
    assert cell_of(Point(9.999, 9.999), cfg) == CellCoord(0, 0)
    assert cell_of(Point(10.0, 10.0), cfg) == CellCoord(1, 1)


def test_max_edge_belongs_to_last_cell():
    cfg = DEFAULT_GRID
    assert cell_of(Point(100.0, 100.0), cfg) == CellCoord(9, 9)
    assert cell_of(Point(100.0, 0.0), cfg) == CellCoord(9, 0)
    assert hash_of(Point(100.0, 100.0), cfg) == 99


def test_hash_of_cell_row_major():
    cfg = DEFAULT_GRID
    assert hash_of_cell(CellCoord(0, 0), cfg) == 0
    assert hash_of_cell(CellCoord(3, 2), cfg) == 23
    assert hash_of_cell(CellCoord(9, 9), cfg) == 99
    assert hash_of(Point(35.0, 27.0), cfg) == 23


def test_cell_of_hash_inverts_hash_of_cell():
    cfg = DEFAULT_GRID
    assert cell_of_hash(0, cfg) == CellCoord(0, 0)
    assert cell_of_hash(23, cfg) == CellCoord(3, 2)
    rng = random.Random(101)
    for _ in range(200):
        cc = CellCoord(rng.randrange(cfg.n_cols), rng.randrange(cfg.n_rows))
        assert cell_of_hash(hash_of_cell(cc, cfg), cfg) == cc


def test_keys_are_a_bijection_over_the_grid():
    for cfg in (
        GridConfig(0, 100, 0, 100, 7.0),
        GridConfig(-180, 180, -90, 90, 30.0),
        GridConfig(2.5, 9.5, -1.0, 3.0, 1.25),
    ):
        keys = {
            hash_of_cell(CellCoord(cx, cy), cfg)
            for cx in range(cfg.n_cols)
            for cy in range(cfg.n_rows)
        }
        assert keys == set(range(cfg.n_cells))


def test_rows_are_contiguous_key_runs():
    cfg = GridConfig(0, 100, 0, 50, 10.0)
    for cy in range(cfg.n_rows):
        row_keys = [hash_of_cell(CellCoord(cx, cy), cfg) for cx in range(cfg.n_cols)]
        assert row_keys == list(range(cy * cfg.n_cols, cy * cfg.n_cols + cfg.n_cols))


def test_points_in_one_cell_share_a_key():
    cfg = GridConfig(0, 100, 0, 100, 7.0)
    rng = random.Random(7)
    for _ in range(300):
        cx, cy = rng.randrange(cfg.n_cols), rng.randrange(cfg.n_rows)
        origin = cell_origin(CellCoord(cx, cy), cfg)
        # Half-open cells: stay strictly below the next boundary, and
        # inside the world for overhanging edge cells.
        x_hi = min(origin.x + cfg.cell_side, cfg.max_d)
        y_hi = min(origin.y + cfg.cell_side, cfg.max_h)
        p = Point(
            origin.x + rng.random() * (x_hi - origin.x) * 0.999,
            origin.y + rng.random() * (y_hi - origin.y) * 0.999,
        )
        assert cell_of(p, cfg) == CellCoord(cx, cy), f"point {p} left its cell"
        assert hash_of(p, cfg) == hash_of_cell(CellCoord(cx, cy), cfg)


def test_ceil_division_covers_ragged_worlds():
    cfg = GridConfig(0, 100, 0, 100, 7.0)
    assert cfg.n_cols == 15 and cfg.n_rows == 15
    assert cell_of(Point(100.0, 100.0), cfg) == CellCoord(14, 14)
    assert cell_of(Point(98.0, 99.0), cfg) == CellCoord(14, 14)
    # 100 / 0.05 suffers float dust; the cell count must still be exact.
    fine = GridConfig(0, 100, 0, 100, 0.05)
    assert fine.n_cols == 2000 and fine.n_rows == 2000


def test_negative_world_origin():
    cfg = GridConfig(-180, 180, -90, 90, 1.0)
    assert cfg.n_cols == 360 and cfg.n_rows == 180
    assert cell_of(Point(-180.0, -90.0), cfg) == CellCoord(0, 0)
    assert hash_of(Point(-180.0, -90.0), cfg) == 0
    assert cell_of(Point(180.0, 90.0), cfg) == CellCoord(359, 179)


def test_out_of_bounds_point_raises():
    cfg = DEFAULT_GRID
    with pytest.raises(DomainError, match="x=-0.1"):
        cell_of(Point(-0.1, 50.0), cfg)
    with pytest.raises(DomainError, match="y=100.5"):
        cell_of(Point(50.0, 100.5), cfg)


def test_bad_cells_and_keys_raise():
    cfg = DEFAULT_GRID
    with pytest.raises(DomainError):
        hash_of_cell(CellCoord(10, 0), cfg)
    with pytest.raises(DomainError):
        hash_of_cell(CellCoord(0, -1), cfg)
    with pytest.raises(DomainError):
        cell_of_hash(100, cfg)
    with pytest.raises(DomainError):
        cell_of_hash(-1, cfg)


def test_invalid_config_rejected():
    with pytest.raises(ConfigError):
        GridConfig(0, 0, 0, 100, 10.0)
    with pytest.raises(ConfigError):
        GridConfig(0, 100, 5, 5, 10.0)
    with pytest.raises(ConfigError):
        GridConfig(0, 100, 0, 100, 0.0)
    with pytest.raises(ConfigError):
        GridConfig(0, 100, 0, 10, 11.0)


def test_config_file_round_trip(tmp_path):
    cfg = GridConfig(-12.5, 87.5, 3.0, 53.0, 2.5)
    path = str(tmp_path / "grid.cfg")
    write_grid_config(cfg, path)
    assert read_grid_config(path) == cfg


def test_config_file_errors(tmp_path):
    path = tmp_path / "grid.cfg"
    path.write_text("min_d = 0\nmax_d = 100\nmin_h = 0\n")
    with pytest.raises(ConfigError, match="missing keys"):
        read_grid_config(str(path))
    path.write_text("min_d = 0\nbogus = 1\n")
    with pytest.raises(ConfigError, match="unknown key"):
        read_grid_config(str(path))
    path.write_text("min_d = 0\nmin_d = 1\n")
    with pytest.raises(ConfigError, match="duplicate"):
        read_grid_config(str(path))
    path.write_text("min_d zero\n")
    with pytest.raises(ConfigError, match="expected"):
        read_grid_config(str(path))


def test_config_file_comments_and_blanks(tmp_path):
    path = tmp_path / "grid.cfg"
    path.write_text(
        "# world bounds\nmin_d = 0\nmax_d = 100  # inclusive\n\nmin_h = 0\nmax_h = 50\ncell_side = 5\n"
    )
    cfg = read_grid_config(str(path))
    assert cfg == GridConfig(0, 100, 0, 50, 5.0)


def test_axis_helpers_match_cell_of():
    cfg = GridConfig(0, 100, 0, 100, 9.0)
    rng = random.Random(55)
    for _ in range(100):
        p = Point(rng.uniform(0, 100), rng.uniform(0, 100))
        assert cell_of(p, cfg) == CellCoord(col_of(p.x, cfg), row_of(p.y, cfg))
