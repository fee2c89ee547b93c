"""Cell-linearized geospatial storage and its evaluation pipeline."""

from .analysis import (
    EvaluationReport,
    FitFamily,
    FitResult,
    build_report,
    cqe,
    cqe_mean,
    fit_constant,
    fit_exp,
    fit_linear,
    fit_log,
    pue_classify,
    sqe,
)
from .bench import BenchMatrixSpec, BenchRecord, run_cell, run_matrix
from .engine import ModelKind, QueryResult, oracle, query
from .errors import (
    BuildError,
    ConfigError,
    DomainError,
    EmptyIntersectionError,
    GaiaError,
    IncompleteDataError,
)
from .geometry import Disc, GeoShape, Polygon, Rect, SpanMode, contains, parse_shape
from .grid import (
    DEFAULT_GRID,
    CellCoord,
    GridConfig,
    HashKey,
    Point,
    cell_of,
    cell_of_hash,
    hash_of,
    hash_of_cell,
)
from .segments import Segment, SegmentPlan, plan
from .store import CostCounters, Entity, Store, StoreKey, read_entities, write_entities
from .workload import WorkloadSpec, derive_seed, generate_entities, generate_queries

__version__ = "0.1.0"

__all__ = [
    "BenchMatrixSpec",
    "BenchRecord",
    "BuildError",
    "CellCoord",
    "ConfigError",
    "CostCounters",
    "DEFAULT_GRID",
    "Disc",
    "DomainError",
    "EmptyIntersectionError",
    "Entity",
    "EvaluationReport",
    "FitFamily",
    "FitResult",
    "GaiaError",
    "GeoShape",
    "GridConfig",
    "HashKey",
    "IncompleteDataError",
    "ModelKind",
    "Point",
    "Polygon",
    "QueryResult",
    "Rect",
    "Segment",
    "SegmentPlan",
    "SpanMode",
    "Store",
    "StoreKey",
    "WorkloadSpec",
    "build_report",
    "cell_of",
    "cell_of_hash",
    "contains",
    "cqe",
    "cqe_mean",
    "derive_seed",
    "fit_constant",
    "fit_exp",
    "fit_linear",
    "fit_log",
    "generate_entities",
    "generate_queries",
    "hash_of",
    "hash_of_cell",
    "oracle",
    "parse_shape",
    "plan",
    "pue_classify",
    "query",
    "read_entities",
    "run_cell",
    "run_matrix",
    "sqe",
    "write_entities",
]
