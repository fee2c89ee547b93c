"""Latency benchmark over the (model, dataset size, query rate) matrix.

Each matrix cell runs a closed batch: qps worker threads issue one disc
query each, concurrently, against a freshly built store of dss entities.
One warm-up pass is discarded, then `trials` timed passes run; the cell's
ATD (average time per delivery) is the mean per-query wall time across
every timed query.  Per-query elapsed time is measured inside the query
engine with perf_counter, so batch dispatch overhead is not charged.

Query mixes are derived from the base seed per qps level and reused
across dataset sizes, which keeps cost counters comparable column-wise:
with a fixed mix, issued counts must not depend on dss at all.

counters_only mode skips the warm-up and the timing entirely (atd and
trials are recorded as zero) and runs each query once; everything left
in the record is deterministic for a given seed.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .engine import ModelKind, query
from .errors import DomainError, IncompleteDataError
from .geometry import Disc, SpanMode
from .grid import GridConfig
from .store import Store
from .workload import derive_seed, generate_entities, generate_queries

DEFAULT_DSS_LIST = (10, 100, 1_000, 10_000, 100_000, 1_000_000)
DEFAULT_QPS_LIST = (1, 10, 100, 1_000, 10_000)

# Seed streams, so dataset and query-mix randomness never overlap.
_DATASET_STREAM = 1
_QUERY_STREAM = 2


@dataclass(frozen=True, slots=True)
class BenchRecord:
    """One matrix cell's outcome; atd is NaN when the cell failed."""

    model: ModelKind
    dss: int
    qps: int
    atd_seconds: float
    trials: int
    scanned_mean: float
    issued_mean: float

    @property
    def failed(self) -> bool:
        return math.isnan(self.atd_seconds)


@dataclass(frozen=True, slots=True)
class BenchMatrixSpec:
    """Everything a matrix run depends on, fixed up front."""

    models: tuple[ModelKind, ...] = (
        ModelKind.RAW,
        ModelKind.PROJECTION,
        ModelKind.GRID,
        ModelKind.GAIA,
    )
    dss_list: tuple[int, ...] = DEFAULT_DSS_LIST
    qps_list: tuple[int, ...] = DEFAULT_QPS_LIST
    trials: int = 5
    seed: int = 0
    radius_range: tuple[float, float] = (1.0, 5.0)
    mode: SpanMode = SpanMode.TIGHT
    exact: bool = True
    fan_out: int | None = None
    counters_only: bool = False

    def __post_init__(self) -> None:
        if not self.models:
            raise DomainError("at least one model is required")
        if not self.dss_list or any(d < 0 for d in self.dss_list):
            raise DomainError(f"dss_list must be non-empty and >= 0, got {self.dss_list}")
        if not self.qps_list or any(q < 1 for q in self.qps_list):
            raise DomainError(f"qps_list must be non-empty and >= 1, got {self.qps_list}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.fan_out is not None and self.fan_out < 1:
            raise DomainError(f"fan_out must be >= 1, got {self.fan_out}")


def run_cell(
    store: Store,
    queries: Sequence[Disc],
    model: ModelKind,
    *,
    trials: int,
    mode: SpanMode = SpanMode.TIGHT,
    exact: bool = True,
    fan_out: int | None = None,
    counters_only: bool = False,
) -> tuple[float, int, float, float]:
    """Run one cell; returns (atd_seconds, trials_used, scanned_mean, issued_mean)."""
    qps = len(queries)

    def one(q: Disc) -> tuple[float, int, int]:
        r = query(store, q, model, mode=mode, exact=exact, fan_out=fan_out)
        return r.elapsed_seconds, r.counters.entries_scanned, r.counters.queries_issued

    if counters_only:
        outcomes = [one(q) for q in queries]
        scanned = [o[1] for o in outcomes]
        issued = [o[2] for o in outcomes]
        return 0.0, 0, sum(scanned) / qps, sum(issued) / qps

    def one_pass() -> list[tuple[float, int, int]]:
        if qps == 1:
            return [one(queries[0])]
        with ThreadPoolExecutor(max_workers=qps, thread_name_prefix="gaia-bench") as pool:
            return list(pool.map(one, queries))

    one_pass()  # warm-up, discarded
    elapsed: list[float] = []
    scanned = []
    issued = []
    for _ in range(trials):
        for t, s, i in one_pass():
            elapsed.append(t)
            scanned.append(s)
            issued.append(i)
    n = len(elapsed)
    return sum(elapsed) / n, trials, sum(scanned) / n, sum(issued) / n


def run_matrix(
    mspec: BenchMatrixSpec,
    cfg: GridConfig,
    out_path: str | None = None,
    *,
    log: Callable[[str], None] | None = None,
) -> list[BenchRecord]:
    """Run the whole matrix, streaming CSV rows to out_path as cells finish.

    A failing cell is recorded with NaN measurements and the run carries
    on; the failure is reported through `log` when one is given.
    """
    mixes = {
        qps: generate_queries(
            cfg, qps, mspec.radius_range, derive_seed(mspec.seed, _QUERY_STREAM, qps)
        )
        for qps in mspec.qps_list
    }
    records: list[BenchRecord] = []
    fh = open(out_path, "w", encoding="utf-8", newline="") if out_path else None
    try:
        writer = None
        if fh is not None:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RECORD_HEADER)
            fh.flush()
        for dss in mspec.dss_list:
            entities = generate_entities(cfg, dss, derive_seed(mspec.seed, _DATASET_STREAM, dss))
            store = Store.build(entities, cfg)
            for model in mspec.models:
                for qps in mspec.qps_list:
                    try:
                        atd, used, scanned_mean, issued_mean = run_cell(
                            store,
                            mixes[qps],
                            model,
                            trials=mspec.trials,
                            mode=mspec.mode,
                            exact=mspec.exact,
                            fan_out=mspec.fan_out,
                            counters_only=mspec.counters_only,
                        )
                    except Exception as exc:  # noqa: BLE001 - cell isolation is the point
                        atd, used = float("nan"), 0
                        scanned_mean = issued_mean = float("nan")
                        if log:
                            log(f"cell failed: model={model.value} dss={dss} qps={qps}: {exc}")
                    rec = BenchRecord(
                        model=model,
                        dss=dss,
                        qps=qps,
                        atd_seconds=atd,
                        trials=used,
                        scanned_mean=scanned_mean,
                        issued_mean=issued_mean,
                    )
                    records.append(rec)
                    if writer is not None:
                        writer.writerow(_record_row(rec))
                        fh.flush()
                    if log and not rec.failed:
                        log(
                            f"model={model.value} dss={dss} qps={qps} "
                            f"atd={atd:.6f}s scanned={scanned_mean:.1f} issued={issued_mean:.1f}"
                        )
    finally:
        if fh is not None:
            fh.close()
    return records


RECORD_HEADER = ["model", "dss", "qps", "atd_seconds", "trials", "scanned_mean", "issued_mean"]


def _record_row(rec: BenchRecord) -> list[str]:
    return [
        rec.model.value,
        str(rec.dss),
        str(rec.qps),
        repr(rec.atd_seconds),
        str(rec.trials),
        repr(rec.scanned_mean),
        repr(rec.issued_mean),
    ]


def write_records(records: Sequence[BenchRecord], path: str) -> None:
    """Write records in the same CSV schema run_matrix streams."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_HEADER)
        for rec in records:
            writer.writerow(_record_row(rec))


def read_records(path: str) -> list[BenchRecord]:
    """Read a benchmark results CSV back into records."""
    out: list[BenchRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RECORD_HEADER:
            raise IncompleteDataError(
                f"{path}: expected header {','.join(RECORD_HEADER)!r}, got {header!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(RECORD_HEADER):
                raise IncompleteDataError(
                    f"{path}:{lineno}: expected {len(RECORD_HEADER)} fields, got {len(row)}"
                )
            try:
                out.append(
                    BenchRecord(
                        model=ModelKind(row[0]),
                        dss=int(row[1]),
                        qps=int(row[2]),
                        atd_seconds=float(row[3]),
                        trials=int(row[4]),
                        scanned_mean=float(row[5]),
                        issued_mean=float(row[6]),
                    )
                )
            except ValueError as exc:
                raise IncompleteDataError(f"{path}:{lineno}: bad field: {exc}") from exc
    return out
