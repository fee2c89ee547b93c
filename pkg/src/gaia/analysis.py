"""Turning benchmark records into the evaluation report.

Three summary metrics per model:

* SQE: mean ATD down the single-query column (qps = 1) of the matrix,
  i.e. latency across dataset sizes with no concurrency.
* CQE: the diagonal cells where dss = 10 * qps, so data volume and
  query pressure grow together; reported as the list and its mean.
* PUE: a growth-class verdict for ATD as a function of dss, chosen by
  least-squares fits of four curve families compared on their sum of
  squared error in the original (untransformed) y space.

Fit parameterizations:

* CONSTANT      y = a             (b unused, stored as 0)
* LINEAR        y = a*x + b
* LOGARITHMIC   y = a*ln(b*x), fitted as y = a*ln(x) + k with
                b = exp(k / a); when a == 0 the curve degenerates to
                the constant k, and b stores k itself.
* EXPONENTIAL   y = a*exp(b*x), fitted on ln(y); requires y > 0.

The classifier picks the family with minimal SSE, except for two
guards: a column whose total spread is small relative to its level is
called CONSTANT outright (a flat line can never win a raw SSE contest
against two-parameter families, which absorb noise), and a winner whose
coefficient of determination is below 0.5 is called QUASI_RANDOM.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .bench import BenchRecord
from .engine import ModelKind
from .errors import DomainError, IncompleteDataError

FLAT_SPREAD_FRACTION = 0.8
"""A column is flat when (max - min) <= this fraction of its mean level.

The two-parameter families always edge out the plain mean on noisy
data, so without this guard no measured column could ever classify as
constant.  0.8 keeps the guard well below genuinely growing columns
(a linear trend over several decades of x spreads by many times its
mean) while tolerating scheduler jitter on flat ones.
"""

MIN_R_SQUARED = 0.5
"""Best fits explaining less than this share of variance are quasi-random."""

MIN_PUE_POINTS = 4


class FitFamily(Enum):
    CONSTANT = "constant"
    LOGARITHMIC = "logarithmic"
    LINEAR = "linear"
    EXPONENTIAL = "exponential"
    QUASI_RANDOM = "quasi-random"


@dataclass(frozen=True, slots=True)
class FitResult:
    """One family's least-squares fit; sse and r2 are in original y space."""

    family: FitFamily
    a: float
    b: float
    sse: float
    r2: float


def _as_arrays(xs: Sequence[float], ys: Sequence[float], min_n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DomainError(f"xs and ys must be equal-length 1D sequences, got {x.shape} and {y.shape}")
    if x.size < min_n:
        raise DomainError(f"need at least {min_n} points, got {x.size}")
    if not (np.isfinite(x).all() and np.isfinite(y).all()):
        raise DomainError("fit inputs must be finite")
    return x, y


def _ols(u: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares (slope, intercept) of y against u via normal equations."""
    du = u - u.mean()
    sxx = float(du @ du)
    if sxx == 0.0:
        raise DomainError("degenerate fit: all x values identical")
    slope = float(du @ (y - y.mean())) / sxx
    return slope, float(y.mean() - slope * u.mean())


def _score(y: np.ndarray, pred: np.ndarray) -> tuple[float, float]:
    resid = y - pred
    sse = float(resid @ resid)
    dy = y - y.mean()
    sst = float(dy @ dy)
    if sst == 0.0:
        return sse, 1.0 if sse <= 1e-30 else 0.0
    return sse, 1.0 - sse / sst


def fit_constant(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Best constant y = a (the mean)."""
    _, y = _as_arrays(xs, ys, 1)
    a = float(y.mean())
    sse, r2 = _score(y, np.full_like(y, a))
    return FitResult(FitFamily.CONSTANT, a, 0.0, sse, r2)


def fit_linear(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least-squares line y = a*x + b."""
    x, y = _as_arrays(xs, ys, 2)
    a, b = _ols(x, y)
    sse, r2 = _score(y, a * x + b)
    return FitResult(FitFamily.LINEAR, a, b, sse, r2)


def fit_log(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least-squares y = a*ln(b*x); requires every x > 0.

    Fitted as y = a*ln(x) + k.  For a != 0, b = exp(k/a); for the
    degenerate a == 0 the reported b carries k itself.
    """
    x, y = _as_arrays(xs, ys, 2)
    if (x <= 0).any():
        raise DomainError("logarithmic fit requires all x > 0")
    a, k = _ols(np.log(x), y)
    if a == 0.0:
        b = k
    else:
        ratio = k / a
        b = math.exp(ratio) if ratio < 700 else math.inf
    sse, r2 = _score(y, a * np.log(x) + k)
    return FitResult(FitFamily.LOGARITHMIC, a, b, sse, r2)


def fit_exp(xs: Sequence[float], ys: Sequence[float]) -> FitResult:
    """Least-squares y = a*exp(b*x) via the log-linearization; requires y > 0."""
    x, y = _as_arrays(xs, ys, 2)
    if (y <= 0).any():
        raise DomainError("exponential fit requires all y > 0")
    b, ln_a = _ols(x, np.log(y))
    a = math.exp(ln_a)
    sse, r2 = _score(y, a * np.exp(np.minimum(b * x, 700.0)))
    return FitResult(FitFamily.EXPONENTIAL, a, b, sse, r2)


def predict(fit: FitResult, xs: Sequence[float]) -> np.ndarray:
    """Evaluate a fitted curve at the given x values."""
    x = np.asarray(xs, dtype=float)
    if fit.family is FitFamily.CONSTANT:
        return np.full_like(x, fit.a)
    if fit.family is FitFamily.LINEAR:
        return fit.a * x + fit.b
    if fit.family is FitFamily.LOGARITHMIC:
        if fit.a == 0.0:
            return np.full_like(x, fit.b)
        k = fit.a * math.log(fit.b) if math.isfinite(fit.b) else math.nan
        return fit.a * np.log(x) + k
    if fit.family is FitFamily.EXPONENTIAL:
        return fit.a * np.exp(np.minimum(fit.b * x, 700.0))
    raise DomainError(f"cannot predict with family {fit.family}")


def _is_flat(y: np.ndarray) -> bool:
    spread = float(y.max() - y.min())
    level = abs(float(y.mean()))
    return spread == 0.0 or spread <= FLAT_SPREAD_FRACTION * level


def pue_classify(xs: Sequence[float], ys: Sequence[float]) -> tuple[FitFamily, FitResult]:
    """Classify a latency-vs-size column into a growth family.

    Returns (verdict, winning fit).  The verdict can be QUASI_RANDOM
    while the fit still reports the least-bad family's parameters.

    A flat column short-circuits to CONSTANT; otherwise the least-sse
    family wins provided it explains enough variance.  When no family
    does, a column that is flat in all cells but the one farthest from
    the mean reads as CONSTANT (measured latencies routinely carry a
    single scheduler spike); anything else is QUASI_RANDOM.
    """
    x, y = _as_arrays(xs, ys, MIN_PUE_POINTS)
    if _is_flat(y):
        return FitFamily.CONSTANT, fit_constant(x, y)
    candidates = [fit_constant(x, y), fit_linear(x, y)]
    if (x > 0).all():
        candidates.append(fit_log(x, y))
    if (y > 0).all():
        candidates.append(fit_exp(x, y))
    best = min(candidates, key=lambda f: f.sse)
    if best.r2 < MIN_R_SQUARED:
        rest = np.delete(y, int(np.abs(y - y.mean()).argmax()))
        if _is_flat(rest):
            return FitFamily.CONSTANT, fit_constant(x, y)
        return FitFamily.QUASI_RANDOM, best
    return best.family, best


def _usable(records: Iterable[BenchRecord], model: ModelKind) -> list[BenchRecord]:
    return [r for r in records if r.model is model and not r.failed]


def pue_points(
    records: Iterable[BenchRecord], model: ModelKind, qps: int = 1
) -> tuple[list[float], list[float]]:
    """(dss, mean atd) pairs for one model at one qps level, sorted by dss.

    Multiple records for the same dss (e.g. concatenated runs) average.
    """
    by_dss: dict[int, list[float]] = {}
    for r in _usable(records, model):
        if r.qps == qps:
            by_dss.setdefault(r.dss, []).append(r.atd_seconds)
    if not by_dss:
        raise IncompleteDataError(f"no qps={qps} records for model {model.value!r}")
    xs = sorted(by_dss)
    return [float(d) for d in xs], [sum(by_dss[d]) / len(by_dss[d]) for d in xs]


def sqe(records: Iterable[BenchRecord], model: ModelKind, qps: int = 1) -> float:
    """Mean ATD of one model's qps=1 column across dataset sizes."""
    vals = [r.atd_seconds for r in _usable(records, model) if r.qps == qps]
    if not vals:
        raise IncompleteDataError(f"no qps={qps} records for model {model.value!r}")
    return sum(vals) / len(vals)


def cqe(
    records: Iterable[BenchRecord], model: ModelKind, ratio: int = 10
) -> list[tuple[int, float]]:
    """Diagonal cells dss = ratio * qps as (dss, atd), sorted by dss."""
    cells = sorted(
        (r.dss, r.atd_seconds)
        for r in _usable(records, model)
        if r.dss == ratio * r.qps
    )
    if not cells:
        raise IncompleteDataError(
            f"no diagonal dss = {ratio} * qps cells for model {model.value!r}"
        )
    return cells


def cqe_mean(records: Iterable[BenchRecord], model: ModelKind, ratio: int = 10) -> float:
    cells = cqe(records, model, ratio)
    return sum(v for _, v in cells) / len(cells)


@dataclass(frozen=True, slots=True)
class ModelTraits:
    """Static description of how a model stores and fetches data."""

    labeling: str
    data_type: str
    method: str


MODEL_TRAITS: dict[ModelKind, ModelTraits] = {
    ModelKind.RAW: ModelTraits(
        labeling="none",
        data_type="points, unsorted",
        method="full scan, filter every entity",
    ),
    ModelKind.PROJECTION: ModelTraits(
        labeling="x-axis cell index",
        data_type="points sorted by x cell",
        method="one column-band scan, then filter",
    ),
    ModelKind.GRID: ModelTraits(
        labeling="2D cell buckets",
        data_type="points bucketed per cell",
        method="one point get per bounding-box cell",
    ),
    ModelKind.GAIA: ModelTraits(
        labeling="row-major cell key",
        data_type="points sorted by cell key",
        method="one parallel range scan per covered row",
    ),
}

_REPORT_ORDER = (ModelKind.RAW, ModelKind.PROJECTION, ModelKind.GRID, ModelKind.GAIA)


@dataclass(frozen=True, slots=True)
class ModelReport:
    model: ModelKind
    traits: ModelTraits
    sqe_atd: float
    cqe_cells: tuple[tuple[int, float], ...]
    cqe_mean_atd: float
    pue_verdict: FitFamily
    fit: FitResult


@dataclass(frozen=True, slots=True)
class EvaluationReport:
    rows: tuple[ModelReport, ...]


def build_report(
    records: Sequence[BenchRecord], *, sqe_qps: int = 1, cqe_ratio: int = 10
) -> EvaluationReport:
    """Assemble per-model SQE, CQE, and PUE from benchmark records.

    Every model present must have a qps column for SQE with at least
    MIN_PUE_POINTS dataset sizes; a missing diagonal only blanks CQE.
    """
    if not records:
        raise IncompleteDataError("no benchmark records given")
    present = [m for m in _REPORT_ORDER if any(r.model is m for r in records)]
    rows = []
    for model in present:
        xs, ys = pue_points(records, model, sqe_qps)
        if len(xs) < MIN_PUE_POINTS:
            raise IncompleteDataError(
                f"model {model.value!r} has {len(xs)} qps={sqe_qps} points; "
                f"PUE needs >= {MIN_PUE_POINTS}"
            )
        verdict, fit = pue_classify(xs, ys)
        try:
            cells = tuple(cqe(records, model, cqe_ratio))
            mean_cqe = sum(v for _, v in cells) / len(cells)
        except IncompleteDataError:
            cells = ()
            mean_cqe = float("nan")
        rows.append(
            ModelReport(
                model=model,
                traits=MODEL_TRAITS[model],
                sqe_atd=sqe(records, model, sqe_qps),
                cqe_cells=cells,
                cqe_mean_atd=mean_cqe,
                pue_verdict=verdict,
                fit=fit,
            )
        )
    return EvaluationReport(rows=tuple(rows))


REPORT_CSV_HEADER = [
    "model",
    "labeling",
    "data_type",
    "method",
    "sqe_atd_seconds",
    "cqe_mean_atd_seconds",
    "pue_family",
    "fit_family",
    "fit_a",
    "fit_b",
    "fit_sse",
    "fit_r2",
]


def write_report_csv(report: EvaluationReport, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_CSV_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    row.model.value,
                    row.traits.labeling,
                    row.traits.data_type,
                    row.traits.method,
                    repr(row.sqe_atd),
                    repr(row.cqe_mean_atd),
                    row.pue_verdict.value,
                    row.fit.family.value,
                    repr(row.fit.a),
                    repr(row.fit.b),
                    repr(row.fit.sse),
                    repr(row.fit.r2),
                ]
            )


def format_report_text(report: EvaluationReport) -> str:
    """Human-readable table with one row per model."""
    headers = ["model", "sqe atd (s)", "cqe mean (s)", "pue", "labeling", "method"]
    body = [
        [
            row.model.value,
            f"{row.sqe_atd:.6g}",
            "n/a" if math.isnan(row.cqe_mean_atd) else f"{row.cqe_mean_atd:.6g}",
            row.pue_verdict.value,
            row.traits.labeling,
            row.traits.method,
        ]
        for row in report.rows
    ]
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(r[i].ljust(widths[i]) for i in range(len(headers))) for r in body]
    return "\n".join(lines)


def write_plot_data(
    records: Sequence[BenchRecord],
    report: EvaluationReport,
    out_dir: str,
    *,
    sqe_qps: int = 1,
) -> list[str]:
    """Per-model CSVs of (dss, measured atd, fitted atd) for plotting."""
    paths = []
    for row in report.rows:
        xs, ys = pue_points(records, row.model, sqe_qps)
        fitted = predict(row.fit, xs)
        path = os.path.join(out_dir, f"plotdata_{row.model.value}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["dss", "atd_seconds", "fitted_atd_seconds"])
            for x, y, f in zip(xs, ys, fitted):
                writer.writerow([int(x), repr(y), repr(float(f))])
        paths.append(path)
    return paths


def read_table_csv(path: str, model: ModelKind) -> list[BenchRecord]:
    """Read a latency table CSV: a dss column plus one ATD column per qps.

    Header must be ``dss`` followed by integer qps levels.  Cells are
    ATD seconds; trials is recorded as 0 and counters as NaN since a
    table carries no such detail.
    """
    out: list[BenchRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "dss" or len(header) < 2:
            raise IncompleteDataError(
                f"{path}: expected header 'dss,<qps>,...', got {header!r}"
            )
        try:
            qps_levels = [int(h) for h in header[1:]]
        except ValueError as exc:
            raise IncompleteDataError(f"{path}: non-integer qps column: {exc}") from exc
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise IncompleteDataError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                dss = int(row[0])
                for qps, cell in zip(qps_levels, row[1:]):
                    out.append(
                        BenchRecord(
                            model=model,
                            dss=dss,
                            qps=qps,
                            atd_seconds=float(cell),
                            trials=0,
                            scanned_mean=float("nan"),
                            issued_mean=float("nan"),
                        )
                    )
            except ValueError as exc:
                raise IncompleteDataError(f"{path}:{lineno}: bad field: {exc}") from exc
    if not out:
        raise IncompleteDataError(f"{path}: table has no data rows")
    return out
