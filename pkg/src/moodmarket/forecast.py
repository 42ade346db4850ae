"""Rolling one-step-ahead forecasts from lagged linear models.

A baseline model uses only lags of the target; an augmented model adds lags
of exogenous series. At every test date the model is refitted on rows whose
response precedes that date (an expanding window), so a forecast never sees
data from its own date or later.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .econometrics import lagged_design, ols
from .errors import InputError, InsufficientHistory, RankDeficient, ZeroActual, ZeroVariance
from .timeseries import TimeSeries, format_value


@dataclass(frozen=True)
class ModelSpec:
    n_lags: int
    exogenous_names: tuple = ()
    standardize_inputs: bool = False

    def __post_init__(self):
        if self.n_lags < 1:
            raise InputError(f"n_lags must be at least 1, got {self.n_lags}")
        object.__setattr__(self, "exogenous_names", tuple(self.exogenous_names))

    @property
    def is_baseline(self) -> bool:
        return not self.exogenous_names

    @property
    def n_params(self) -> int:
        return 1 + self.n_lags * (1 + len(self.exogenous_names))


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, in percent."""
    a = np.asarray(actual, dtype=float).reshape(-1)
    p = np.asarray(predicted, dtype=float).reshape(-1)
    if a.size != p.size:
        raise InputError(f"length mismatch: {a.size} actuals, {p.size} predictions")
    if a.size == 0:
        raise InputError("mape needs at least one value")
    zero = np.flatnonzero(a == 0)
    if zero.size:
        raise ZeroActual(int(zero[0]))
    return float(np.sum(np.abs((a - p) / a)) / a.size * 100.0)


def direction_accuracy(actual, predicted) -> float:
    """Share of steps whose predicted change has the sign of the actual change.

    ``actual`` holds one more value than ``predicted``: its first entry is
    the anchor (last known value) for the first step. A step counts only if
    ``(pred[i] - actual[i]) * (actual[i+1] - actual[i]) > 0``.
    """
    a = np.asarray(actual, dtype=float).reshape(-1)
    p = np.asarray(predicted, dtype=float).reshape(-1)
    if a.size != p.size + 1:
        raise InputError(
            f"expected {p.size + 1} actual values (anchor plus one per step), got {a.size}"
        )
    if p.size == 0:
        raise InputError("direction accuracy needs at least one step")
    anchors = a[:-1]
    hits = (p - anchors) * (a[1:] - anchors) > 0
    return float(np.count_nonzero(hits)) / p.size


@dataclass(frozen=True, eq=False)
class ForecastReport:
    dates: tuple
    actuals: np.ndarray
    predictions: np.ndarray
    anchors: np.ndarray
    per_step_abs_pct_error: np.ndarray
    mape: float
    direction_accuracy: float
    spec: ModelSpec = field(default=None)

    def __eq__(self, other):
        if not isinstance(other, ForecastReport):
            return NotImplemented
        return (
            self.dates == other.dates
            and np.array_equal(self.actuals, other.actuals)
            and np.array_equal(self.predictions, other.predictions)
            and self.mape == other.mape
            and self.direction_accuracy == other.direction_accuracy
        )

    def to_dict(self):
        return {
            "n_lags": self.spec.n_lags if self.spec else None,
            "exogenous": list(self.spec.exogenous_names) if self.spec else [],
            "standardize_inputs": self.spec.standardize_inputs if self.spec else False,
            "mape": self.mape,
            "direction_accuracy": self.direction_accuracy,
            "steps": [
                {
                    "date": d.isoformat(),
                    "actual": float(a),
                    "predicted": float(p),
                    "previous": float(prev),
                    "abs_pct_error": float(e),
                }
                for d, a, p, prev, e in zip(
                    self.dates, self.actuals, self.predictions, self.anchors,
                    self.per_step_abs_pct_error,
                )
            ],
        }


def _stack_inputs(target: TimeSeries, exogenous: Mapping[str, TimeSeries], spec: ModelSpec):
    cols = [np.asarray(target.values, dtype=float)]
    for name in spec.exogenous_names:
        if name not in exogenous:
            raise InputError(f"exogenous series {name!r} not supplied")
        s = exogenous[name]
        if s.dates != target.dates:
            raise InputError(f"exogenous series {name!r} is not aligned with the target")
        cols.append(np.asarray(s.values, dtype=float))
    return np.vstack(cols)


def _standardize_rows(block: np.ndarray):
    mean = block.mean(axis=1)
    std = block.std(axis=1, ddof=1)
    if np.any(~(std > 0)):
        raise ZeroVariance("an input is constant over the training window")
    return mean, std


def rolling_one_step(
    target: TimeSeries,
    exogenous: Mapping[str, TimeSeries],
    spec: ModelSpec,
    test_window: int,
) -> ForecastReport:
    """Forecast each of the last ``test_window`` values one step ahead.

    With ``spec.standardize_inputs`` every input is scored with the mean and
    standard deviation of its values before the forecast date; predictions
    are mapped back to the target's original units before scoring.
    """
    data = _stack_inputs(target, exogenous, spec)
    n = data.shape[1]
    k = spec.n_lags
    if test_window < 1:
        raise InputError(f"test window must be positive, got {test_window}")
    if test_window >= n - k:
        raise InsufficientHistory(
            f"test window {test_window} leaves no training rows: {n} points, {k} lags"
        )
    first = n - test_window
    if first - k <= spec.n_params:
        raise InsufficientHistory(
            f"first forecast would be fitted on {first - k} rows for {spec.n_params} parameters"
        )

    preds = np.empty(test_window)
    for step, t in enumerate(range(first, n)):
        past = data[:, :t]
        if spec.standardize_inputs:
            try:
                mean, std = _standardize_rows(past)
            except ZeroVariance as exc:
                raise ZeroVariance(f"{exc} (forecast for {target.dates[t].isoformat()})") from None
            past = (past - mean[:, None]) / std[:, None]
        design = lagged_design(past[0], list(past[1:]), k)
        try:
            fit = ols(design.X, design.y, design.labels)
        except RankDeficient as exc:
            raise RankDeficient(exc.column, f"{exc.label}, refit for {target.dates[t].isoformat()}") from None
        row = np.concatenate([[1.0]] + [past[j, t - k : t][::-1] for j in range(past.shape[0])])
        yhat = float(row @ fit.coefficients)
        if spec.standardize_inputs:
            yhat = yhat * std[0] + mean[0]
        preds[step] = yhat

    actual = data[0, first:]
    anchors = data[0, first - 1 : n - 1]
    zero = np.flatnonzero(actual == 0)
    if zero.size:
        raise ZeroActual(int(zero[0]))
    errs = np.abs((actual - preds) / actual) * 100.0
    return ForecastReport(
        dates=target.dates[first:],
        actuals=actual,
        predictions=preds,
        anchors=anchors,
        per_step_abs_pct_error=errs,
        mape=mape(actual, preds),
        direction_accuracy=direction_accuracy(data[0, first - 1 :], preds),
        spec=spec,
    )


@dataclass(frozen=True, eq=False)
class ModelComparison:
    baseline: ForecastReport
    augmented: ForecastReport

    @property
    def dates(self):
        return self.baseline.dates

    def error_curves_csv(self) -> str:
        buf = io.StringIO()
        buf.write("date,model0_err,model1_err\n")
        for d, e0, e1 in zip(
            self.dates, self.baseline.per_step_abs_pct_error, self.augmented.per_step_abs_pct_error
        ):
            buf.write(f"{d.isoformat()},{format_value(e0)},{format_value(e1)}\n")
        return buf.getvalue()

    def to_dict(self):
        return {"model0": self.baseline.to_dict(), "model1": self.augmented.to_dict()}


def compare_models(
    target: TimeSeries,
    exogenous: Mapping[str, TimeSeries],
    spec0: ModelSpec,
    spec1: ModelSpec,
    test_window: int,
) -> ModelComparison:
    """Evaluate two specs over the same test dates."""
    return ModelComparison(
        rolling_one_step(target, exogenous, spec0, test_window),
        rolling_one_step(target, exogenous, spec1, test_window),
    )
