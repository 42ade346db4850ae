"""Dated numeric series and the conditioning steps applied before analysis.

A ``TimeSeries`` is immutable: a tuple of strictly increasing ``datetime.date``
objects and a read-only float64 array of the same length. Missing observations
are represented by absent dates, never by NaN.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyIntersection,
    InputError,
    InsufficientLength,
    NonPositiveValue,
    SeriesFormatError,
    ZeroVariance,
)

WEEKDAYS = ("MON", "TUE", "WED", "THU", "FRI", "SAT", "SUN")
DEFAULT_WEEK_ANCHOR = 5  # Saturday-ending weeks


class Frequency(enum.Enum):
    DAILY = "daily"
    WEEKLY = "weekly"

    @property
    def step(self) -> timedelta:
        return timedelta(days=1 if self is Frequency.DAILY else 7)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    dates: tuple
    values: np.ndarray
    frequency: Frequency = Frequency.DAILY
    name: str = ""

    def __post_init__(self):
        dates = tuple(self.dates)
        values = np.array(self.values, dtype=float).reshape(-1)
        if len(dates) != values.size:
            raise InputError(f"{len(dates)} dates but {values.size} values")
        for d in dates:
            if not isinstance(d, date):
                raise InputError(f"not a date: {d!r}")
        for a, b in zip(dates, dates[1:]):
            if b <= a:
                raise InputError(f"dates not strictly increasing at {b.isoformat()}")
        if not np.all(np.isfinite(values)):
            bad = dates[int(np.flatnonzero(~np.isfinite(values))[0])]
            raise InputError(f"non-finite value at {bad.isoformat()}")
        if self.frequency is Frequency.WEEKLY:
            for a, b in zip(dates, dates[1:]):
                if (b - a).days % 7:
                    raise InputError(f"weekly series has off-week date {b.isoformat()}")
        values.setflags(write=False)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], frequency=Frequency.DAILY, name=""):
        pairs = sorted(pairs, key=lambda p: p[0])
        return cls(
            tuple(p[0] for p in pairs),
            np.array([p[1] for p in pairs], dtype=float),
            frequency,
            name,
        )

    @classmethod
    def from_values(cls, values, start=date(2010, 7, 1), frequency=Frequency.DAILY, name=""):
        """Convenience constructor: consecutive dates starting at ``start``."""
        values = np.asarray(values, dtype=float)
        step = frequency.step
        return cls(tuple(start + i * step for i in range(values.size)), values, frequency, name)

    def __len__(self):
        return len(self.dates)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.dates == other.dates
            and self.frequency is other.frequency
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        span = f"{self.dates[0]}..{self.dates[-1]}" if self.dates else "empty"
        label = f" {self.name!r}" if self.name else ""
        return f"TimeSeries{label}({self.frequency.value}, n={len(self)}, {span})"

    def with_values(self, values, name=None) -> "TimeSeries":
        return TimeSeries(self.dates, values, self.frequency, self.name if name is None else name)

    def renamed(self, name: str) -> "TimeSeries":
        return TimeSeries(self.dates, self.values, self.frequency, name)

    def between(self, start: date, end: date) -> "TimeSeries":
        keep = [i for i, d in enumerate(self.dates) if start <= d <= end]
        return TimeSeries(
            tuple(self.dates[i] for i in keep), self.values[keep], self.frequency, self.name
        )

    def pairs(self):
        return list(zip(self.dates, self.values.tolist()))

    def is_gap_free(self) -> bool:
        step = self.frequency.step
        return all(b - a == step for a, b in zip(self.dates, self.dates[1:]))


@dataclass(frozen=True)
class StandardizationParams:
    mean: float
    std: float = field(default=1.0)

    def __post_init__(self):
        if not (self.std > 0 and math.isfinite(self.std)):
            raise ZeroVariance(f"standard deviation must be positive, got {self.std}")


def parse_weekday(anchor) -> int:
    if isinstance(anchor, int):
        if not 0 <= anchor <= 6:
            raise InputError(f"weekday index out of range: {anchor}")
        return anchor
    key = str(anchor).strip().upper()[:3]
    if key not in WEEKDAYS:
        raise InputError(f"unknown weekday {anchor!r}; use one of {', '.join(WEEKDAYS)}")
    return WEEKDAYS.index(key)


# --------------------------------------------------------------------------
# conditioning operations


def fill_missing_linear(s: TimeSeries) -> TimeSeries:
    """Interpolate interior calendar gaps linearly between observed neighbours.

    Observed points are carried over untouched; nothing is invented before the
    first or after the last observation. Weekly series are filled at 7-day
    spacing.
    """
    if len(s) < 2:
        raise InsufficientLength(f"gap filling needs at least 2 points, got {len(s)}")
    step = s.frequency.step.days
    dates = [s.dates[0]]
    values = [float(s.values[0])]
    for (d0, v0), (d1, v1) in zip(s.pairs(), s.pairs()[1:]):
        gap = (d1 - d0).days // step
        for k in range(1, gap):
            dates.append(d0 + timedelta(days=k * step))
            values.append(v0 + (v1 - v0) * (k / gap))
        dates.append(d1)
        values.append(v1)
    return TimeSeries(tuple(dates), np.array(values), s.frequency, s.name)


def log_transform(s: TimeSeries) -> TimeSeries:
    _require_positive(s)
    return s.with_values(np.log(s.values))


def log_return(s: TimeSeries, dt: int = 1) -> TimeSeries:
    """``log S[t+dt] - log S[t]``, dated at ``t+dt``."""
    if dt < 1:
        raise InputError(f"dt must be a positive integer, got {dt}")
    if dt >= len(s):
        raise InsufficientLength(f"dt={dt} leaves no returns for a series of length {len(s)}")
    if not s.is_gap_free():
        raise InputError("log returns need a gap-free series; fill missing values first")
    _require_positive(s)
    logs = np.log(s.values)
    return TimeSeries(s.dates[dt:], logs[dt:] - logs[:-dt], s.frequency, s.name)


def to_weekly_mean(s: TimeSeries, week_anchor=DEFAULT_WEEK_ANCHOR) -> TimeSeries:
    """Average the present daily values of each week ending on ``week_anchor``.

    Weeks are labelled by their ending date; weeks with no observations are
    dropped.
    """
    if s.frequency is not Frequency.DAILY:
        raise InputError("to_weekly_mean expects a daily series")
    anchor = parse_weekday(week_anchor)
    buckets: dict = {}
    for d, v in s.pairs():
        end = d + timedelta(days=(anchor - d.weekday()) % 7)
        buckets.setdefault(end, []).append(v)
    ends = sorted(buckets)
    return TimeSeries(
        tuple(ends),
        np.array([_anchored_mean(buckets[e]) for e in ends]),
        Frequency.WEEKLY,
        s.name,
    )


def _anchored_mean(vals) -> float:
    # offset from the first value keeps constant buckets exact
    first = vals[0]
    return first + math.fsum(v - first for v in vals) / len(vals)


def standardize(s: TimeSeries, params: StandardizationParams | None = None):
    """Standard scores. Returns the scored series and the parameters used.

    Without ``params`` the sample mean and the n-1 standard deviation of ``s``
    are used; pass training-window parameters to score out-of-sample data.
    """
    if params is None:
        params = fit_standardization(s.values)
    return s.with_values((s.values - params.mean) / params.std), params


def fit_standardization(values) -> StandardizationParams:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise InsufficientLength(f"standardization needs at least 2 points, got {values.size}")
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1))
    if not std > 0:
        raise ZeroVariance("cannot standardize a constant series")
    return StandardizationParams(mean, std)


def moving_average(s: TimeSeries, window: int) -> TimeSeries:
    """Trailing mean over ``window`` points, current point included."""
    if window < 1:
        raise InputError(f"window must be positive, got {window}")
    if window > len(s):
        raise InsufficientLength(f"window {window} exceeds series length {len(s)}")
    means = np.lib.stride_tricks.sliding_window_view(s.values, window).mean(axis=1)
    return TimeSeries(s.dates[window - 1 :], means, s.frequency, s.name)


def align(a: TimeSeries, b: TimeSeries):
    a2, b2 = align_all([a, b])
    return a2, b2


def align_all(series: Sequence[TimeSeries]) -> list:
    """Restrict every series to the dates common to all of them."""
    if not series:
        return []
    freq = series[0].frequency
    for s in series[1:]:
        if s.frequency is not freq:
            raise InputError(
                f"cannot align {freq.value} series with {s.frequency.value} series "
                f"{s.name!r}; convert with to_weekly_mean first"
            )
    common = set(series[0].dates)
    for s in series[1:]:
        common &= set(s.dates)
    if not common:
        names = ", ".join(repr(s.name) for s in series if s.name) or "inputs"
        raise EmptyIntersection(f"no dates in common between {names}")
    out = []
    for s in series:
        idx = [i for i, d in enumerate(s.dates) if d in common]
        out.append(TimeSeries(tuple(s.dates[i] for i in idx), s.values[idx], freq, s.name))
    return out


def invert(s: TimeSeries) -> TimeSeries:
    return s.with_values(-s.values)


def _require_positive(s: TimeSeries):
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        i = int(bad[0])
        raise NonPositiveValue(s.dates[i], float(s.values[i]))


# --------------------------------------------------------------------------
# CSV I/O: header ``date,value``


def format_value(v: float) -> str:
    return repr(float(v))


def series_to_csv(s: TimeSeries) -> str:
    buf = io.StringIO()
    buf.write("date,value\n")
    for d, v in s.pairs():
        buf.write(f"{d.isoformat()},{format_value(v)}\n")
    return buf.getvalue()


def write_series(s: TimeSeries, path) -> None:
    Path(path).write_text(series_to_csv(s), encoding="utf-8", newline="")


def read_series(path, frequency: Frequency | str | None = None, name: str | None = None) -> TimeSeries:
    """Read a ``date,value`` CSV.

    The frequency is inferred when not given: weekly if every spacing is a
    multiple of seven days (and there are at least two spacings), else daily.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SeriesFormatError(f"cannot read series file {path}: {exc.strerror}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["date", "value"]:
        raise SeriesFormatError(f"{path}: expected header 'date,value'")
    pairs = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < 2:
            raise SeriesFormatError(f"{path}:{line_no}: expected two columns")
        try:
            d = date.fromisoformat(row[0].strip())
        except ValueError:
            raise SeriesFormatError(f"{path}:{line_no}: bad date {row[0]!r}") from None
        try:
            v = float(row[1])
        except ValueError:
            raise SeriesFormatError(f"{path}:{line_no}: bad value {row[1]!r}") from None
        if not math.isfinite(v):
            raise SeriesFormatError(f"{path}:{line_no}: non-finite value {row[1]!r}")
        pairs.append((d, v))
    dates = [p[0] for p in pairs]
    if len(set(dates)) != len(dates):
        raise SeriesFormatError(f"{path}: duplicate dates")
    if frequency is None:
        frequency = _infer_frequency(sorted(dates))
    elif isinstance(frequency, str):
        frequency = Frequency(frequency.lower())
    try:
        return TimeSeries.from_pairs(pairs, frequency, name if name is not None else path.stem)
    except InputError as exc:
        raise SeriesFormatError(f"{path}: {exc}") from None


def _infer_frequency(dates) -> Frequency:
    gaps = [(b - a).days for a, b in zip(dates, dates[1:])]
    if len(gaps) >= 2 and all(g % 7 == 0 for g in gaps):
        return Frequency.WEEKLY
    return Frequency.DAILY
