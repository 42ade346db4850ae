"""Daily sentiment indicators built from corpora, and composites of them.

Days without any qualifying documents are left out of the resulting series
(a gap) rather than being given a value; the timeseries module fills gaps
later if an analysis needs a regular axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .corpus import Corpus, Lexicon, contains_term
from .econometrics import pearson
from .errors import InputError, NoTermsSelected, ZeroVariance
from .timeseries import (
    DEFAULT_WEEK_ANCHOR,
    Frequency,
    TimeSeries,
    align_all,
    fit_standardization,
    to_weekly_mean,
)


class IndicatorKind(enum.Enum):
    NNS = "nns"
    TIS = "tis"
    TERM_VOLUME = "term_volume"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class IndicatorSeries:
    series: TimeSeries
    kind: IndicatorKind
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = self.series.values
        if self.kind in (IndicatorKind.NNS, IndicatorKind.TIS):
            if np.any(v < 0) or np.any(v > 1):
                raise InputError(f"{self.kind.value} values must lie in [0, 1]")
        elif self.kind is IndicatorKind.TERM_VOLUME:
            if np.any(v < 0) or np.any(v != np.floor(v)):
                raise InputError("term volumes must be non-negative integers")


def _days(start: date, end: date):
    if start > end:
        raise InputError(f"empty date window: {start} > {end}")
    d = start
    while d <= end:
        yield d
        d += timedelta(days=1)


def nns_daily(corpus: Corpus, lex: Lexicon, start: date, end: date) -> IndicatorSeries:
    """Negative news sentiment: mean per-document negative-token ratio per day."""
    pairs = []
    for d in _days(start, end):
        docs = corpus.by_date.get(d)
        if not docs:
            continue
        # exact rational mean, rounded once
        total = sum(
            (Fraction(sum(1 for t in doc.tokens if t in lex.terms), len(doc.tokens))
             for doc in docs if doc.tokens),
            Fraction(0),
        )
        pairs.append((d, float(total / len(docs))))
    series = TimeSeries.from_pairs(pairs, Frequency.DAILY, "nns")
    return IndicatorSeries(series, IndicatorKind.NNS, {"lexicon": lex.name})


def tis_daily(
    corpus: Corpus, start: date, end: date, bull_term: str = "bullish", bear_term: str = "bearish"
) -> IndicatorSeries:
    """Bullish share ``N_bull / (N_bull + N_bear)`` of term-tagged documents per day.

    A document mentioning both terms counts toward both. Days where neither
    term appears are gaps.
    """
    if not bull_term.strip() or not bear_term.strip():
        raise InputError("bull and bear terms must be non-empty")
    if bull_term.strip().lower() == bear_term.strip().lower():
        raise InputError("bull and bear terms must differ")
    pairs = []
    counts = {}
    for d in _days(start, end):
        docs = corpus.by_date.get(d, ())
        n_bull = sum(1 for doc in docs if contains_term(doc, bull_term))
        n_bear = sum(1 for doc in docs if contains_term(doc, bear_term))
        if n_bull + n_bear:
            pairs.append((d, n_bull / (n_bull + n_bear)))
            counts[d.isoformat()] = (n_bull, n_bear)
    series = TimeSeries.from_pairs(pairs, Frequency.DAILY, "tis")
    return IndicatorSeries(
        series, IndicatorKind.TIS, {"bull_term": bull_term, "bear_term": bear_term, "counts": counts}
    )


def term_volume_daily(corpus: Corpus, terms: Lexicon, start: date, end: date) -> dict:
    """Per-term daily count of documents mentioning the term.

    Days covered by the corpus but without a mention are 0; days with no
    documents at all are gaps.
    """
    pairs: dict = {t: [] for t in terms}
    for d in _days(start, end):
        docs = corpus.by_date.get(d)
        if not docs:
            continue
        for t in terms:
            phrase = terms.phrase(t)
            if len(phrase) == 1:
                hits = sum(1 for doc in docs if phrase[0] in doc.tokens)
            else:
                hits = sum(1 for doc in docs if contains_term(doc, t))
            pairs[t].append((d, float(hits)))
    return {
        t: IndicatorSeries(
            TimeSeries.from_pairs(pairs[t], Frequency.DAILY, t),
            IndicatorKind.TERM_VOLUME,
            {"term": t, "lexicon": terms.name},
        )
        for t in terms
    }


def composite_mean(series_set: Sequence[TimeSeries], rescale: bool = False, name="composite") -> TimeSeries:
    """Pointwise mean over the dates shared by all inputs.

    With ``rescale`` each input is converted to standard scores (over the
    shared dates) before averaging, for inputs measured on different scales.
    """
    if not series_set:
        raise InputError("composite_mean needs at least one series")
    aligned = align_all(list(series_set))
    mat = np.vstack([s.values for s in aligned])
    if rescale:
        rows = []
        for s, row in zip(aligned, mat):
            try:
                p = fit_standardization(row)
            except ZeroVariance:
                raise ZeroVariance(f"cannot rescale constant series {s.name!r}") from None
            rows.append((row - p.mean) / p.std)
        mat = np.vstack(rows)
    # anchored on the first input so identical inputs reproduce it exactly
    first = mat[0]
    values = np.array(
        [first[j] + math.fsum(mat[:, j] - first[j]) / mat.shape[0] for j in range(mat.shape[1])]
    )
    return TimeSeries(aligned[0].dates, values, aligned[0].frequency, name)


@dataclass(frozen=True, eq=False)
class TermSelection:
    terms: tuple
    composite: TimeSeries
    correlations: dict  # term -> (coefficient, p_value) for every candidate with variance


def select_terms_by_correlation(
    series_map: Mapping[str, TimeSeries],
    target: TimeSeries,
    alpha: float = 0.01,
    top_k: int | None = None,
    rescale: bool = False,
) -> TermSelection:
    """Keep the terms whose series correlate with ``target`` at p < alpha.

    With ``top_k`` only the strongest ``top_k`` by absolute coefficient are
    kept. Ordering (and tie-breaking) is by descending |r|, then term name.
    The composite is the mean of the kept series.
    """
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    if top_k is not None and top_k < 1:
        raise InputError(f"top_k must be positive, got {top_k}")
    correlations = {}
    for term in sorted(series_map):
        s = series_map[term]
        if s.dates != target.dates:
            raise InputError(f"series for {term!r} is not aligned with the target; align first")
        try:
            r = pearson(s, target)
        except ZeroVariance:
            continue
        correlations[term] = (r.coefficient, r.p_value)
    passing = [t for t, (_, p) in correlations.items() if p < alpha]
    passing.sort(key=lambda t: (-abs(correlations[t][0]), t))
    if top_k is not None:
        passing = passing[:top_k]
    if not passing:
        raise NoTermsSelected(f"no term correlates with the target at p < {alpha}")
    composite = composite_mean([series_map[t] for t in passing], rescale=rescale, name="composite")
    return TermSelection(tuple(passing), composite, correlations)


def weekly_composite(
    daily: Mapping[str, TimeSeries], week_anchor=DEFAULT_WEEK_ANCHOR, rescale: bool = False
) -> TimeSeries:
    """Weekly mean of each daily term series, then the mean across terms."""
    weekly = [to_weekly_mean(daily[t], week_anchor) for t in sorted(daily) if len(daily[t])]
    if not weekly:
        raise InputError("no term series with observations")
    return composite_mean(weekly, rescale=rescale, name="composite")
