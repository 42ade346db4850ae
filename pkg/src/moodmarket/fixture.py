"""Small seeded dataset for demonstrating and regression-testing the pipeline.

A latent daily mood process drives bullish/bearish tagging and the rate of
financial and negative terms in two synthetic corpora, and (one day later)
market log returns. A separate weekly world has a search-volume index that
leads weekly prices, and a survey index that lags volatility. None of it is
real data.
"""

from __future__ import annotations

from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .corpus import Lexicon, write_corpus
from .synth import SplitMix64, gen_corpus
from .timeseries import Frequency, TimeSeries, write_series

DEFAULT_SEED = 20110805
DAILY_START = date(2010, 7, 1)
DAILY_DAYS = 150
WEEKLY_END = date(2011, 10, 1)
WEEKS = 120

NEGATIVE_TERMS = ("downgrade", "cut", "crisis", "losses", "loss", "fears", "default", "slump", "recession")
SEARCH_TERMS = (
    "djia", "dow", "dow jones", "stock", "stock market", "sp500", "finance",
    "financial news", "wall street", "bear market", "crash", "decline",
)

CONFIG = """\
# Demonstration run over the bundled synthetic dataset.
out: results
start: 2010-07-01
end: 2010-11-27
week_anchor: SAT
fill_gaps: true

inputs:
  corpora:
    tweets: tweets.jsonl
    news: news.tsv
  lexicons:
    negative: negative.txt
    terms: terms.txt
  series:
    djia: djia.csv
    vix: vix.csv
    volume: volume.csv
    dsi: dsi.csv
    gis_w: {path: gis_weekly.csv, frequency: weekly}
    djia_w: {path: djia_weekly.csv, frequency: weekly}
    vix_w: {path: vix_weekly.csv, frequency: weekly}
    volume_w: {path: volume_weekly.csv, frequency: weekly}
    ii_w: {path: ii_weekly.csv, frequency: weekly}

indicators:
  nns: {corpus: news, lexicon: negative}
  tis: {corpus: tweets, bull: bullish, bear: bearish}
  volumes: {corpus: tweets, lexicon: terms, rescale: false}
  select: {name: tv_fst_prime, target: ret, alpha: 0.05, top_k: 4}

derived:
  djia_f: {from: djia, ops: [fill]}
  vix_f: {from: vix, ops: [fill]}
  volume_f: {from: volume, ops: [fill]}
  ret: {from: djia, ops: [fill, log_return]}
  gis_log: {from: gis_w, ops: [log]}
  djia_w_log: {from: djia_w, ops: [log]}
  vix_w_log: {from: vix_w, ops: [log]}
  volume_w_log: {from: volume_w, ops: [log]}
  tis_smooth_inv: {from: tis, ops: [fill, standardize, invert, "ma:30"]}

analyses:
  correlate:
    - {name: weekly_search, rows: [gis_log], cols: [vix_w_log, djia_w_log, volume_w_log]}
    - {name: sentiment, rows: [tis, nns, tv_fst, dsi]}
    - {name: sentiment_market, rows: [tis, nns, tv_fst, dsi], cols: [djia_f, ret, volume_f, vix_f]}
  ccf:
    - {name: search_djia, x: gis_log, y: djia_w_log, max_lag: 5, convention: overlap}
    - {name: search_vix, x: gis_log, y: vix_w_log, max_lag: 5, convention: full}
  granger:
    - name: weekly
      pairs: [[vix_w, gis_w], [vix_w, ii_w], [djia_w, gis_w], [volume_w, gis_w]]
      lags: [1, 2, 3]
    - name: daily
      pairs: [[tis, ret], [nns, ret], [dsi, ret], [tv_fst_prime, ret]]
      lags: [1, 2, 3, 4, 5]
  regress:
    - {name: daily_returns, target: ret, exogenous: [tis, nns, dsi, vix_f, tv_fst_prime], n_lags: 7, standardize: true}
  forecast:
    - {name: weekly_djia, target: djia_w, exogenous: [gis_w], n_lags: 3, test_window: 20, log_exogenous: true}
    - {name: weekly_volume, target: volume_w, exogenous: [gis_w], n_lags: 2, test_window: 20, log_exogenous: true}
    - {name: weekly_vix, target: vix_w, exogenous: [gis_w], n_lags: 3, test_window: 20, log_exogenous: true}
    - {name: daily_djia, target: djia_f, exogenous: [tis, nns, tv_fst, dsi], n_lags: 7, test_window: 30}
"""


def _logistic(z):
    return 1.0 / (1.0 + np.exp(-z))


def _ar1(rng: SplitMix64, n: int, phi: float, burn: int = 50) -> np.ndarray:
    e = rng.normal(n + burn) * np.sqrt(1 - phi * phi)
    out = np.empty(n + burn)
    out[0] = e[0]
    for t in range(1, n + burn):
        out[t] = phi * out[t - 1] + e[t]
    return out[burn:]


def _weekday_series(dates, values, name, digits):
    pairs = [(d, round(float(v), digits)) for d, v in zip(dates, values) if d.weekday() < 5]
    return TimeSeries.from_pairs(pairs, Frequency.DAILY, name)


def build_daily(seed: int):
    rng = SplitMix64(seed)
    n = DAILY_DAYS
    dates = [DAILY_START + timedelta(days=i) for i in range(n)]
    mood = _ar1(rng, n, 0.8)
    z_ret, z_vix, z_vol, z_dsi = (rng.normal(n) for _ in range(4))
    fear = _logistic(-1.5 * mood)

    ret = np.zeros(n)
    ret[1:] = 0.004 * mood[:-1] + 0.006 * z_ret[1:]
    djia = 10000.0 * np.exp(np.cumsum(ret))
    vix = 20.0 * np.exp(-0.15 * mood + 0.05 * z_vix)
    volume = 4.0e9 * np.exp(0.3 * fear + 0.1 * z_vol)
    dsi = 100.0 * _logistic(0.8 * mood + 0.5 * z_dsi)

    bull = TimeSeries(tuple(dates), _logistic(1.2 * mood))
    tweets = gen_corpus(
        30, bull, Lexicon(frozenset(SEARCH_TERMS), "terms"),
        TimeSeries(tuple(dates), 0.04 + 0.3 * fear), seed + 1,
    )
    news = gen_corpus(
        12, TimeSeries(tuple(dates), np.full(n, 0.5)), Lexicon(frozenset(NEGATIVE_TERMS), "negative"),
        TimeSeries(tuple(dates), 0.03 + 0.3 * fear), seed + 2,
    )
    series = {
        "djia": _weekday_series(dates, djia, "djia", 2),
        "vix": _weekday_series(dates, vix, "vix", 2),
        "volume": _weekday_series(dates, volume, "volume", 0),
        "dsi": TimeSeries(tuple(dates), np.round(dsi, 1), Frequency.DAILY, "dsi"),
    }
    return series, tweets, news


def build_weekly(seed: int):
    rng = SplitMix64(seed)
    n = WEEKS
    first = WEEKLY_END - timedelta(weeks=n - 1)
    dates = tuple(first + timedelta(weeks=i) for i in range(n))
    attention = _ar1(rng, n, 0.85)
    z_gis, z_ret, z_vix, z_vol, z_ii = (rng.normal(n) for _ in range(5))
    gis = 50.0 * np.exp(0.3 * attention + 0.05 * z_gis)

    ret = np.zeros(n)
    ret[1:] = -0.02 * attention[:-1] + 0.01 * z_ret[1:]
    djia = 11000.0 * np.exp(np.cumsum(ret))
    vix = np.empty(n)
    vix[0] = 20.0
    vix[1:] = 20.0 * np.exp(0.2 * attention[:-1] + 0.05 * z_vix[1:])
    volume = np.empty(n)
    volume[0] = 2.0e10
    volume[1:] = 2.0e10 * np.exp(0.15 * attention[:-1] + 0.08 * z_vol[1:])
    ii = np.empty(n)
    ii[0] = 45.0
    ii[1:] = 45.0 - 20.0 * np.log(vix[:-1] / 20.0) + 2.0 * z_ii[1:]

    def weekly(values, name, digits):
        return TimeSeries(dates, np.round(values, digits), Frequency.WEEKLY, name)

    return {
        "gis_weekly": weekly(gis, "gis_w", 1),
        "djia_weekly": weekly(djia, "djia_w", 2),
        "vix_weekly": weekly(vix, "vix_w", 2),
        "volume_weekly": weekly(volume, "volume_w", 0),
        "ii_weekly": weekly(ii, "ii_w", 1),
    }


def write_fixture(out, seed: int = DEFAULT_SEED) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    daily, tweets, news = build_daily(seed)
    weekly = build_weekly(seed + 100)
    for name, s in {**daily, **weekly}.items():
        write_series(s, out / f"{name}.csv")
    write_corpus(tweets, out / "tweets.jsonl")
    write_corpus(news, out / "news.tsv")
    (out / "negative.txt").write_text(
        "# negative financial terms\n" + "\n".join(sorted(NEGATIVE_TERMS)) + "\n", encoding="utf-8"
    )
    (out / "terms.txt").write_text(
        "# financial search terms\n" + "\n".join(sorted(SEARCH_TERMS)) + "\n", encoding="utf-8"
    )
    (out / "config.yaml").write_text(CONFIG, encoding="utf-8")
    return out


def fixture_dir() -> Path:
    """Location of the copy shipped with the package."""
    return Path(__file__).parent / "data" / "fixture"
