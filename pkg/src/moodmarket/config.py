"""Run configuration (YAML) and the named-series registry built from it.

Config layout (paths are relative to the config file)::

    out: results                 # output directory, overridden by --out
    start: 2010-07-01            # indicator window; defaults to the corpus span
    end: 2011-09-29
    week_anchor: SAT             # weekday that ends a week
    fill_gaps: true              # interpolate interior gaps before analyses

    inputs:
      corpora:  {tweets: tweets.jsonl, news: news.tsv}
      lexicons: {negative: negative.txt, terms: terms.txt}
      series:   {djia: djia.csv, gis: {path: gis.csv, frequency: weekly}}

    indicators:
      nns:     {corpus: news, lexicon: negative}
      tis:     {corpus: tweets, bull: bullish, bear: bearish}
      volumes: {corpus: tweets, lexicon: terms, rescale: false}
      select:  {name: tv_fst_prime, target: ret, alpha: 0.01, top_k: null}

    derived:
      ret: {from: djia, ops: [fill, log_return]}

    analyses:
      correlate: [{name: t8, rows: [tis, nns], cols: [ret, vix]}]
      ccf:       [{name: c1, x: gis, y: djia_w, max_lag: 5, convention: overlap}]
      granger:   [{name: g1, pairs: [[gis, vix_w]], lags: [1, 2, 3]}]
      regress:   [{name: r1, target: ret, exogenous: [tis, nns], n_lags: 7, standardize: true}]
      forecast:  [{name: f1, target: djia_w, exogenous: [gis], n_lags: 3, test_window: 20}]

Indicator outputs are available to analyses as ``nns``, ``tis``,
``tv_fst`` (daily mean of all term volumes), ``tv_fst_weekly``,
``volume:<term>`` and the ``select`` name. Derived ops: ``fill``, ``log``,
``log_return``, ``weekly`` (or ``weekly:SUN``), ``standardize``, ``invert``,
``ma:<window>``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import yaml

from . import indicators as ind
from .corpus import Corpus, Lexicon, load_corpus, load_lexicon
from .errors import InputError
from .timeseries import (
    DEFAULT_WEEK_ANCHOR,
    Frequency,
    TimeSeries,
    align_all,
    fill_missing_linear,
    invert,
    log_return,
    log_transform,
    moving_average,
    parse_weekday,
    read_series,
    standardize,
    to_weekly_mean,
)

log = logging.getLogger(__name__)

ANALYSIS_KINDS = ("correlate", "ccf", "granger", "regress", "forecast")
_TOP_KEYS = {"out", "start", "end", "week_anchor", "fill_gaps", "inputs", "indicators", "derived", "analyses"}
_REQUIRED = {
    "correlate": ("name", "rows"),
    "ccf": ("name", "x", "y", "max_lag"),
    "granger": ("name", "pairs", "lags"),
    "regress": ("name", "target", "exogenous", "n_lags"),
    "forecast": ("name", "target", "n_lags", "test_window"),
}


class ConfigError(InputError):
    pass


@dataclass
class SeriesInput:
    path: Path
    frequency: Frequency | None = None


@dataclass
class RunConfig:
    base_dir: Path
    out: Path
    start: date | None = None
    end: date | None = None
    week_anchor: int = DEFAULT_WEEK_ANCHOR
    fill_gaps: bool = True
    corpora: dict = field(default_factory=dict)
    lexicons: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    indicators: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    analyses: dict = field(default_factory=dict)

    def entries(self, kind):
        return self.analyses.get(kind, [])


def _as_date(value, key):
    if value is None or isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        raise ConfigError(f"{key}: expected YYYY-MM-DD, got {value!r}") from None


def _mapping(value, key) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"{key} must be a mapping")
    return value


def load_config(path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    base = path.parent.resolve()

    def resolve(p):
        p = Path(str(p))
        return p if p.is_absolute() else base / p

    inputs = _mapping(raw.get("inputs"), "inputs")
    cfg = RunConfig(
        base_dir=base,
        out=resolve(raw.get("out", "results")),
        start=_as_date(raw.get("start"), "start"),
        end=_as_date(raw.get("end"), "end"),
        week_anchor=parse_weekday(raw.get("week_anchor", DEFAULT_WEEK_ANCHOR)),
        fill_gaps=bool(raw.get("fill_gaps", True)),
        corpora={k: resolve(v) for k, v in _mapping(inputs.get("corpora"), "inputs.corpora").items()},
        lexicons={k: resolve(v) for k, v in _mapping(inputs.get("lexicons"), "inputs.lexicons").items()},
        indicators=_mapping(raw.get("indicators"), "indicators"),
        derived={},
        analyses={},
    )
    for name, spec in _mapping(inputs.get("series"), "inputs.series").items():
        if isinstance(spec, dict):
            freq = spec.get("frequency")
            cfg.series[name] = SeriesInput(resolve(spec["path"]), Frequency(freq) if freq else None)
        else:
            cfg.series[name] = SeriesInput(resolve(spec))
    for name, spec in _mapping(raw.get("derived"), "derived").items():
        spec = _mapping(spec, f"derived.{name}")
        if "from" not in spec:
            raise ConfigError(f"derived.{name}: missing 'from'")
        ops = [parse_op(op, f"derived.{name}") for op in spec.get("ops", [])]
        cfg.derived[name] = (str(spec["from"]), ops)
    analyses = _mapping(raw.get("analyses"), "analyses")
    for kind, entries in analyses.items():
        if kind not in ANALYSIS_KINDS:
            raise ConfigError(f"unknown analysis kind {kind!r}; use {', '.join(ANALYSIS_KINDS)}")
        if not isinstance(entries, list):
            raise ConfigError(f"analyses.{kind} must be a list")
        for i, e in enumerate(entries):
            if not isinstance(e, dict):
                raise ConfigError(f"analyses.{kind}[{i}] must be a mapping")
            missing = [k for k in _REQUIRED[kind] if k not in e]
            if missing:
                raise ConfigError(f"analyses.{kind}[{i}]: missing {', '.join(missing)}")
        names = [e["name"] for e in entries]
        if len(set(names)) != len(names):
            raise ConfigError(f"analyses.{kind}: duplicate names")
        cfg.analyses[kind] = entries
    if cfg.start and cfg.end and cfg.start > cfg.end:
        raise ConfigError(f"start {cfg.start} is after end {cfg.end}")
    return cfg


_OP_RE = re.compile(r"^(fill|log|log_return|standardize|invert|weekly|ma)(?::(\w+))?$")


def parse_op(op, where):
    m = _OP_RE.match(str(op).strip())
    if not m:
        raise ConfigError(f"{where}: unknown op {op!r}")
    kind, arg = m.groups()
    if kind == "ma":
        if not arg or not arg.isdigit() or int(arg) < 1:
            raise ConfigError(f"{where}: 'ma' needs a positive window, e.g. ma:30")
        return (kind, int(arg))
    if kind == "weekly":
        return (kind, parse_weekday(arg) if arg else None)
    if arg:
        raise ConfigError(f"{where}: op {kind!r} takes no argument")
    return (kind, None)


def referenced_series(cfg: RunConfig, kinds=ANALYSIS_KINDS) -> list:
    """Every (where, series name) an analysis of the given kinds will request."""
    refs = []
    for kind in kinds:
        for e in cfg.entries(kind):
            where = f"analyses.{kind}.{e['name']}"
            if kind == "correlate":
                names = list(e["rows"]) + list(e.get("cols") or [])
            elif kind == "ccf":
                names = [e["x"], e["y"]]
            elif kind == "granger":
                names = [n for pair in e["pairs"] for n in pair]
            else:
                names = [e["target"]] + list(e.get("exogenous") or [])
            refs += [(where, str(n)) for n in names]
    return refs


# --------------------------------------------------------------------------


class Registry:
    """Lazily builds and caches every named series a run can refer to."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._corpora: dict = {}
        self._lexicons: dict = {}
        self._cache: dict = {}
        self._busy: set = set()
        self.fill_counts: dict = {}
        self.indicator_meta: dict = {}

    # ---- inputs
    def corpus(self, key) -> Corpus:
        if key not in self._corpora:
            if key not in self.cfg.corpora:
                raise ConfigError(f"unknown corpus {key!r}")
            self._corpora[key] = load_corpus(self.cfg.corpora[key])
            if not len(self._corpora[key]):
                log.warning("corpus %r (%s) is empty", key, self.cfg.corpora[key])
        return self._corpora[key]

    def lexicon(self, key) -> Lexicon:
        if key not in self._lexicons:
            if key not in self.cfg.lexicons:
                raise ConfigError(f"unknown lexicon {key!r}")
            self._lexicons[key] = load_lexicon(self.cfg.lexicons[key], key)
        return self._lexicons[key]

    def window(self, corpus: Corpus):
        start, end = self.cfg.start, self.cfg.end
        span = corpus.span
        if span is None and (start is None or end is None):
            return None
        return (start or span[0], end or span[1])

    # ---- names
    def declared(self) -> set:
        names = set(self.cfg.series) | set(self.cfg.derived)
        ic = self.cfg.indicators
        if "nns" in ic:
            names.add("nns")
        if "tis" in ic:
            names.add("tis")
        if "volumes" in ic:
            names |= {"tv_fst", "tv_fst_weekly"}
            lex = self.lexicon(ic["volumes"]["lexicon"])
            names |= {f"volume:{t}" for t in lex.terms}
        if "select" in ic:
            names.add(ic["select"].get("name", "tv_fst_prime"))
        return names

    def validate(self, kinds=ANALYSIS_KINDS):
        """Check paths and name references before any computation runs."""
        for label, paths in (("corpus", self.cfg.corpora), ("lexicon", self.cfg.lexicons)):
            for key, p in paths.items():
                if not Path(p).is_file():
                    raise ConfigError(f"{label} {key!r}: file not found: {p}")
        for key, s in self.cfg.series.items():
            if not s.path.is_file():
                raise ConfigError(f"series {key!r}: file not found: {s.path}")
        ic = self.cfg.indicators
        unknown = set(ic) - {"nns", "tis", "volumes", "select"}
        if unknown:
            raise ConfigError(f"unknown indicator sections: {', '.join(sorted(unknown))}")
        for sec in ("nns", "tis", "volumes"):
            if sec in ic:
                spec = _mapping(ic[sec], f"indicators.{sec}")
                if spec.get("corpus") not in self.cfg.corpora:
                    raise ConfigError(f"indicators.{sec}: unknown corpus {spec.get('corpus')!r}")
                if sec != "tis" and spec.get("lexicon") not in self.cfg.lexicons:
                    raise ConfigError(f"indicators.{sec}: unknown lexicon {spec.get('lexicon')!r}")
        if "select" in ic and "volumes" not in ic:
            raise ConfigError("indicators.select needs indicators.volumes")
        declared = self.declared()
        refs = [(f"derived.{k}", src) for k, (src, _) in self.cfg.derived.items()]
        if "select" in ic:
            refs.append(("indicators.select", str(ic["select"].get("target"))))
        refs += referenced_series(self.cfg, kinds)
        for where, name in refs:
            if name not in declared:
                raise ConfigError(
                    f"{where}: series {name!r} is not defined; add it under inputs.series, "
                    "derived, or indicators"
                )

    def get(self, name: str) -> TimeSeries:
        if name in self._cache:
            return self._cache[name]
        if name in self._busy:
            raise ConfigError(f"circular definition involving {name!r}")
        self._busy.add(name)
        try:
            s = self._build(name)
        finally:
            self._busy.discard(name)
        self._cache[name] = s.renamed(name)
        return self._cache[name]

    def for_analysis(self, name: str) -> TimeSeries:
        """The named series with interior gaps interpolated (if enabled)."""
        s = self.get(name)
        if self.cfg.fill_gaps and len(s) >= 2 and not s.is_gap_free():
            filled = fill_missing_linear(s)
            n = len(filled) - len(s)
            if name not in self.fill_counts:
                log.info("filled %d missing points in %r", n, name)
            self.fill_counts[name] = n
            return filled
        return s

    def _build(self, name: str) -> TimeSeries:
        if name in self.cfg.series:
            s = self.cfg.series[name]
            return read_series(s.path, s.frequency, name)
        if name in self.cfg.derived:
            src, ops = self.cfg.derived[name]
            series = self.get(src)
            for kind, arg in ops:
                series = self.apply_op(series, kind, arg)
            return series
        built = self.build_indicators()
        if name in built:
            return built[name]
        raise ConfigError(f"series {name!r} is not defined")

    def apply_op(self, s, kind, arg):
        if kind == "fill":
            return fill_missing_linear(s)
        if kind == "log":
            return log_transform(s)
        if kind == "log_return":
            return log_return(s, 1)
        if kind == "standardize":
            return standardize(s)[0]
        if kind == "invert":
            return invert(s)
        if kind == "weekly":
            return to_weekly_mean(s, self.cfg.week_anchor if arg is None else arg)
        if kind == "ma":
            return moving_average(s, arg)
        raise ConfigError(f"unknown op {kind!r}")

    # ---- indicators
    def build_indicators(self) -> dict:
        """Compute every configured indicator (once) and return name -> series."""
        if "_indicators" in self._cache:
            return self._cache["_indicators"]
        ic = self.cfg.indicators
        out: dict = {}
        if "nns" in ic:
            spec = ic["nns"]
            corpus = self.corpus(spec["corpus"])
            lex = self.lexicon(spec["lexicon"])
            win = self.window(corpus)
            s = ind.nns_daily(corpus, lex, *win).series if win else _empty("nns")
            out["nns"] = s
            self.indicator_meta["nns"] = {"corpus": spec["corpus"], "lexicon": spec["lexicon"], "window": win}
        if "tis" in ic:
            spec = ic["tis"]
            corpus = self.corpus(spec["corpus"])
            win = self.window(corpus)
            bull, bear = spec.get("bull", "bullish"), spec.get("bear", "bearish")
            s = ind.tis_daily(corpus, *win, bull, bear).series if win else _empty("tis")
            out["tis"] = s
            self.indicator_meta["tis"] = {"corpus": spec["corpus"], "bull": bull, "bear": bear, "window": win}
        if "volumes" in ic:
            spec = ic["volumes"]
            corpus = self.corpus(spec["corpus"])
            lex = self.lexicon(spec["lexicon"])
            rescale = bool(spec.get("rescale", False))
            win = self.window(corpus)
            vols = {t: v.series for t, v in ind.term_volume_daily(corpus, lex, *win).items()} if win else {}
            for t in lex:
                out[f"volume:{t}"] = vols.get(t, _empty(t))
            if win and len(corpus.between(*win)):
                out["tv_fst"] = ind.composite_mean([vols[t] for t in sorted(vols)], rescale, "tv_fst")
                out["tv_fst_weekly"] = ind.weekly_composite(vols, self.cfg.week_anchor, rescale)
            else:
                out["tv_fst"] = _empty("tv_fst")
                out["tv_fst_weekly"] = _empty("tv_fst_weekly", Frequency.WEEKLY)
            self.indicator_meta["volumes"] = {
                "corpus": spec["corpus"], "lexicon": spec["lexicon"], "rescale": rescale, "window": win,
            }
        self._cache["_indicators"] = out
        if "select" in ic:
            spec = ic["select"]
            sel_name = spec.get("name", "tv_fst_prime")
            target = self.for_analysis(str(spec["target"]))
            terms = sorted(t for t in self.lexicon(ic["volumes"]["lexicon"]).terms)
            candidates = [self._filled(out[f"volume:{t}"]) for t in terms]
            present = [(t, s) for t, s in zip(terms, candidates) if len(s)]
            aligned = align_all([target] + [s for _, s in present])
            selection = ind.select_terms_by_correlation(
                {t: s for (t, _), s in zip(present, aligned[1:])},
                aligned[0],
                alpha=float(spec.get("alpha", 0.01)),
                top_k=spec.get("top_k"),
                rescale=bool(spec.get("rescale", False)),
            )
            out[sel_name] = selection.composite.renamed(sel_name)
            self.indicator_meta[sel_name] = {
                "target": str(spec["target"]),
                "alpha": float(spec.get("alpha", 0.01)),
                "top_k": spec.get("top_k"),
                "selected": list(selection.terms),
                "correlations": {t: {"r": r, "p": p} for t, (r, p) in selection.correlations.items()},
            }
        return out

    def _filled(self, s):
        if self.cfg.fill_gaps and len(s) >= 2 and not s.is_gap_free():
            return fill_missing_linear(s)
        return s


def _empty(name, frequency=Frequency.DAILY) -> TimeSeries:
    return TimeSeries((), [], frequency, name)
