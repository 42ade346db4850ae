"""Command-line front end.

Exit codes: 0 success, 1 computational error, 2 configuration or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import re
import sys
from datetime import date
from pathlib import Path

from . import tables
from .config import ANALYSIS_KINDS, Registry, RunConfig, load_config
from .corpus import Lexicon, load_lexicon, term_frequency_report, write_corpus
from .econometrics import cross_correlation, granger_table, multiple_lagged_regression, pearson
from .errors import InputError, MoodMarketError
from .forecast import ModelSpec, compare_models
from .synth import VarSpec, constant_series, gen_corpus, gen_coupled_pair
from .timeseries import align_all, log_transform, series_to_csv, standardize, write_series

log = logging.getLogger("moodmarket")


class StageError(MoodMarketError):
    def __init__(self, stage, exc):
        self.stage = stage
        self.cause = exc
        super().__init__(f"stage {stage!r} failed: {exc}")


# --------------------------------------------------------------------------
# output helpers


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, date):
        return obj.isoformat()
    if isinstance(obj, float) and obj != obj:
        return "nan"
    if isinstance(obj, float) and obj in (float("inf"), float("-inf")):
        return str(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


class Writer:
    """Writes files under the output directory and remembers what it wrote."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.files: list = []

    def text(self, rel: str, content: str) -> Path:
        path = self.root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8", newline="")
        self.files.append(rel)
        return path

    def json(self, rel: str, obj) -> Path:
        return self.text(rel, dump_json(obj))

    def manifest(self):
        out = {}
        for rel in sorted(set(self.files)):
            out[rel] = hashlib.sha256((self.root / rel).read_bytes()).hexdigest()
        return out


def slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_") or "term"


# --------------------------------------------------------------------------
# commands


def cmd_indicators(reg: Registry, w: Writer) -> list:
    built = reg.build_indicators()
    sections = []
    manifest = {}
    for name in sorted(built):
        s = built[name]
        if name.startswith("volume:"):
            rel = f"indicators/volume/{slug(name[7:])}.csv"
        else:
            rel = f"indicators/{slug(name)}.csv"
        w.text(rel, series_to_csv(s))
        manifest[name] = _gap_stats(s, reg, name)
        manifest[name]["file"] = rel
        if not len(s):
            log.warning("indicator %r is empty", name)
    ic = reg.cfg.indicators
    if "nns" in ic:
        corpus = reg.corpus(ic["nns"]["corpus"])
        lex = reg.lexicon(ic["nns"]["lexicon"])
        win = reg.window(corpus)
        report = term_frequency_report(corpus, lex, *win) if win else [(t, 0) for t in lex]
        w.json("indicators/nns_term_frequencies.json", [{"term": t, "count": c} for t, c in report])
        text = tables.term_frequency_text(report[:20], "Most frequent negative terms")
        w.text("indicators/nns_term_frequencies.txt", text)
        sections.append(text)
    w.json("indicators/manifest.json", {"indicators": manifest, "meta": reg.indicator_meta})
    return sections


def _gap_stats(s, reg, name):
    stats = {"n_points": len(s), "frequency": s.frequency.value}
    if len(s):
        stats["first"] = s.dates[0].isoformat()
        stats["last"] = s.dates[-1].isoformat()
        span = (s.dates[-1] - s.dates[0]).days // s.frequency.step.days + 1
        stats["interior_gaps"] = span - len(s)
    return stats


def _entries(cfg: RunConfig, kind, only=None):
    entries = cfg.entries(kind)
    if only:
        entries = [e for e in entries if e["name"] == only]
        if not entries:
            raise InputError(f"no {kind} analysis named {only!r} in the config")
    return entries


def cmd_correlate(reg, w, only=None) -> list:
    sections = []
    for e in _entries(reg.cfg, "correlate", only):
        rows = [str(r) for r in e["rows"]]
        cols = [str(c) for c in e.get("cols") or rows]
        cells, out = {}, []
        for r in rows:
            for c in cols:
                a, b = align_all([reg.for_analysis(r), reg.for_analysis(c)])
                cor = pearson(a, b)
                cells[(r, c)] = cor
                out.append({"row": r, "col": c, "r": cor.coefficient, "p_value": cor.p_value,
                            "n": cor.n, "stars": cor.stars})
        text = tables.correlation_table(rows, cols, cells, f"Pearson correlations [{e['name']}]")
        w.json(f"correlate/{e['name']}.json", {"name": e["name"], "cells": out})
        w.text(f"correlate/{e['name']}.txt", text)
        sections.append(text)
    return sections


def cmd_ccf(reg, w, only=None) -> list:
    sections = []
    for e in _entries(reg.cfg, "ccf", only):
        x, y = align_all([reg.for_analysis(str(e["x"])), reg.for_analysis(str(e["y"]))])
        cc = cross_correlation(x, y, int(e["max_lag"]), e.get("convention", "overlap"))
        text = tables.ccf_table(cc, str(e["x"]), str(e["y"]))
        w.json(f"ccf/{e['name']}.json", {"name": e["name"], "x": e["x"], "y": e["y"], "n": len(x),
                                         "peak_lag": cc.peak_lag, **cc.to_dict()})
        w.text(f"ccf/{e['name']}.txt", text)
        sections.append(text)
    return sections


def cmd_granger(reg, w, only=None) -> list:
    sections = []
    for e in _entries(reg.cfg, "granger", only):
        results = []
        for pair in e["pairs"]:
            if len(pair) != 2:
                raise InputError(f"analyses.granger.{e['name']}: pairs must have two names")
            xn, yn = str(pair[0]), str(pair[1])
            x, y = align_all([reg.for_analysis(xn), reg.for_analysis(yn)])
            results += granger_table(x, y, [int(k) for k in e["lags"]], (xn, yn))
        text = tables.granger_table_text(results, f"Granger causality p-values [{e['name']}]")
        w.json(f"granger/{e['name']}.json", {"name": e["name"], "results": [r.to_dict() for r in results]})
        w.text(f"granger/{e['name']}.txt", text)
        sections.append(text)
    return sections


def cmd_regress(reg, w, only=None) -> list:
    sections = []
    for e in _entries(reg.cfg, "regress", only):
        names = [str(e["target"])] + [str(n) for n in e["exogenous"]]
        aligned = align_all([reg.for_analysis(n) for n in names])
        if e.get("standardize", True):
            aligned = [standardize(s)[0] for s in aligned]
        mr = multiple_lagged_regression(
            aligned[0], dict(zip(names[1:], aligned[1:])), int(e["n_lags"]), target_name=names[0]
        )
        text = tables.regression_table(mr, f"Multiple regression on {names[0]} [{e['name']}]")
        w.json(f"regress/{e['name']}.json", {"name": e["name"], **mr.to_dict()})
        w.text(f"regress/{e['name']}.txt", text)
        sections.append(text)
    return sections


def cmd_forecast(reg, w, only=None) -> list:
    sections = []
    for e in _entries(reg.cfg, "forecast", only):
        tname = str(e["target"])
        exog_names = [str(n) for n in e.get("exogenous") or []]
        aligned = align_all([reg.for_analysis(n) for n in [tname] + exog_names])
        target = aligned[0]
        if e.get("log_target", True):
            target = log_transform(target)
        exog = dict(zip(exog_names, aligned[1:]))
        if e.get("log_exogenous", False):
            exog = {k: log_transform(v) for k, v in exog.items()}
        n_lags = int(e["n_lags"])
        std = bool(e.get("standardize", False))
        spec0 = ModelSpec(int(e.get("baseline_lags", n_lags)), (), std)
        spec1 = ModelSpec(n_lags, tuple(exog_names), std)
        cmp = compare_models(target, exog, spec0, spec1, int(e["test_window"]))
        text = tables.forecast_table([(tname, cmp)], f"One-step-ahead forecasts [{e['name']}]")
        w.json(f"forecast/{e['name']}.json", {"name": e["name"], "target": tname,
                                              "log_target": bool(e.get("log_target", True)),
                                              **cmp.to_dict()})
        w.text(f"forecast/{e['name']}.txt", text)
        w.text(f"forecast/{e['name']}_errors.csv", cmp.error_curves_csv())
        sections.append(text)
    return sections


ANALYSIS_COMMANDS = {
    "correlate": cmd_correlate,
    "ccf": cmd_ccf,
    "granger": cmd_granger,
    "regress": cmd_regress,
    "forecast": cmd_forecast,
}


def cmd_report(reg, w) -> list:
    """Every configured stage, in a fixed order, into one bundle."""
    sections = []
    stages = [("indicators", lambda: cmd_indicators(reg, w))] if reg.cfg.indicators else []
    stages += [(k, lambda k=k: ANALYSIS_COMMANDS[k](reg, w)) for k in ANALYSIS_KINDS if reg.cfg.entries(k)]
    for stage, run in stages:
        try:
            sections += run()
        except MoodMarketError as exc:
            raise StageError(stage, exc) from exc
    w.text("report.txt", "\n".join(sections))
    w.json("manifest.json", {
        "stages": [s for s, _ in stages],
        "filled_points": dict(sorted(reg.fill_counts.items())),
        "files": w.manifest(),
    })
    return sections


# --------------------------------------------------------------------------
# synthetic data and fixture


def cmd_synth_pair(args) -> None:
    x, y = gen_coupled_pair(VarSpec(args.coupling, args.lag, args.noise, args.length, args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_series(x, out / "x.csv")
    write_series(y, out / "y.csv")


def cmd_synth_corpus(args) -> None:
    lex = load_lexicon(args.lexicon) if args.lexicon else Lexicon.of("loss", "crisis", "cut", "downgrade")
    bull = constant_series(args.bull_prob, args.days)
    neg = constant_series(args.neg_prob, args.days)
    corpus = gen_corpus(args.docs, bull, lex, neg, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, out / "corpus.jsonl")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moodmarket", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("--config", required=True, help="YAML run configuration")
        sp.add_argument("--out", help="output directory (overrides config 'out')")
        sp.add_argument("--start", help="indicator window start, YYYY-MM-DD")
        sp.add_argument("--end", help="indicator window end, YYYY-MM-DD")
        sp.add_argument("--week-anchor", help="weekday ending each week (MON..SUN)")
        sp.add_argument("--no-fill", action="store_true", help="do not interpolate gaps before analyses")
        return sp

    with_config(sub.add_parser("indicators", help="build sentiment indicator CSVs"))
    for kind in ANALYSIS_KINDS:
        sp = with_config(sub.add_parser(kind, help=f"run the configured {kind} analyses"))
        sp.add_argument("--name", help="run only the analysis with this name")
    with_config(sub.add_parser("report", help="run every configured stage into one bundle"))

    sp = sub.add_parser("synth-pair", help="write a seeded coupled pair x.csv, y.csv")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--coupling", type=float, default=0.8)
    sp.add_argument("--lag", type=int, default=1)
    sp.add_argument("--noise", type=float, default=0.1)
    sp.add_argument("--length", type=int, default=300)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("synth-corpus", help="write a seeded synthetic corpus.jsonl")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--days", type=int, default=30)
    sp.add_argument("--docs", type=int, default=100, help="documents per day")
    sp.add_argument("--bull-prob", type=float, default=0.5)
    sp.add_argument("--neg-prob", type=float, default=0.1)
    sp.add_argument("--lexicon", help="lexicon file for negative terms")
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("make-fixture", help="write the bundled demonstration dataset")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", required=True)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "synth-pair":
            cmd_synth_pair(args)
            return 0
        if args.command == "synth-corpus":
            cmd_synth_corpus(args)
            return 0
        if args.command == "make-fixture":
            from .fixture import DEFAULT_SEED, write_fixture

            write_fixture(args.out, DEFAULT_SEED if args.seed is None else args.seed)
            return 0
        overrides = {"out": args.out, "start": args.start, "end": args.end, "week_anchor": args.week_anchor}
        if args.no_fill:
            overrides["fill_gaps"] = False
        if args.out:
            overrides["out"] = str(Path(args.out).resolve())
        cfg = load_config(args.config, overrides)
        reg = Registry(cfg)
        kinds = ANALYSIS_KINDS if args.command in ("report", "indicators") else (args.command,)
        reg.validate(kinds if args.command != "indicators" else ())
        w = Writer(cfg.out)
        if args.command == "indicators":
            cmd_indicators(reg, w)
        elif args.command == "report":
            sys.stdout.write("\n".join(cmd_report(reg, w)))
        else:
            sections = ANALYSIS_COMMANDS[args.command](reg, w, args.name)
            sys.stdout.write("\n".join(sections))
        return 0
    except InputError as exc:
        log.error("%s", exc)
        return 2
    except StageError as exc:
        log.error("%s", exc)
        return 2 if isinstance(exc.cause, InputError) else 1
    except MoodMarketError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
