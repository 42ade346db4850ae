"""Dated document corpora, term lexicons and per-document scoring."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import CorpusFormatError, EmptyLexicon, InputError

_TOKEN_RE = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on every maximal run of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Document:
    date: date
    text: str
    source: str | None = None

    def __post_init__(self):
        if not isinstance(self.date, date):
            raise InputError(f"document date must be a date, got {self.date!r}")
        if not isinstance(self.text, str) or not self.text.strip():
            raise InputError("document text is empty")

    @cached_property
    def tokens(self) -> tuple:
        return tuple(tokenize(self.text))


@dataclass(frozen=True)
class Corpus:
    documents: tuple = ()

    def __post_init__(self):
        # stable sort keeps the file order of same-day documents
        object.__setattr__(self, "documents", tuple(sorted(self.documents, key=lambda d: d.date)))

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @cached_property
    def by_date(self) -> dict:
        days: dict = {}
        for doc in self.documents:
            days.setdefault(doc.date, []).append(doc)
        return days

    def between(self, start: date, end: date) -> "Corpus":
        return Corpus(tuple(d for d in self.documents if start <= d.date <= end))

    @property
    def span(self):
        if not self.documents:
            return None
        return self.documents[0].date, self.documents[-1].date


@dataclass(frozen=True)
class Lexicon:
    terms: frozenset
    name: str = ""
    _phrases: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = frozenset(self.terms)
        if not terms:
            raise EmptyLexicon(f"lexicon {self.name!r} has no terms")
        for t in terms:
            if not isinstance(t, str) or not t.strip():
                raise InputError(f"lexicon {self.name!r} contains an empty term")
            if t != t.lower() or t != t.strip():
                raise InputError(f"lexicon term {t!r} must be lowercase and trimmed")
            if not tokenize(t):
                raise InputError(f"lexicon term {t!r} contains no alphanumeric characters")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_phrases", {t: tuple(tokenize(t)) for t in terms})

    @classmethod
    def of(cls, *terms, name=""):
        return cls(frozenset(t.strip().lower() for t in terms), name)

    def __contains__(self, term):
        return term in self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def phrase(self, term: str) -> tuple:
        return self._phrases[term]


def load_lexicon(path, name: str | None = None) -> Lexicon:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read lexicon {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"lexicon {path} is not valid UTF-8") from exc
    terms = set()
    for line in lines:
        term = line.strip().lower()
        if term and not term.startswith("#"):
            terms.add(term)
    if not terms:
        raise EmptyLexicon(f"lexicon {path} has no terms")
    return Lexicon(frozenset(terms), name if name is not None else path.stem)


# --------------------------------------------------------------------------
# corpus files


def load_corpus(path) -> Corpus:
    """Read a ``.jsonl`` or ``.tsv`` corpus; bad records fail with their line number."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".jsonl", ".tsv"):
        raise InputError(f"{path}: corpus must be .jsonl or .tsv, got {suffix or 'no extension'!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read corpus {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"corpus {path} is not valid UTF-8") from exc
    parse = _parse_jsonl_line if suffix == ".jsonl" else _parse_tsv_line
    docs = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if suffix == ".tsv" and line_no == 1 and line.lower().startswith("date\t"):
            continue
        try:
            docs.append(parse(line))
        except (ValueError, KeyError, TypeError) as exc:
            raise CorpusFormatError(path, line_no, str(exc)) from None
    return Corpus(tuple(docs))


def _parse_date(raw) -> date:
    if not isinstance(raw, str):
        raise ValueError(f"date must be a YYYY-MM-DD string, got {raw!r}")
    try:
        return date.fromisoformat(raw.strip())
    except ValueError:
        raise ValueError(f"unparseable date {raw!r}") from None


def _parse_jsonl_line(line: str) -> Document:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc.msg}") from None
    if not isinstance(rec, dict):
        raise ValueError("record is not a JSON object")
    for key in ("date", "text"):
        if key not in rec:
            raise ValueError(f"missing field {key!r}")
    source = rec.get("source")
    if source is not None and not isinstance(source, str):
        raise ValueError("field 'source' must be a string")
    if not isinstance(rec["text"], str):
        raise ValueError("field 'text' must be a string")
    return Document(_parse_date(rec["date"]), rec["text"], source)


def _parse_tsv_line(line: str) -> Document:
    cols = line.split("\t")
    if len(cols) not in (2, 3):
        raise ValueError(f"expected 2 or 3 tab-separated columns, got {len(cols)}")
    source = cols[2] if len(cols) == 3 and cols[2] != "" else None
    return Document(_parse_date(cols[0]), cols[1], source)


def write_corpus(corpus: Corpus, path) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    lines = []
    for doc in corpus:
        if suffix == ".jsonl":
            rec = {"date": doc.date.isoformat(), "text": doc.text}
            if doc.source is not None:
                rec["source"] = doc.source
            lines.append(json.dumps(rec, ensure_ascii=False))
        elif suffix == ".tsv":
            fields = [doc.text] + ([doc.source] if doc.source is not None else [])
            if any(c in f for f in fields for c in "\t\n\r"):
                raise InputError("text with tabs or newlines cannot be written as TSV; use .jsonl")
            lines.append("\t".join([doc.date.isoformat()] + fields))
        else:
            raise InputError(f"{path}: corpus must be .jsonl or .tsv")
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="")


# --------------------------------------------------------------------------
# scoring


def negative_ratio(doc: Document, lex: Lexicon) -> float:
    """Share of the document's tokens that are lexicon terms; 0 for empty token lists."""
    tokens = doc.tokens
    if not tokens:
        return 0.0
    hits = sum(1 for t in tokens if t in lex.terms)
    return hits / len(tokens)


def _phrase_tokens(term: str) -> tuple:
    phrase = tuple(tokenize(term))
    if not phrase:
        raise InputError(f"term {term!r} contains no alphanumeric characters")
    return phrase


def count_phrase(tokens, phrase) -> int:
    """Occurrences of ``phrase`` as a contiguous run of ``tokens`` (overlaps counted)."""
    k = len(phrase)
    if k == 1:
        word = phrase[0]
        return sum(1 for t in tokens if t == word)
    return sum(1 for i in range(len(tokens) - k + 1) if tuple(tokens[i : i + k]) == phrase)


def contains_term(doc: Document, term: str) -> bool:
    phrase = _phrase_tokens(term)
    tokens = doc.tokens
    if len(phrase) == 1:
        return phrase[0] in tokens
    return count_phrase(tokens, phrase) > 0


def term_frequency_report(corpus: Corpus, lex: Lexicon, start: date, end: date) -> list:
    """(term, occurrences) over documents dated in [start, end], most frequent first."""
    if start > end:
        raise InputError(f"empty date window: {start} > {end}")
    counts: Counter = Counter({t: 0 for t in lex.terms})
    for doc in corpus:
        if start <= doc.date <= end:
            for t in lex.terms:
                counts[t] += count_phrase(doc.tokens, lex.phrase(t))
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def documents(records: Iterable[tuple]) -> Corpus:
    """Build a corpus from ``(date, text)`` or ``(date, text, source)`` tuples."""
    return Corpus(tuple(Document(*r) for r in records))
