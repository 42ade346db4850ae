"""Seeded synthetic data with known ground truth.

All randomness comes from SplitMix64 (Steele, Lea & Flood 2014), a counter
based 64-bit generator, so streams are identical on every platform:

    state_k  = seed + k * 0x9E3779B97F4A7C15          (mod 2**64, k = 1, 2, ...)
    z        = (state_k ^ (state_k >> 30)) * 0xBF58476D1CE4E5B9
    z        = (z ^ (z >> 27)) * 0x94D049BB133111EB
    output_k = z ^ (z >> 31)

Test vector: seed 1234567 yields 6457827717110365317, 3203168211198807973,
9817491932198370423, 4593380528125082431, 16408922859458223821.

Uniforms are ``((output >> 11) + 0.5) / 2**53`` (never exactly 0 or 1).
Gaussians use the Abramowitz & Stegun 26.2.23 rational inverse of the normal
CDF (absolute error below 4.5e-4) instead of a platform math library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .corpus import Corpus, Document, Lexicon, tokenize
from .errors import InvalidSpec
from .timeseries import Frequency, TimeSeries

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

# A&S 26.2.23
_C = (2.515517, 0.802853, 0.010328)
_D = (1.432788, 0.189269, 0.001308)

DEFAULT_START = date(2010, 7, 1)

NEUTRAL_WORDS = (
    "market", "today", "shares", "trading", "investors", "report", "week",
    "company", "price", "index", "session", "analysts", "quarter", "sector",
    "update", "morning", "outlook", "earnings", "traders", "street",
)
TOKENS_PER_DOC = 8


class SplitMix64:
    """Counter-based stream; ``next_*`` calls advance the counter."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK
        self.counter = 0

    def next_uint64(self, size: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + size + 1, dtype=np.uint64)
        self.counter += size
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + k * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))

    def uniform(self, size: int) -> np.ndarray:
        bits = self.next_uint64(size) >> np.uint64(11)
        return (bits.astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)

    def normal(self, size: int) -> np.ndarray:
        return inverse_normal_cdf(self.uniform(size))

    def below(self, n: int, size: int) -> np.ndarray:
        """Integers in [0, n) by scaling a uniform draw."""
        return np.minimum((self.uniform(size) * n).astype(np.int64), n - 1)


def splitmix64_reference(seed: int, count: int) -> list:
    """Scalar, pure-integer version of the generator (used to check the vectorised one)."""
    out, state = [], int(seed) & _MASK
    for _ in range(count):
        state = (state + GOLDEN_GAMMA) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * MIX1) & _MASK
        z = ((z ^ (z >> 27)) * MIX2) & _MASK
        out.append(z ^ (z >> 31))
    return out


def inverse_normal_cdf(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.where(p < 0.5, p, 1.0 - p)
    t = np.sqrt(-2.0 * np.log(q))
    x = t - (_C[0] + _C[1] * t + _C[2] * t * t) / (1.0 + _D[0] * t + _D[1] * t * t + _D[2] * t**3)
    return np.where(p < 0.5, -x, x)


# --------------------------------------------------------------------------
# coupled processes


@dataclass(frozen=True)
class VarSpec:
    coupling: float
    lag: int = 1
    noise_std: float = 1.0
    length: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.lag < 1:
            raise InvalidSpec(f"lag must be at least 1, got {self.lag}")
        if not self.length > 10 * self.lag:
            raise InvalidSpec(f"length {self.length} must exceed 10 * lag = {10 * self.lag}")
        if not (self.noise_std > 0 and math.isfinite(self.noise_std)):
            raise InvalidSpec(f"noise_std must be positive, got {self.noise_std}")
        if not math.isfinite(self.coupling):
            raise InvalidSpec("coupling must be finite")


def gen_coupled_pair(spec: VarSpec, start: date = DEFAULT_START):
    """``x`` white noise, ``y[t] = coupling * x[t-lag] + noise_std * e[t]``.

    The first ``length + lag`` normals of the stream drive x (the leading
    ``lag`` values are burn-in), the next ``length`` drive e.
    """
    rng = SplitMix64(spec.seed)
    x_full = rng.normal(spec.length + spec.lag)
    eps = rng.normal(spec.length)
    x = x_full[spec.lag :]
    y = spec.coupling * x_full[: spec.length] + spec.noise_std * eps
    return (
        TimeSeries.from_values(x, start, Frequency.DAILY, "x"),
        TimeSeries.from_values(y, start, Frequency.DAILY, "y"),
    )


def shuffled(s: TimeSeries, seed: int) -> TimeSeries:
    """Fisher-Yates permutation of the values, dates kept."""
    rng = SplitMix64(seed)
    vals = s.values.copy()
    n = vals.size
    u = rng.uniform(max(n - 1, 0))
    for i in range(n - 1, 0, -1):
        j = min(int(u[n - 1 - i] * (i + 1)), i)
        vals[i], vals[j] = vals[j], vals[i]
    return s.with_values(vals)


# --------------------------------------------------------------------------
# corpora


def _prob_by_date(series: TimeSeries, label: str) -> dict:
    if np.any(series.values < 0) or np.any(series.values > 1):
        raise InvalidSpec(f"{label} must lie in [0, 1]")
    return dict(series.pairs())


def gen_corpus(
    daily_doc_count: int,
    bull_prob_series: TimeSeries,
    lexicon: Lexicon,
    neg_prob_series: TimeSeries,
    seed: int,
) -> Corpus:
    """Synthetic message corpus over the dates of ``bull_prob_series``.

    Each document has ``TOKENS_PER_DOC`` tokens: first "bullish" (with the
    day's bull probability) or "bearish", then filler slots that are a
    uniformly chosen single-word lexicon term with the day's negative
    probability and a neutral word otherwise. Expected values are therefore
    ``TIS = bull_prob`` and ``NNS = neg_prob * (TOKENS_PER_DOC - 1) / TOKENS_PER_DOC``
    (see :func:`expected_nns`).
    """
    if daily_doc_count < 0:
        raise InvalidSpec(f"daily_doc_count must be non-negative, got {daily_doc_count}")
    bull = _prob_by_date(bull_prob_series, "bull probabilities")
    neg = _prob_by_date(neg_prob_series, "negative-term probabilities")
    words = sorted(t for t in lexicon.terms if len(tokenize(t)) == 1 and t == tokenize(t)[0])
    clash = set(words) & (set(NEUTRAL_WORDS) | {"bullish", "bearish"})
    if not words:
        raise InvalidSpec("lexicon needs at least one single-word term")
    if clash:
        raise InvalidSpec(f"lexicon overlaps the generator's fixed vocabulary: {sorted(clash)}")
    rng = SplitMix64(seed)
    slots = TOKENS_PER_DOC - 1
    docs = []
    for d in sorted(bull):
        if d not in neg:
            raise InvalidSpec(f"no negative-term probability for {d.isoformat()}")
        n = daily_doc_count
        tag_u = rng.uniform(n)
        neg_u = rng.uniform(n * slots).reshape(n, slots)
        pick_neg = rng.below(len(words), n * slots).reshape(n, slots)
        pick_neu = rng.below(len(NEUTRAL_WORDS), n * slots).reshape(n, slots)
        for i in range(n):
            tokens = ["bullish" if tag_u[i] < bull[d] else "bearish"]
            for j in range(slots):
                if neg_u[i, j] < neg[d]:
                    tokens.append(words[pick_neg[i, j]])
                else:
                    tokens.append(NEUTRAL_WORDS[pick_neu[i, j]])
            docs.append(Document(d, " ".join(tokens), "synth"))
    return Corpus(tuple(docs))


def expected_nns(neg_prob: float) -> float:
    return neg_prob * (TOKENS_PER_DOC - 1) / TOKENS_PER_DOC


def constant_series(value: float, days: int, start: date = DEFAULT_START) -> TimeSeries:
    return TimeSeries.from_values(np.full(days, float(value)), start)
