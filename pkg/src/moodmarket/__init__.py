"""Text and volume sentiment indicators with an econometric battery for
testing them against market series."""

from .corpus import Corpus, Document, Lexicon, load_corpus, load_lexicon, tokenize
from .econometrics import (
    cross_correlation,
    granger,
    granger_table,
    lagged_design,
    multiple_lagged_regression,
    ols,
    pearson,
)
from .forecast import ModelSpec, compare_models, direction_accuracy, mape, rolling_one_step
from .indicators import (
    composite_mean,
    nns_daily,
    select_terms_by_correlation,
    term_volume_daily,
    tis_daily,
)
from .synth import SplitMix64, VarSpec, gen_corpus, gen_coupled_pair
from .timeseries import Frequency, TimeSeries, read_series, write_series

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "Frequency",
    "Lexicon",
    "ModelSpec",
    "SplitMix64",
    "TimeSeries",
    "VarSpec",
    "compare_models",
    "composite_mean",
    "cross_correlation",
    "direction_accuracy",
    "gen_corpus",
    "gen_coupled_pair",
    "granger",
    "granger_table",
    "lagged_design",
    "load_corpus",
    "load_lexicon",
    "mape",
    "multiple_lagged_regression",
    "nns_daily",
    "ols",
    "pearson",
    "read_series",
    "write_series",
    "rolling_one_step",
    "select_terms_by_correlation",
    "term_volume_daily",
    "tis_daily",
    "tokenize",
]
