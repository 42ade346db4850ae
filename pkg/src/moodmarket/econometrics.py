"""Correlation, cross-correlation, least squares and Granger causality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .distributions import f_sf, t_sf_two_sided
from .errors import InputError, InsufficientLength, RankDeficient, ZeroVariance
from .timeseries import TimeSeries

# Columns whose QR pivot falls below this fraction of their own norm are
# treated as linear combinations of the preceding columns.
RANK_TOL = 1e-10


def stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def _as_array(s) -> np.ndarray:
    if isinstance(s, TimeSeries):
        return np.asarray(s.values, dtype=float)
    return np.asarray(s, dtype=float).reshape(-1)


def _check_aligned(*series):
    ts = [s for s in series if isinstance(s, TimeSeries)]
    for s in ts[1:]:
        if s.dates != ts[0].dates:
            raise InputError(
                f"series {ts[0].name!r} and {s.name!r} are not aligned; call align() first"
            )
    lengths = {len(_as_array(s)) for s in series}
    if len(lengths) > 1:
        raise InputError(f"series lengths differ: {sorted(lengths)}")


# --------------------------------------------------------------------------
# correlation


class Correlation(NamedTuple):
    coefficient: float
    p_value: float
    n: int

    @property
    def stars(self):
        return stars(self.p_value)


def _corr(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    saa = float(np.dot(da, da))
    sbb = float(np.dot(db, db))
    if saa == 0.0 or sbb == 0.0:
        raise ZeroVariance("correlation undefined for a constant series")
    r = float(np.dot(da, db)) / math.sqrt(saa * sbb)
    return min(1.0, max(-1.0, r))


def pearson(x, y) -> Correlation:
    """Sample correlation with a two-sided t-test p-value on n-2 df."""
    _check_aligned(x, y)
    a, b = _as_array(x), _as_array(y)
    n = a.size
    if n < 3:
        raise InsufficientLength(f"pearson needs at least 3 points, got {n}")
    r = _corr(a, b)
    if abs(r) == 1.0:
        return Correlation(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return Correlation(r, t_sf_two_sided(t, n - 2), n)


@dataclass(frozen=True)
class CrossCorrelation:
    """``coefficients[i]`` is corr(x[t+k], y[t]) at ``k = lags[i]``.

    A peak at positive k means y leads x by k steps.
    """

    lags: np.ndarray
    coefficients: np.ndarray
    convention: str = "overlap"

    def at(self, k: int) -> float:
        idx = np.flatnonzero(self.lags == k)
        if not idx.size:
            raise KeyError(k)
        return float(self.coefficients[idx[0]])

    @property
    def peak_lag(self) -> int:
        return int(self.lags[int(np.argmax(self.coefficients))])

    def to_dict(self):
        return {
            "convention": self.convention,
            "lags": [int(k) for k in self.lags],
            "coefficients": [float(c) for c in self.coefficients],
        }


def cross_correlation(x, y, max_lag: int, convention: str = "overlap") -> CrossCorrelation:
    """Cross-correlation for lags -max_lag..max_lag.

    ``overlap`` recomputes means and norms on the overlapping window at each
    lag, so a shifted copy scores exactly 1. ``full`` uses whole-series means
    and variances with a 1/n normalisation, as R's ``ccf`` does.
    """
    _check_aligned(x, y)
    a, b = _as_array(x), _as_array(y)
    n = a.size
    if max_lag < 1:
        raise InputError(f"max_lag must be at least 1, got {max_lag}")
    if n <= max_lag:
        raise InsufficientLength(f"series of length {n} too short for max_lag={max_lag}")
    if n - max_lag < 3:
        raise InsufficientLength(
            f"overlap at lag {max_lag} has {n - max_lag} points; at least 3 are needed"
        )
    if convention not in ("overlap", "full"):
        raise InputError(f"unknown cross-correlation convention {convention!r}")
    lags = np.arange(-max_lag, max_lag + 1)
    coefs = np.empty(lags.size)
    if convention == "full":
        da, db = a - a.mean(), b - b.mean()
        scale = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
        if scale == 0.0:
            raise ZeroVariance("cross-correlation undefined for a constant series")
    for i, k in enumerate(lags):
        xs, ys = (a[k:], b[: n - k]) if k >= 0 else (a[: n + k], b[-k:])
        if convention == "overlap":
            coefs[i] = _corr(xs, ys)
        else:
            xs_c = xs - a.mean()
            ys_c = ys - b.mean()
            coefs[i] = float(np.dot(xs_c, ys_c)) / scale
    return CrossCorrelation(lags, coefs, convention)


# --------------------------------------------------------------------------
# least squares


@dataclass(frozen=True, eq=False)
class RegressionFit:
    coefficients: np.ndarray
    rss: float
    stderr: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r_squared: float
    adj_r_squared: float
    n_obs: int
    n_params: int
    tss: float
    residuals: np.ndarray = field(repr=False)
    labels: tuple = ()

    @property
    def df_resid(self) -> int:
        return self.n_obs - self.n_params

    @property
    def residual_std_error(self) -> float:
        return math.sqrt(self.rss / self.df_resid)

    @property
    def f_statistic(self) -> float:
        """Overall F test of all slopes against the intercept-only model."""
        k = self.n_params - 1
        if k < 1:
            return float("nan")
        if self.rss == 0.0:
            return float("inf")
        return max(0.0, ((self.tss - self.rss) / k) / (self.rss / self.df_resid))

    @property
    def f_p_value(self) -> float:
        k = self.n_params - 1
        if k < 1:
            return float("nan")
        return f_sf(self.f_statistic, k, self.df_resid)

    def coefficient(self, label):
        i = self.labels.index(label)
        return float(self.coefficients[i]), float(self.p_values[i])

    def to_dict(self):
        return {
            "labels": list(self.labels),
            "coefficients": self.coefficients.tolist(),
            "stderr": self.stderr.tolist(),
            "t_stats": [_json_float(t) for t in self.t_stats],
            "p_values": self.p_values.tolist(),
            "rss": self.rss,
            "r_squared": self.r_squared,
            "adj_r_squared": self.adj_r_squared,
            "n_obs": self.n_obs,
            "n_params": self.n_params,
            "residual_std_error": self.residual_std_error,
            "f_statistic": _json_float(self.f_statistic),
            "f_df": [self.n_params - 1, self.df_resid],
            "f_p_value": _json_float(self.f_p_value),
        }


def _json_float(v):
    v = float(v)
    if math.isfinite(v):
        return v
    return str(v)


def ols(design, y, labels: Sequence[str] | None = None) -> RegressionFit:
    """Least squares via Householder QR.

    ``design`` should carry its own intercept column; R-squared is centred.
    Raises ``RankDeficient`` naming the first column that is (numerically) a
    combination of earlier ones.
    """
    X = np.asarray(design, dtype=float)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim != 2:
        raise InputError("design must be a 2-D matrix")
    n, p = X.shape
    if yv.size != n:
        raise InputError(f"design has {n} rows but response has {yv.size} values")
    if n <= p:
        raise InsufficientLength(f"{n} observations cannot identify {p} parameters")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(yv))):
        raise InputError("design and response must be finite")
    labels = tuple(labels) if labels is not None else tuple(f"x{j}" for j in range(p))

    Q, R = np.linalg.qr(X, mode="reduced")
    col_norms = np.linalg.norm(X, axis=0)
    diag = np.abs(np.diag(R))
    for j in range(p):
        if col_norms[j] == 0.0 or diag[j] <= RANK_TOL * col_norms[j]:
            raise RankDeficient(j, labels[j])

    R_inv = np.linalg.solve(R, np.eye(p))
    beta = R_inv @ (Q.T @ yv)
    resid = yv - X @ beta
    rss = float(np.dot(resid, resid))
    df = n - p
    sigma2 = rss / df
    xtx_inv_diag = np.einsum("ij,ij->i", R_inv, R_inv)
    se = np.sqrt(sigma2 * xtx_inv_diag)

    t = np.empty(p)
    pv = np.empty(p)
    for j in range(p):
        if se[j] > 0:
            t[j] = beta[j] / se[j]
            pv[j] = t_sf_two_sided(t[j], df)
        elif beta[j] != 0:
            t[j] = math.copysign(math.inf, beta[j])
            pv[j] = 0.0
        else:
            t[j] = 0.0
            pv[j] = 1.0

    centred = yv - yv.mean()
    tss = float(np.dot(centred, centred))
    r2 = 0.0 if tss == 0.0 else min(1.0, max(0.0, 1.0 - rss / tss))
    # the penalty factor is >= 1, so any excess over r2 is rounding
    adj = min(r2, 1.0 - (1.0 - r2) * (n - 1) / df)
    return RegressionFit(
        coefficients=beta,
        rss=rss,
        stderr=se,
        t_stats=t,
        p_values=pv,
        r_squared=r2,
        adj_r_squared=adj,
        n_obs=n,
        n_params=p,
        tss=tss,
        residuals=resid,
        labels=labels,
    )


# --------------------------------------------------------------------------
# lagged designs


@dataclass(frozen=True, eq=False)
class LaggedDesign:
    X: np.ndarray
    y: np.ndarray
    dates: tuple
    labels: tuple


def lagged_design(target, exogenous: Sequence = (), n_lags: int = 1, names=None) -> LaggedDesign:
    """Rows ``[1, Y[t-1..t-n], X1[t-1..t-n], ...]`` with response ``Y[t]``.

    Lags are positional: the caller is responsible for a regular date axis.
    ``names`` overrides the series names used in column labels.
    """
    if n_lags < 1:
        raise InputError(f"n_lags must be positive, got {n_lags}")
    exogenous = list(exogenous)
    _check_aligned(target, *exogenous)
    y = _as_array(target)
    n = y.size
    if n <= n_lags + 1:
        raise InsufficientLength(f"series of length {n} too short for {n_lags} lags")
    if names is None:
        names = [getattr(s, "name", "") or f"x{i + 1}" for i, s in enumerate(exogenous)]
        target_name = getattr(target, "name", "") or "y"
    else:
        target_name, names = names[0], list(names[1:])
    blocks = [np.ones(n - n_lags)]
    labels = ["const"]
    for name, arr in [(target_name, y)] + list(zip(names, map(_as_array, exogenous))):
        for i in range(1, n_lags + 1):
            blocks.append(arr[n_lags - i : n - i])
            labels.append(f"{name}[t-{i}]")
    dates = target.dates[n_lags:] if isinstance(target, TimeSeries) else tuple(range(n_lags, n))
    return LaggedDesign(np.column_stack(blocks), y[n_lags:].copy(), dates, tuple(labels))


# --------------------------------------------------------------------------
# Granger causality


@dataclass(frozen=True)
class GrangerResult:
    cause: str
    effect: str
    lag: int
    f_stat: float
    p_value: float
    rss_restricted: float
    rss_unrestricted: float
    df_num: int
    df_den: int

    @property
    def direction(self) -> str:
        return f"{self.cause}→{self.effect}"

    @property
    def stars(self) -> str:
        return stars(self.p_value)

    def to_dict(self):
        return {
            "direction": self.direction,
            "cause": self.cause,
            "effect": self.effect,
            "lag": self.lag,
            "f_stat": self.f_stat,
            "p_value": self.p_value,
            "stars": self.stars,
            "rss_restricted": self.rss_restricted,
            "rss_unrestricted": self.rss_unrestricted,
            "df_num": self.df_num,
            "df_den": self.df_den,
        }


def granger(x, y, lag: int, names: tuple | None = None) -> GrangerResult:
    """F-test of whether lags of x improve an autoregression of y.

    Restricted and unrestricted models are fitted on the same rows, so the
    nested F statistic has (lag, T - 2*lag - 1) degrees of freedom.
    """
    _check_aligned(x, y)
    n = _as_array(y).size
    if lag < 1:
        raise InputError(f"lag must be positive, got {lag}")
    if n <= 3 * lag + 1:
        raise InsufficientLength(
            f"Granger test at lag {lag} needs more than {3 * lag + 1} observations, got {n}"
        )
    cause, effect = names or (getattr(x, "name", "") or "X", getattr(y, "name", "") or "Y")
    full = lagged_design(y, [x], lag, names=[effect, cause])
    k_restricted = 1 + lag
    restricted = ols(full.X[:, :k_restricted], full.y, full.labels[:k_restricted])
    unrestricted = ols(full.X, full.y, full.labels)
    rss_r = restricted.rss
    rss_u = min(unrestricted.rss, rss_r)  # nested fits; any excess is rounding
    df_den = unrestricted.df_resid
    if rss_u == 0.0:
        f = math.inf if rss_r > 0 else 0.0
    else:
        f = max(0.0, ((rss_r - rss_u) / lag) / (rss_u / df_den))
    return GrangerResult(cause, effect, lag, f, f_sf(f, lag, df_den), rss_r, rss_u, lag, df_den)


def granger_table(x, y, lags: Sequence[int], names: tuple | None = None) -> list:
    """Both directions at each lag: ``[X->Y @ l1, Y->X @ l1, X->Y @ l2, ...]``."""
    nx, ny = names or (getattr(x, "name", "") or "X", getattr(y, "name", "") or "Y")
    out = []
    for lag in lags:
        out.append(granger(x, y, lag, (nx, ny)))
        out.append(granger(y, x, lag, (ny, nx)))
    return out


# --------------------------------------------------------------------------
# multi-source lagged regression


@dataclass(frozen=True, eq=False)
class MultipleRegression:
    fit: RegressionFit
    baseline: RegressionFit
    variables: tuple
    n_lags: int
    dates: tuple

    def cell(self, variable: str, lag: int):
        """(coefficient, p-value) of ``variable`` at ``lag``."""
        j = 1 + self.variables.index(variable) * self.n_lags + (lag - 1)
        return float(self.fit.coefficients[j]), float(self.fit.p_values[j])

    @property
    def grid(self) -> dict:
        return {(v, k): self.cell(v, k) for v in self.variables for k in range(1, self.n_lags + 1)}

    @property
    def adj_r_squared(self):
        return self.fit.adj_r_squared

    @property
    def baseline_adj_r_squared(self):
        return self.baseline.adj_r_squared

    def to_dict(self):
        return {
            "variables": list(self.variables),
            "n_lags": self.n_lags,
            "grid": {
                v: [
                    {"lag": k, "coefficient": c, "p_value": p, "stars": stars(p)}
                    for k in range(1, self.n_lags + 1)
                    for c, p in [self.cell(v, k)]
                ]
                for v in self.variables
            },
            "intercept": float(self.fit.coefficients[0]),
            "adj_r_squared": self.adj_r_squared,
            "baseline_adj_r_squared": self.baseline_adj_r_squared,
            "fit": self.fit.to_dict(),
            "baseline": self.baseline.to_dict(),
            "first_date": _iso(self.dates[0]),
            "last_date": _iso(self.dates[-1]),
        }


def _iso(d):
    return d.isoformat() if hasattr(d, "isoformat") else d


def multiple_lagged_regression(
    target, exogenous: Mapping[str, object], n_lags: int, target_name: str | None = None
) -> MultipleRegression:
    """Regress the target on its own lags plus lags of every exogenous series.

    The own-lags-only baseline is fitted on the same rows. Inputs are taken
    as given; standardize them beforehand if coefficients should be in
    standard-score units.
    """
    tname = target_name or getattr(target, "name", "") or "Y"
    names = list(exogenous)
    design = lagged_design(target, [exogenous[k] for k in names], n_lags, names=[tname] + names)
    fit = ols(design.X, design.y, design.labels)
    k0 = 1 + n_lags
    baseline = ols(design.X[:, :k0], design.y, design.labels[:k0])
    return MultipleRegression(fit, baseline, tuple([tname] + names), n_lags, design.dates)
