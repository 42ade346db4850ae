from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moodmarket.econometrics import (
    cross_correlation,
    granger,
    granger_table,
    lagged_design,
    multiple_lagged_regression,
    ols,
    pearson,
    stars,
)
from moodmarket.errors import (
    InputError,
    InsufficientLength,
    RankDeficient,
    ZeroVariance,
)
from moodmarket.synth import VarSpec, gen_coupled_pair, shuffled
from moodmarket.timeseries import TimeSeries
from oracles import explicit_inverse, ols_oracle


def ts(values, name=""):
    return TimeSeries.from_values(values, name=name)


# ---- stars


@pytest.mark.parametrize(
    "p,s", [(0.001, "***"), (0.0099, "***"), (0.01, "**"), (0.049, "**"), (0.05, "*"), (0.099, "*"), (0.1, ""), (0.7, "")]
)
def test_stars(p, s):
    assert stars(p) == s


# ---- pearson


def test_pearson_affine():
    x = np.arange(10.0)
    c = pearson(x, 2 * x + 1)
    assert c.coefficient == 1.0 and c.p_value == 0.0


def test_pearson_negative():
    x = np.array([3.0, 1.0, 4.0, 1.5, 9.0])
    assert pearson(x, -x).coefficient == -1.0


def test_pearson_matches_scipy():
    from scipy import stats

    rng = np.random.default_rng(3)
    x, y = rng.normal(size=40), rng.normal(size=40)
    y = y + 0.4 * x
    ref = stats.pearsonr(x, y)
    c = pearson(x, y)
    assert c.coefficient == pytest.approx(ref.statistic, rel=1e-12)
    assert c.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_pearson_errors():
    with pytest.raises(ZeroVariance):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(InsufficientLength):
        pearson([1.0, 2.0], [2.0, 1.0])
    with pytest.raises(InputError):
        pearson(ts([1.0, 2.0, 3.0]), TimeSeries.from_values([1.0, 2.0, 3.0], start=date(2012, 1, 1)))


def test_pearson_independent_noise_monte_carlo():
    ok = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        c = pearson(rng.normal(size=1000), rng.normal(size=1000))
        ok += abs(c.coefficient) < 0.1 and c.p_value > 0.01
    assert ok >= 190


# ---- cross-correlation


def test_ccf_self():
    x = np.random.default_rng(0).normal(size=50)
    cc = cross_correlation(x, x, 3)
    assert cc.at(0) == pytest.approx(1.0, abs=1e-15)
    assert list(cc.lags) == [-3, -2, -1, 0, 1, 2, 3]


def test_ccf_shifted_copy_peaks_at_lag():
    z = np.random.default_rng(1).normal(size=203)
    y = z[3:]
    x = z[:-3]  # x[t] = y[t-3]: y leads x by 3
    cc = cross_correlation(x, y, 6)
    scan = {k: np.corrcoef(x[k:], y[: len(y) - k])[0, 1] if k >= 0 else np.corrcoef(x[:k], y[-k:])[0, 1] for k in range(-6, 7)}
    assert max(scan, key=scan.get) == 3
    assert cc.peak_lag == 3
    assert cc.at(3) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=40)
def test_ccf_swap_symmetry_and_pearson(seed, k):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=40), rng.normal(size=40)
    for conv in ("overlap", "full"):
        a = cross_correlation(x, y, k, conv)
        b = cross_correlation(y, x, k, conv)
        np.testing.assert_allclose(a.coefficients, b.coefficients[::-1], rtol=0, atol=1e-14)
        assert np.all(np.abs(a.coefficients) <= 1.0)
    assert abs(cross_correlation(x, y, k).at(0) - pearson(x, y).coefficient) < 1e-12


def test_ccf_full_convention_matches_numpy_formula():
    rng = np.random.default_rng(5)
    x, y = rng.normal(size=30), rng.normal(size=30)
    cc = cross_correlation(x, y, 2, "full")
    n = 30
    xc, yc = x - x.mean(), y - y.mean()
    denom = n * x.std() * y.std()
    # R's ccf: lag k pairs x[t+k] with y[t]
    assert cc.at(2) == pytest.approx(np.dot(xc[2:], yc[:-2]) / denom, abs=1e-14)
    assert cc.at(-1) == pytest.approx(np.dot(xc[:-1], yc[1:]) / denom, abs=1e-14)


def test_ccf_white_noise_monte_carlo():
    ok = 0
    for seed in range(200):
        rng = np.random.default_rng(10_000 + seed)
        cc = cross_correlation(rng.normal(size=500), rng.normal(size=500), 5)
        ok += np.max(np.abs(cc.coefficients)) < 0.15
    assert ok >= 190


def test_ccf_too_short():
    with pytest.raises(InsufficientLength):
        cross_correlation(np.arange(5.0), np.arange(5.0) ** 2, 3)


# ---- ols


def test_ols_exact_line():
    x = np.arange(8.0)
    fit = ols(np.column_stack([np.ones(8), x]), 3 + 2 * x)
    np.testing.assert_allclose(fit.coefficients, [3, 2], rtol=1e-12)
    assert fit.rss < 1e-20
    assert fit.r_squared == 1.0


def test_ols_intercept_only_constant():
    fit = ols(np.ones((6, 1)), np.full(6, 4.5))
    assert fit.coefficients[0] == pytest.approx(4.5, rel=1e-15)
    assert fit.r_squared == 0.0


def test_ols_5x2_against_normal_equations():
    rng = np.random.default_rng(7)
    X = np.column_stack([np.ones(5), rng.normal(size=5)])
    y = rng.normal(size=5)
    ref = ols_oracle(X, y)
    np.testing.assert_allclose(ols(X, y).coefficients, ref["coefficients"], rtol=1e-8)


def test_explicit_inverse_oracle_sane():
    a = np.array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]])
    np.testing.assert_allclose(explicit_inverse(a) @ a, np.eye(3), atol=1e-14)


def _instance(seed, n_max=8):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 4))
    n = int(rng.integers(p + 2, n_max + 1))
    X = np.column_stack([np.ones(n)] + [rng.normal(size=n) for _ in range(p - 1)])
    beta = rng.normal(size=p)
    y = X @ beta + rng.normal(size=n)
    return X, y


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ols_small_instances_against_oracle(seed):
    X, y = _instance(seed)
    if np.linalg.cond(X) > 1e3:
        return
    fit = ols(X, y)
    ref = ols_oracle(X, y)
    for key in ("coefficients", "stderr", "t_stats", "p_values"):
        np.testing.assert_allclose(getattr(fit, key), ref[key], rtol=1e-8, atol=1e-13)
    assert fit.r_squared == pytest.approx(ref["r_squared"], rel=1e-8, abs=1e-12)
    assert fit.adj_r_squared == pytest.approx(ref["adj_r_squared"], rel=1e-8, abs=1e-12)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_ols_invariants(seed):
    rng = np.random.default_rng(seed)
    n, p = int(rng.integers(6, 60)), int(rng.integers(1, 5))
    X = np.column_stack([np.ones(n)] + [rng.normal(size=n) for _ in range(p - 1)])
    y = rng.normal(size=n) * rng.uniform(0.1, 10)
    fit = ols(X, y)
    assert np.max(np.abs(X.T @ fit.residuals)) < 1e-8
    assert fit.rss >= 0
    assert 0.0 <= fit.r_squared <= 1.0
    assert fit.adj_r_squared <= fit.r_squared
    assert np.all((fit.p_values >= 0) & (fit.p_values <= 1))
    assert fit.n_obs > fit.n_params


def test_ols_rank_deficient_names_column():
    x = np.arange(10.0)
    X = np.column_stack([np.ones(10), x, 2 * x - 1])
    with pytest.raises(RankDeficient) as exc:
        ols(X, x ** 2, ["const", "x", "z"])
    assert exc.value.column == 2
    assert "z" in str(exc.value)


def test_ols_too_few_rows():
    with pytest.raises(InsufficientLength):
        ols(np.ones((2, 2)), [1.0, 2.0])


def test_ols_overall_f_matches_scipy():
    from scipy import stats

    rng = np.random.default_rng(11)
    X = np.column_stack([np.ones(30), rng.normal(size=(30, 2))])
    y = X @ [1.0, 0.3, -0.2] + rng.normal(size=30)
    fit = ols(X, y)
    assert fit.f_p_value == pytest.approx(stats.f.sf(fit.f_statistic, 2, 27), rel=1e-9)


# ---- lagged_design


def test_lagged_design_hand_example():
    d = lagged_design(ts([1.0, 2.0, 3.0, 4.0], "Y"), [], 1)
    assert d.X.tolist() == [[1, 1], [1, 2], [1, 3]]
    assert d.y.tolist() == [2, 3, 4]
    assert d.labels == ("const", "Y[t-1]")
    assert len(d.dates) == 3


def test_lagged_design_too_long_lag():
    with pytest.raises(InsufficientLength):
        lagged_design(ts([1.0, 2.0, 3.0, 4.0]), [], 3)


def test_lagged_design_columns_and_order():
    y = ts(np.arange(10.0), "Y")
    x = ts(100 + np.arange(10.0), "X")
    d = lagged_design(y, [x], 2)
    assert d.X.shape == (8, 5)
    assert d.labels == ("const", "Y[t-1]", "Y[t-2]", "X[t-1]", "X[t-2]")
    # row for t=2
    assert d.X[0].tolist() == [1, 1, 0, 101, 100]


# ---- granger


def _pair(seed, coupling=0.8, lag=1, noise=0.1, n=300):
    return gen_coupled_pair(VarSpec(coupling, lag, noise, n, seed))


def test_granger_coupled_lag2_rejects():
    hits = 0
    for seed in range(100):
        x, y = _pair(seed, lag=1, noise=0.1)
        hits += granger(x, y, 2).p_value < 0.01
    assert hits >= 99


def test_granger_invariants_and_df():
    x, y = _pair(4)
    r = granger(x, y, 3)
    assert r.df_num == 3 and r.df_den == (300 - 3) - 2 * 3 - 1
    assert r.rss_restricted >= r.rss_unrestricted
    assert r.f_stat >= 0 and 0 <= r.p_value <= 1
    assert r.direction == "x→y"


def test_granger_f_formula_by_hand():
    x, y = _pair(9, coupling=0.2, noise=1.0)
    r = granger(x, y, 2)
    d = lagged_design(y, [x], 2)
    rss_u = ols(d.X, d.y).rss
    rss_r = ols(d.X[:, :3], d.y).rss
    T = d.X.shape[0]
    f = ((rss_r - rss_u) / 2) / (rss_u / (T - 5))
    assert r.f_stat == pytest.approx(f, rel=1e-12)


def test_granger_matches_scipy_f_tail():
    from scipy import stats

    x, y = _pair(2, coupling=0.1, noise=1.0)
    r = granger(x, y, 2)
    assert r.p_value == pytest.approx(stats.f.sf(r.f_stat, r.df_num, r.df_den), rel=1e-9)


def test_granger_shuffled_cause_not_significant():
    # the permuted driver has no lead-lag structure left
    quiet = 0
    for seed in range(100):
        x, y = _pair(seed)
        quiet += granger(shuffled(x, seed + 7_000), y, 1).p_value >= 0.01
    assert quiet >= 95


def test_granger_too_short():
    with pytest.raises(InsufficientLength):
        granger(np.arange(7.0), np.arange(7.0) ** 0.5, 2)


def test_granger_table_cardinality_and_order():
    x, y = _pair(1)
    res = granger_table(x, y, [1, 2, 3])
    assert len(res) == 6
    assert [r.direction for r in res[:2]] == ["x→y", "y→x"]
    assert [r.lag for r in res] == [1, 1, 2, 2, 3, 3]


def test_granger_table_coupled_one_way():
    x, y = _pair(12)
    fwd, back = granger_table(x, y, [1])
    assert fwd.p_value < 0.01 and fwd.stars == "***"
    assert back.p_value > 0.05


def test_granger_table_swap_symmetry():
    x, y = _pair(3, coupling=0.3, noise=1.0)
    a = granger_table(x, y, [1, 2])
    b = granger_table(y, x, [1, 2])
    for i in range(0, 4, 2):
        assert a[i].f_stat == b[i + 1].f_stat
        assert a[i + 1].f_stat == b[i].f_stat


def test_granger_identical_inputs_is_rank_deficient():
    x, _ = _pair(0)
    with pytest.raises(RankDeficient):
        granger_table(x, x.renamed("x2"), [1])


# ---- multiple lagged regression


def test_mlr_exact_shift():
    z = np.random.default_rng(2).normal(size=81)
    target = ts(z[:-1], "Y")
    lead = ts(z[1:], "X")  # target[t] = lead[t-1]
    mr = multiple_lagged_regression(target, {"X": lead}, 1)
    c, _ = mr.cell("X", 1)
    own, _ = mr.cell("Y", 1)
    assert c == pytest.approx(1.0, abs=1e-10)
    assert abs(own) < 1e-10
    assert mr.fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_mlr_coefficient_count():
    rng = np.random.default_rng(0)
    n = 120
    target = ts(rng.normal(size=n), "ret")
    exog = {f"s{i}": ts(rng.normal(size=n)) for i in range(5)}
    mr = multiple_lagged_regression(target, exog, 7)
    assert mr.fit.coefficients.size == 43
    assert len(mr.grid) == 42
    assert mr.fit.n_params - 1 == 42
    assert mr.baseline.n_params == 8


def test_mlr_noise_exog_no_gain():
    worse = 0
    for seed in range(20):
        rng = np.random.default_rng(500 + seed)
        y = np.zeros(400)
        e = rng.normal(size=400)
        for t in range(1, 400):
            y[t] = 0.5 * y[t - 1] + e[t]
        exog = {f"n{i}": ts(rng.normal(size=400)) for i in range(3)}
        mr = multiple_lagged_regression(ts(y, "Y"), exog, 3)
        worse += mr.adj_r_squared <= mr.baseline_adj_r_squared + 0.05
    assert worse == 20


def test_granger_null_p_values_uniform():
    from scipy import stats

    for lag in (1, 3):
        ps = [granger(*gen_coupled_pair(VarSpec(0.0, 1, 1.0, 300, 50_000 + s)), lag).p_value for s in range(1500)]
        assert stats.kstest(ps, "uniform").pvalue > 0.001
