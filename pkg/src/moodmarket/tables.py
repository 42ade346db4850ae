"""Plain-text renderings of analysis results.

Significance stars follow a fixed convention: p < 0.01 "***", p < 0.05 "**",
p < 0.1 "*".
"""

from __future__ import annotations

from typing import Sequence

from .econometrics import CrossCorrelation, MultipleRegression, stars

STAR_NOTE = "(p < 0.01: ***, p < 0.05: **, p < 0.1: *)"


def fmt_p(p: float) -> str:
    if p < 1e-3:
        return f"{p:.2e}"
    return f"{p:.4f}"


def fmt_num(x: float, digits: int = 3) -> str:
    return f"{x:.{digits}f}"


def grid(header: Sequence[str], rows: Sequence[Sequence[str]], title: str = "", note: str = "") -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    line = "-" * (sum(widths) + 2 * (len(widths) - 1))
    out = []
    if title:
        out.append(title)
    out.append(line)
    out.append("  ".join(h.rjust(w) if i else h.ljust(w) for i, (h, w) in enumerate(zip(header, widths))))
    out.append(line)
    for row in rows:
        out.append("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))))
    out.append(line)
    if note:
        out.append(note)
    return "\n".join(out) + "\n"


def correlation_table(rows, cols, cells, title="Pearson correlations") -> str:
    """``cells[(row, col)]`` is a Correlation."""
    body = []
    for r in rows:
        line = [r]
        for c in cols:
            cor = cells[(r, c)]
            line.append(f"{cor.coefficient:.3f}{cor.stars}")
        body.append(line)
    return grid([""] + list(cols), body, title, STAR_NOTE)


def ccf_table(cc: CrossCorrelation, x: str, y: str) -> str:
    body = [[f"{int(k):+d}", f"{c:.4f}"] for k, c in zip(cc.lags, cc.coefficients)]
    title = f"Cross-correlation corr({x}[t+k], {y}[t]), {cc.convention} convention"
    note = f"k > 0: {y} leads {x}; peak at k = {cc.peak_lag:+d}"
    return grid(["k", "gamma"], body, title, note)


def granger_table_text(results, title="Granger causality p-values") -> str:
    lags = sorted({r.lag for r in results})
    directions = []
    for r in results:
        if r.direction not in directions:
            directions.append(r.direction)
    by_key = {(r.direction, r.lag): r for r in results}
    body = []
    for d in directions:
        row = [d]
        for lag in lags:
            r = by_key.get((d, lag))
            row.append(f"{fmt_p(r.p_value)}{r.stars}" if r else "")
        body.append(row)
    return grid(["lag"] + [str(k) for k in lags], body, title, STAR_NOTE)


def regression_table(mr: MultipleRegression, title="Multiple regression") -> str:
    header = ["Lag"]
    for v in mr.variables:
        header += [f"{v} coeff", "p-value"]
    body = []
    for k in range(1, mr.n_lags + 1):
        row = [str(k)]
        for v in mr.variables:
            c, p = mr.cell(v, k)
            row += [fmt_num(c), f"{fmt_p(p)}{stars(p)}"]
        body.append(row)
    fit = mr.fit
    note = "\n".join(
        [
            STAR_NOTE,
            f"Residual standard error: {fit.residual_std_error:.3f} on {fit.df_resid} degrees of freedom",
            f"Multiple R-squared: {fit.r_squared:.4f}, Adjusted R-squared: {fit.adj_r_squared:.3f} "
            f"(baseline own-lags model: {mr.baseline_adj_r_squared:.3f})",
            f"F-statistic: {fit.f_statistic:.2f} on {fit.n_params - 1} and {fit.df_resid} DF, "
            f"p-value: {fmt_p(fit.f_p_value)}",
        ]
    )
    return grid(header, body, title, note)


def forecast_table(sections, title="One-step-ahead forecast accuracy") -> str:
    """``sections`` is a list of (target label, ModelComparison)."""
    body = []
    for label, cmp in sections:
        body.append([label, "Model 0", f"{cmp.baseline.mape:.3f}", f"{cmp.baseline.direction_accuracy:.2f}"])
        body.append(["", "Model 1", f"{cmp.augmented.mape:.3f}", f"{cmp.augmented.direction_accuracy:.2f}"])
    return grid(["", "Model", "MAPE", "Direction"], body, title)


def term_frequency_text(report, title="Term frequencies") -> str:
    return grid(["term", "count"], [[t, str(c)] for t, c in report], title)
