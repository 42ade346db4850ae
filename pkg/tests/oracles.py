"""Independent reference implementations used to check the package.

Nothing here imports the code under test's numerics: distribution functions
are integrated numerically with mpmath, least squares goes through the normal
equations with a cofactor inverse, and indicator values are recounted token by
token.
"""

from datetime import date

import mpmath as mp
import numpy as np

mp.mp.dps = 30


# ---- distributions by quadrature of the density


def _t_density(df):
    df = mp.mpf(df)
    c = mp.gamma((df + 1) / 2) / (mp.sqrt(df * mp.pi) * mp.gamma(df / 2))
    return lambda u: c * (1 + u * u / df) ** (-(df + 1) / 2)


def _f_density(d1, d2):
    d1, d2 = mp.mpf(d1), mp.mpf(d2)
    c = (d1 / d2) ** (d1 / 2) / mp.beta(d1 / 2, d2 / 2)
    return lambda u: c * u ** (d1 / 2 - 1) * (1 + d1 * u / d2) ** (-(d1 + d2) / 2)


def _breaks(a, b, centre=None, pieces=8):
    pts = set(mp.linspace(a, b, pieces + 1))
    if centre is not None and a < centre < b:
        pts.add(mp.mpf(centre))
    return sorted(pts)


def t_cdf_oracle(x, df):
    x = mp.mpf(x)
    if x == 0:
        return 0.5
    f = _t_density(df)
    half = mp.quad(f, _breaks(0, abs(x)))
    return float(mp.mpf("0.5") + half if x > 0 else mp.mpf("0.5") - half)


def t_two_sided_oracle(t, df):
    """P(|T| >= |t|) as a tail integral, accurate for tiny p."""
    f = _t_density(df)
    a = abs(mp.mpf(t))
    return float(2 * mp.quad(f, [a, a + 1, a + 10, mp.inf]))


def f_cdf_oracle(x, d1, d2):
    if x <= 0:
        return 0.0
    f = _f_density(d1, d2)
    mode = (d1 - 2) / d1 * d2 / (d2 + 2) if d1 > 2 else None
    return float(mp.quad(f, _breaks(0, mp.mpf(x), mode)))


def f_sf_oracle(x, d1, d2):
    f = _f_density(d1, d2)
    x = mp.mpf(x)
    return float(mp.quad(f, [x, x + 1, x + 10, mp.inf]))


# ---- least squares through the normal equations


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def explicit_inverse(a):
    """Adjugate over determinant for 1x1, 2x2 and 3x3 matrices."""
    a = [[float(v) for v in row] for row in np.asarray(a)]
    n = len(a)
    if n == 1:
        return np.array([[1.0 / a[0][0]]])
    if n == 2:
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        return np.array([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]) / det
    if n != 3:
        raise ValueError("explicit inverse only up to 3x3")
    det = det3(a)
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]]
            cof[i, j] = (-1) ** (i + j) * minor
    return cof.T / det


def ols_oracle(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    xtx_inv = explicit_inverse(X.T @ X)
    beta = xtx_inv @ (X.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    sigma2 = rss / (n - p)
    se = np.sqrt(sigma2 * np.diag(xtx_inv))
    t = beta / se
    pv = np.array([t_two_sided_oracle(v, n - p) for v in t])
    ybar = y.mean()
    tss = float(((y - ybar) ** 2).sum())
    r2 = 1 - rss / tss
    adj = 1 - (1 - r2) * (n - 1) / (n - p)
    return {
        "coefficients": beta,
        "stderr": se,
        "t_stats": t,
        "p_values": pv,
        "r_squared": r2,
        "adj_r_squared": adj,
        "rss": rss,
    }


# ---- indicator recounts


def words_of(text):
    out, cur = [], []
    for ch in text.lower():
        if ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


def has_phrase(tokens, phrase):
    k = len(phrase)
    return any(tokens[i : i + k] == phrase for i in range(len(tokens) - k + 1))


def recount(corpus, lexicon_terms, start: date, end: date):
    """Day -> dict of brute-force nns, tis counts and term volumes."""
    days = {}
    for d in corpus.documents:
        if start <= d.date <= end:
            days.setdefault(d.date, []).append(d.text)
    out = {}
    for day, texts in days.items():
        ratios = []
        bull = bear = 0
        vols = {t: 0 for t in lexicon_terms}
        for text in texts:
            toks = words_of(text)
            hits = sum(1 for t in toks if t in lexicon_terms)
            ratios.append((hits, len(toks)))
            bull += "bullish" in toks
            bear += "bearish" in toks
            for t in lexicon_terms:
                if has_phrase(toks, words_of(t)):
                    vols[t] += 1
        out[day] = {"ratios": ratios, "bull": bull, "bear": bear, "volumes": vols}
    return out
