"""Student t and Fisher F distribution functions.

Both reduce to the regularized incomplete beta function, evaluated here by the
modified Lentz continued fraction. Upper tails are computed directly from the
complementary argument instead of as ``1 - cdf`` so small p-values keep their
relative precision.
"""

import math

from .errors import ComputationError, InputError

_EPS = 2.5e-16
_TINY = 1e-300
_MAX_ITER = 20000


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ComputationError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a, b, x, y=None):
    """Regularized incomplete beta ``I_x(a, b)``.

    ``y`` may carry ``1 - x`` computed without cancellation by the caller.
    """
    if a <= 0 or b <= 0:
        raise InputError(f"beta parameters must be positive, got a={a}, b={b}")
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log(y) - _log_beta(a, b)
    front = math.exp(log_front)
    # continued fraction converges fast only left of the mode; swap otherwise
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, y) / b


def _check_df(*dfs):
    for df in dfs:
        if not (df > 0):
            raise InputError(f"degrees of freedom must be positive, got {df}")


def t_cdf(t, df):
    _check_df(df)
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2))
    return 1.0 - tail if t > 0 else tail


def t_sf_two_sided(t, df):
    """P(|T| >= |t|)."""
    _check_df(df)
    if math.isinf(t):
        return 0.0
    t2 = t * t
    return betainc(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2))


def f_cdf(f, d1, d2):
    _check_df(d1, d2)
    if f <= 0:
        return 0.0
    if math.isinf(f):
        return 1.0
    denom = d1 * f + d2
    return betainc(d1 / 2.0, d2 / 2.0, d1 * f / denom, d2 / denom)


def f_sf(f, d1, d2):
    """Upper tail P(F >= f)."""
    _check_df(d1, d2)
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    denom = d1 * f + d2
    return betainc(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom)
