"""Independent reference implementations used to check the library.

These are deliberately naive (plain loops, normal equations, explicit double
sums) and share no code with ``forecast_eval``.
"""

import math

import numpy as np


def lrv_double_sum(d, M):
    """(1/n) * sum_t sum_s w(|t-s|) c_t c_s with Bartlett weights w(k) = 1 - k/M."""
    n = len(d)
    mean = sum(d) / n
    c = [x - mean for x in d]
    total = 0.0
    for t in range(n):
        for s in range(n):
            k = abs(t - s)
            if k < M:
                total += (1.0 - k / M) * c[t] * c[s]
    return total / n


def dm_statistic(loss_a, loss_b):
    d = [a - b for a, b in zip(loss_a, loss_b)]
    n = len(d)
    M = int(math.floor(math.sqrt(n)))
    return (sum(d) / n) / math.sqrt(lrv_double_sum(d, M) / n)


def ar_normal_equations(y, p, hold_back):
    """Intercept + p lag coefficients and RSS by solving X'X b = X'y."""
    y = list(map(float, y))
    rows = []
    target = []
    for t in range(hold_back, len(y)):
        rows.append([1.0] + [y[t - i] for i in range(1, p + 1)])
        target.append(y[t])
    X = np.array(rows)
    Y = np.array(target)
    beta = np.linalg.solve(X.T @ X, X.T @ Y)
    resid = Y - X @ beta
    return beta, float(np.sum(resid**2)), len(target)


def aic_enumeration(y, p_max):
    """(best p, {p: aic}) over p = 1..p_max on the common sample."""
    aics = {}
    for p in range(1, p_max + 1):
        _, rss, n_eff = ar_normal_equations(y, p, p_max)
        aics[p] = n_eff * math.log(rss / n_eff) + 2 * (p + 1)
    best = min(aics, key=lambda p: (aics[p], p))
    return best, aics


def iterate_ar(intercept, coefs, history, steps):
    """Forecast `steps` ahead by repeated substitution."""
    buf = list(history)
    for _ in range(steps):
        buf.append(intercept + sum(c * buf[-i] for i, c in enumerate(coefs, start=1)))
    return buf[-1]


def mz_closed_form(f, y):
    """Simple-regression slope/intercept from sums of squares."""
    n = len(f)
    fm = sum(f) / n
    ym = sum(y) / n
    sxy = sum((a - fm) * (b - ym) for a, b in zip(f, y))
    sxx = sum((a - fm) ** 2 for a in f)
    slope = sxy / sxx
    return ym - slope * fm, slope


def summary_spreadsheet(e):
    """Table-style statistics with textbook formulas."""
    n = len(e)
    mean = sum(e) / n
    s = sorted(e)
    a = sorted(abs(x) for x in e)

    def med(v):
        return v[n // 2] if n % 2 else (v[n // 2 - 1] + v[n // 2]) / 2

    dev = [x - mean for x in e]
    ss = sum(x * x for x in dev)
    m2 = ss / n
    m3 = sum(x**3 for x in dev) / n

    def ac(k):
        return sum(dev[t] * dev[t - k] for t in range(k, n)) / ss

    return dict(
        n=n,
        mean=mean,
        median=med(s),
        mae=sum(a) / n,
        mdae=med(a),
        std=math.sqrt(ss / (n - 1)),
        max=max(e),
        min=min(e),
        skew=m3 / m2**1.5,
        ac1=ac(1),
        ac4=ac(4),
    )


def simulate_ar(phis, n, intercept=0.0, sigma=1.0, seed=0, burn=100, start=None):
    rng = np.random.default_rng(seed)
    p = len(phis)
    y = list(start) if start is not None else [0.0] * p
    for _ in range(n + burn):
        eps = rng.normal(0.0, sigma) if sigma else 0.0
        y.append(intercept + sum(c * y[-i] for i, c in enumerate(phis, start=1)) + eps)
    return np.array(y[-n:])
