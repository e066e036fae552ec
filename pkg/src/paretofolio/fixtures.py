"""Deterministic synthetic market fixtures used by the test suite and docs.

A one-factor return model with a planted subset of high-Sharpe assets, so
ordering claims (optimizer vs baseline) can be checked without shipping a
proprietary dataset.
"""

from __future__ import annotations

import datetime as dt

import numpy as np

from .market_data import PriceFrame


def make_synthetic_prices(
    seed: int = 0,
    n_assets: int = 10,
    n_days: int = 400,
    n_planted: int = 3,
    start: dt.date = dt.date(2020, 1, 2),
) -> PriceFrame:
    """Prices from a one-factor daily return model.

    The first ``n_planted`` assets carry a high market loading with low
    idiosyncratic volatility (the planted high-Sharpe subset, visible to a
    CAPM-style expected-return estimator); the rest are ordinary.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    mu = np.full(n_assets, 0.0001)
    idio = np.full(n_assets, 0.016)
    beta = rng.uniform(0.6, 1.2, n_assets)
    mu[:n_planted] = 0.0003
    idio[:n_planted] = 0.004
    beta[:n_planted] = 1.4

    factor = rng.normal(0.0006, 0.008, n_days)
    eps = rng.normal(0.0, 1.0, (n_days, n_assets)) * idio
    rets = mu + factor[:, None] * beta + eps

    prices = 100.0 * np.cumprod(1.0 + rets, axis=0)
    dates = _trading_dates(start, n_days)
    tickers = tuple(f"A{i:02d}" for i in range(n_assets))
    return PriceFrame(dates, tickers, prices)


def _trading_dates(start: dt.date, n: int) -> tuple[dt.date, ...]:
    dates = []
    d = start
    while len(dates) < n:
        if d.weekday() < 5:
            dates.append(d)
        d += dt.timedelta(days=1)
    return tuple(dates)
