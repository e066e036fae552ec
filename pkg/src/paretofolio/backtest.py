"""Out-of-sample validation: apply a fixed weight vector to a price window
and report annualized volatility, expected return and Sharpe ratio."""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import EmptyWindow, MissingTicker, WindowMismatch, ZeroVolatility
from .market_data import PriceFrame

TRADING_DAYS = 252


@dataclass(frozen=True)
class BacktestSpec:
    weights: np.ndarray
    tickers: tuple[str, ...]
    start_date: dt.date
    end_date: dt.date
    rebalance_every: int | None = None  # None -> buy-and-hold drift
    rf_annual: float = 0.02
    trading_days: int = TRADING_DAYS

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.size != len(self.tickers):
            raise MissingTicker("weights and tickers differ in length")
        if self.start_date >= self.end_date:
            raise EmptyWindow("start date must precede end date")


@dataclass(frozen=True)
class BacktestReport:
    name: str
    annual_volatility_pct: float
    expected_annual_return_pct: float
    sharpe: float
    daily_series: np.ndarray
    start_date: dt.date
    end_date: dt.date
    rf_annual: float
    wall_time_seconds: float | None = None


def run_backtest(prices: PriceFrame, spec: BacktestSpec, name: str = "portfolio") -> BacktestReport:
    """Drift-adjusted daily portfolio returns over the window, annualized.

    Holdings compound with asset returns between (optional) rebalances, so a
    buy-and-hold portfolio's effective weights drift with prices.
    """
    missing = [t for t in spec.tickers if t not in prices.tickers]
    if missing:
        raise MissingTicker(f"tickers absent from price data: {missing}")
    window = prices.select(list(spec.tickers)).window(spec.start_date, spec.end_date)
    if window.n_dates < 2:
        raise EmptyWindow(
            f"window {spec.start_date}..{spec.end_date} has {window.n_dates} rows"
        )

    asset_rets = window.prices[1:] / window.prices[:-1] - 1.0
    holdings = spec.weights.astype(float).copy()
    daily = np.empty(asset_rets.shape[0])
    for t in range(asset_rets.shape[0]):
        total = holdings.sum()
        if total == 0.0:
            raise EmptyWindow("portfolio value reached zero during the window")
        daily[t] = holdings @ asset_rets[t] / total
        holdings = holdings * (1.0 + asset_rets[t])
        if spec.rebalance_every and (t + 1) % spec.rebalance_every == 0:
            holdings = spec.weights * holdings.sum()

    annual_return = daily.mean() * spec.trading_days
    annual_vol = (
        float(np.std(daily, ddof=1)) * np.sqrt(spec.trading_days)
        if daily.size > 1
        else 0.0
    )
    if annual_vol == 0.0:
        raise ZeroVolatility(
            "portfolio volatility is zero over the window",
            annual_return_pct=float(annual_return * 100.0),
        )
    sharpe = (annual_return - spec.rf_annual) / annual_vol
    return BacktestReport(
        name=name,
        annual_volatility_pct=float(annual_vol * 100.0),
        expected_annual_return_pct=float(annual_return * 100.0),
        sharpe=float(sharpe),
        daily_series=daily,
        start_date=spec.start_date,
        end_date=spec.end_date,
        rf_annual=spec.rf_annual,
    )


def compare_backtests(
    baseline: BacktestReport, candidates: list[BacktestReport]
) -> list[BacktestReport]:
    """All reports sorted by Sharpe descending (stable), windows must agree."""
    reports = [baseline, *candidates]
    for r in reports[1:]:
        if (
            r.start_date != baseline.start_date
            or r.end_date != baseline.end_date
            or r.rf_annual != baseline.rf_annual
        ):
            raise WindowMismatch(
                f"report {r.name!r} uses a different window or risk-free rate"
            )
    return sorted(reports, key=lambda r: -r.sharpe)


def write_comparison_csv(reports: list[BacktestReport], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["name", "annual_volatility_pct", "expected_annual_return_pct", "sharpe", "time_sec"]
        )
        for r in reports:
            time_sec = "" if r.wall_time_seconds is None else repr(r.wall_time_seconds)
            writer.writerow(
                [
                    r.name,
                    repr(r.annual_volatility_pct),
                    repr(r.expected_annual_return_pct),
                    repr(r.sharpe),
                    time_sec,
                ]
            )
