"""Price ingestion, cleaning, return/covariance estimation and universe selection.

The estimators here feed the optimisation layer: CAPM expected returns,
Ledoit-Wolf shrunk covariance, seeded forecast noise, and top-k selection
by expected return.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyFrame,
    KTooLarge,
    MalformedRow,
    TooFewObservations,
    TooFewRows,
    ZeroMarketVariance,
)


@dataclass(frozen=True)
class PriceFrame:
    """Dated per-asset adjusted-close matrix.

    ``prices`` is |dates| x |tickers|.  NaN cells may be present before
    :func:`clean` runs; afterwards the frame is dense, dates are strictly
    increasing and all prices are positive.
    """

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "prices", np.asarray(self.prices, dtype=float))
        if self.prices.shape != (len(self.dates), len(self.tickers)):
            raise EmptyFrame(
                f"price matrix shape {self.prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    @property
    def n_tickers(self) -> int:
        return len(self.tickers)

    def window(self, start: dt.date, end: dt.date) -> "PriceFrame":
        """Sub-frame with start <= date <= end."""
        idx = [i for i, d in enumerate(self.dates) if start <= d <= end]
        return PriceFrame(
            tuple(self.dates[i] for i in idx), self.tickers, self.prices[idx]
        )

    def select(self, tickers: list[str] | tuple[str, ...]) -> "PriceFrame":
        cols = [self.tickers.index(t) for t in tickers]
        return PriceFrame(self.dates, tuple(tickers), self.prices[:, cols])


@dataclass(frozen=True)
class ReturnsFrame:
    """Simple per-period returns; one row fewer than the source PriceFrame."""

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    returns: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "returns", np.asarray(self.returns, dtype=float))

    @property
    def n_periods(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class MarketModel:
    """Expected returns and shrunk covariance for one universe, per-period units."""

    mu: np.ndarray
    sigma: np.ndarray
    shrinkage_alpha: float
    rf: float = 0.0
    tickers: tuple[str, ...] = ()

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        if sigma.shape != (mu.size, mu.size):
            raise EmptyFrame("mu / sigma dimension mismatch")
        if not np.allclose(sigma, sigma.T, atol=1e-10):
            raise EmptyFrame("sigma must be symmetric")
        if not 0.0 <= self.shrinkage_alpha <= 1.0:
            raise EmptyFrame("shrinkage_alpha outside [0, 1]")

    @property
    def n_assets(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class NoiseSpec:
    """Additive Gaussian forecast-noise parameters."""

    mean: float = 0.0
    std_dev: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.std_dev < 0:
            raise ValueError("std_dev must be >= 0")


def _parse_date(token: str, line: int) -> dt.date:
    try:
        return dt.date.fromisoformat(token.strip())
    except ValueError as exc:
        raise MalformedRow(line, f"bad date {token!r}: {exc}") from None


def load_prices(path, dedup: bool = False) -> PriceFrame:
    """Parse a ``date,<t1>,<t2>,...`` CSV into a PriceFrame.

    Empty cells become NaN (handled later by :func:`clean`); any other
    non-numeric cell raises :class:`MalformedRow` with its line number.
    Duplicate dates raise unless ``dedup`` keeps the first occurrence.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFrame(f"{path} is empty") from None
        if len(header) < 2 or header[0].strip().lower() != "date":
            raise MalformedRow(1, "header must be 'date,<ticker>,...'")
        tickers = tuple(t.strip() for t in header[1:])

        dates: list[dt.date] = []
        rows: list[list[float]] = []
        seen: set[dt.date] = set()
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(tickers) + 1:
                raise MalformedRow(lineno, f"expected {len(tickers) + 1} columns, got {len(row)}")
            date = _parse_date(row[0], lineno)
            if date in seen:
                if dedup:
                    continue
                raise MalformedRow(lineno, f"duplicate date {date}")
            values = []
            for col, cell in zip(tickers, row[1:]):
                cell = cell.strip()
                if cell == "":
                    values.append(np.nan)
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise MalformedRow(lineno, f"non-numeric cell {cell!r} in column {col}") from None
            seen.add(date)
            dates.append(date)
            rows.append(values)

    if not rows:
        raise EmptyFrame(f"{path} contains no data rows")
    order = np.argsort(np.array([d.toordinal() for d in dates]), kind="stable")
    prices = np.asarray(rows, dtype=float)[order]
    return PriceFrame(tuple(dates[i] for i in order), tickers, prices)


def clean(frame: PriceFrame, max_missing_frac: float = 0.5) -> PriceFrame:
    """Drop sparse tickers, duplicate dates and incomplete rows.

    Tickers with more than ``max_missing_frac`` missing cells are removed
    first so one sparse column cannot wipe out the whole history; remaining
    rows with any missing or non-positive price are dropped.  Idempotent.
    """
    if frame.n_dates == 0 or frame.n_tickers == 0:
        raise EmptyFrame("cannot clean an empty frame")

    prices = frame.prices.copy()
    bad = ~np.isfinite(prices) | (prices <= 0.0)

    keep_cols = np.where(bad.mean(axis=0) <= max_missing_frac)[0]
    if keep_cols.size == 0:
        raise EmptyFrame("all tickers exceeded the missing-data threshold")
    prices = prices[:, keep_cols]
    bad = bad[:, keep_cols]
    tickers = tuple(frame.tickers[j] for j in keep_cols)

    seen: set[dt.date] = set()
    keep_rows = []
    for i, d in enumerate(frame.dates):
        if d in seen:
            continue
        seen.add(d)
        if not bad[i].any():
            keep_rows.append(i)
    if not keep_rows:
        raise EmptyFrame("cleaning removed every row")

    return PriceFrame(
        tuple(frame.dates[i] for i in keep_rows), tickers, prices[keep_rows]
    )


def simple_returns(frame: PriceFrame) -> ReturnsFrame:
    """Per-period simple returns r[t] = p[t+1]/p[t] - 1, stamped at the later date."""
    if frame.n_dates < 2:
        raise TooFewRows("need at least 2 price rows to compute returns")
    rets = frame.prices[1:] / frame.prices[:-1] - 1.0
    return ReturnsFrame(frame.dates[1:], frame.tickers, rets)


def capm_expected_returns(
    asset_returns: ReturnsFrame, market_returns: np.ndarray, rf: float
) -> np.ndarray:
    """CAPM expected returns: rf + beta_i * (mean(r_m) - rf).

    beta_i is the sample covariance (ddof=1) of asset i with the market
    divided by the sample market variance.
    """
    rm = np.asarray(market_returns, dtype=float)
    if rm.size != asset_returns.n_periods:
        raise TooFewRows("market series length must match asset return rows")
    var_m = np.var(rm, ddof=1)
    if var_m <= 0.0:
        raise ZeroMarketVariance("market return series has zero variance")
    rm_c = rm - rm.mean()
    r_c = asset_returns.returns - asset_returns.returns.mean(axis=0)
    betas = (r_c.T @ rm_c) / (rm.size - 1) / var_m
    return rf + betas * (rm.mean() - rf)


def ledoit_wolf_covariance(
    returns: ReturnsFrame | np.ndarray, alpha_override: float | None = None
) -> tuple[np.ndarray, float]:
    """Shrunk covariance alpha*F + (1-alpha)*S with a scaled-identity target.

    S is the sample covariance with denominator n, F = (tr(S)/p) * I, and
    alpha is the optimal shrinkage intensity for that target, clipped to
    [0, 1].  ``alpha_override`` forces the endpoint cases.
    """
    x = returns.returns if isinstance(returns, ReturnsFrame) else np.asarray(returns, float)
    n, p = x.shape
    if n < 2:
        raise TooFewObservations("need at least 2 observations")

    xc = x - x.mean(axis=0)
    sample = xc.T @ xc / n
    mu = np.trace(sample) / p
    target = mu * np.eye(p)

    if alpha_override is not None:
        alpha = float(np.clip(alpha_override, 0.0, 1.0))
    else:
        # Ledoit-Wolf optimal intensity for the scaled-identity target:
        # alpha = b^2 / d^2 with d^2 = ||S - mu I||^2 and
        # b^2 = min(d^2, mean_k ||x_k x_k' - S||^2 / n), Frobenius norms /p.
        d2 = np.sum((sample - target) ** 2) / p
        if d2 <= 0.0:
            alpha = 0.0
        else:
            b_bar2 = 0.0
            for k in range(n):
                outer = np.outer(xc[k], xc[k])
                b_bar2 += np.sum((outer - sample) ** 2) / p
            b_bar2 /= n * n
            alpha = float(np.clip(min(b_bar2, d2) / d2, 0.0, 1.0))

    shrunk = alpha * target + (1.0 - alpha) * sample
    shrunk = 0.5 * (shrunk + shrunk.T)
    return shrunk, alpha


def add_forecast_noise(returns: ReturnsFrame, spec: NoiseSpec) -> ReturnsFrame:
    """Add seeded N(mean, std_dev) noise cell-wise; same seed gives identical output.

    Uses numpy's PCG64 generator so the stream is reproducible across
    platforms.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    noise = rng.normal(spec.mean, spec.std_dev, size=returns.returns.shape) \
        if spec.std_dev > 0 else np.full(returns.returns.shape, spec.mean)
    return ReturnsFrame(returns.dates, returns.tickers, returns.returns + noise)


def select_top_k(mu: np.ndarray, tickers, k: int) -> list[str]:
    """The k tickers with largest expected return, descending; ties go to the
    lexicographically smaller ticker."""
    mu = np.asarray(mu, dtype=float)
    tickers = list(tickers)
    if k > len(tickers):
        raise KTooLarge(f"k={k} exceeds universe size {len(tickers)}")
    order = sorted(range(len(tickers)), key=lambda i: (-mu[i], tickers[i]))
    return [tickers[i] for i in order[:k]]


@dataclass(frozen=True)
class MarketModelConfig:
    """Knobs for building a MarketModel from a returns frame."""

    rf_annual: float = 0.02
    periods_per_year: int = 252
    shrinkage_alpha_override: float | None = None

    @property
    def rf_per_period(self) -> float:
        return self.rf_annual / self.periods_per_year


def build_market_model(
    returns: ReturnsFrame,
    market_returns: np.ndarray | None = None,
    config: MarketModelConfig = MarketModelConfig(),
) -> MarketModel:
    """Assemble CAPM mu and Ledoit-Wolf sigma into a MarketModel.

    If no market series is supplied, the equal-weighted average of all
    assets is used as the market proxy.
    """
    if market_returns is None:
        market_returns = returns.returns.mean(axis=1)
    rf = config.rf_per_period
    mu = capm_expected_returns(returns, market_returns, rf)
    sigma, alpha = ledoit_wolf_covariance(returns, config.shrinkage_alpha_override)
    return MarketModel(mu, sigma, alpha, rf, returns.tickers)


def write_prices_csv(frame: PriceFrame, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *frame.tickers])
        for d, row in zip(frame.dates, frame.prices):
            writer.writerow([d.isoformat(), *(repr(float(v)) for v in row)])


def write_returns_csv(frame: ReturnsFrame, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *frame.tickers])
        for d, row in zip(frame.dates, frame.returns):
            writer.writerow([d.isoformat(), *(repr(float(v)) for v in row)])


def load_returns_csv(path) -> ReturnsFrame:
    frame = load_prices(path)  # same physical schema
    return ReturnsFrame(frame.dates, frame.tickers, frame.prices)
