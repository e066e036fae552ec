"""Decision space, bi-objective evaluation with costs, and the tangency solver.

Objectives follow the minimisation convention: (risk, negated cost-adjusted
return).  Constraint handling is a scalar violation ``cv`` consumed by the
feasibility-first dominance rule in :mod:`paretofolio.evolve`.
"""

from __future__ import annotations

import math

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SolverFailure, ZeroVolatility
from .market_data import MarketModel

TRADING_DAYS = 252


def _as_vector(w) -> np.ndarray:
    return np.asarray(w, dtype=float).ravel()


@dataclass(frozen=True)
class CostSpec:
    """Risk aversion, transaction/holding cost trade-offs and the leverage cap."""

    gamma: float = 1.0
    gamma_t: float = 1.0
    gamma_h: float = 1.0
    w0: np.ndarray | None = None
    trade_rate: float | np.ndarray = 0.001
    borrow_rate: float | np.ndarray = 0.0005
    l_max: float = 1.0
    mode: str = "simplex"  # "simplex" (long-only) or "leveraged"

    def __post_init__(self):
        if self.gamma_t < 0 or self.gamma_h < 0 or self.l_max < 0:
            raise ValueError("cost trade-offs and l_max must be >= 0")
        if self.mode not in ("simplex", "leveraged"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def initial_weights(self, n: int) -> np.ndarray:
        if self.w0 is None:
            return np.full(n, 1.0 / n)
        w0 = _as_vector(self.w0)
        if w0.size != n:
            raise DimensionMismatch(f"w0 has {w0.size} entries, expected {n}")
        return w0

    def rates(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        tr = np.broadcast_to(np.asarray(self.trade_rate, float), (n,))
        br = np.broadcast_to(np.asarray(self.borrow_rate, float), (n,))
        return tr, br


@dataclass(frozen=True)
class ObjectivePoint:
    """One evaluated candidate: (risk, -return) plus constraint violation."""

    risk: float
    neg_return: float
    cv: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.cv == 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.risk, self.neg_return])


def portfolio_variance(w, sigma) -> float:
    w = _as_vector(w)
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (w.size, w.size):
        raise DimensionMismatch(f"sigma {sigma.shape} vs weights of length {w.size}")
    return float(w @ sigma @ w)


def portfolio_return(w, mu) -> float:
    w = _as_vector(w)
    mu = _as_vector(mu)
    if mu.size != w.size:
        raise DimensionMismatch(f"mu has {mu.size} entries, weights {w.size}")
    return float(w @ mu)


def trade_cost(w, spec: CostSpec) -> float:
    """Linear proportional cost of moving from spec.w0 to w."""
    w = _as_vector(w)
    w0 = spec.initial_weights(w.size)
    tr, _ = spec.rates(w.size)
    return float(np.sum(tr * np.abs(w - w0)))


def holding_cost(w, spec: CostSpec) -> float:
    """Borrow cost on short legs only; zero for any long-only portfolio."""
    w = _as_vector(w)
    _, br = spec.rates(w.size)
    return float(np.sum(br * np.maximum(-w, 0.0)))


def utility(w, model: MarketModel, spec: CostSpec) -> float:
    """Cost-augmented mean-variance utility (maximisation convention)."""
    return (
        portfolio_return(w, model.mu)
        - 0.5 * spec.gamma * portfolio_variance(w, model.sigma)
        - spec.gamma_t * trade_cost(w, spec)
        - spec.gamma_h * holding_cost(w, spec)
    )


def leverage(w) -> float:
    return math.fsum(np.abs(_as_vector(w)))


def is_feasible(w, spec: CostSpec) -> tuple[bool, float]:
    """Leverage-cap violation, plus the budget equality in simplex mode."""
    w = _as_vector(w)
    cv = max(0.0, leverage(w) - spec.l_max)
    if spec.mode == "simplex":
        cv += abs(math.fsum(w) - 1.0)
    return cv == 0.0, cv


def sharpe_ratio(w, model: MarketModel, annualized: bool = False) -> float:
    var = portfolio_variance(w, model.sigma)
    if var <= 0.0:
        raise ZeroVolatility("portfolio variance is zero")
    sr = (portfolio_return(w, model.mu) - model.rf) / np.sqrt(var)
    return float(sr * np.sqrt(TRADING_DAYS)) if annualized else float(sr)


def repair_to_simplex(raw) -> np.ndarray:
    """Clip negatives, renormalise to sum 1; all-zero input decodes to equal weights.

    The final element absorbs floating-point rounding so the budget holds
    exactly.
    """
    raw = _as_vector(raw)
    w = np.maximum(raw, 0.0)
    total = w.sum()
    w = np.full(raw.size, 1.0 / raw.size) if total <= 0.0 else w / total
    # the largest element absorbs rounding so the exactly-rounded sum
    # (math.fsum, which feasibility also uses) equals 1.0
    j = int(np.argmax(w))
    w[j] = 0.0
    w[j] = max(1.0 - math.fsum(w), 0.0)
    for _ in range(4):
        residual = 1.0 - math.fsum(w)
        if residual == 0.0:
            break
        w[j] = max(w[j] + residual, 0.0)
    return w


def decode(raw_genome, spec: CostSpec) -> np.ndarray:
    if spec.mode == "simplex":
        return repair_to_simplex(raw_genome)
    return _as_vector(raw_genome)


def evaluate(raw_genome, model: MarketModel, spec: CostSpec) -> ObjectivePoint:
    """Decode a genome and score it as (risk, -cost-adjusted return, cv)."""
    w = decode(raw_genome, spec)
    if w.size != model.n_assets:
        raise DimensionMismatch(f"genome length {w.size} vs {model.n_assets} assets")
    risk = portfolio_variance(w, model.sigma)
    net_return = (
        portfolio_return(w, model.mu)
        - spec.gamma_t * trade_cost(w, spec)
        - spec.gamma_h * holding_cost(w, spec)
    )
    _, cv = is_feasible(w, spec)
    return ObjectivePoint(risk=risk, neg_return=-net_return, cv=cv)


@dataclass(frozen=True)
class PortfolioProblem:
    """Evaluation closure handed to the optimisers."""

    model: MarketModel
    spec: CostSpec = field(default_factory=CostSpec)

    @property
    def n_var(self) -> int:
        return self.model.n_assets

    def evaluate(self, raw_genome) -> ObjectivePoint:
        return self.evaluate_with_costs(raw_genome)

    def evaluate_with_costs(self, raw_genome) -> ObjectivePoint:
        return evaluate(raw_genome, self.model, self.spec)

    def decode(self, raw_genome) -> np.ndarray:
        return decode(raw_genome, self.spec)


def tangency_weights_for_gamma(
    model: MarketModel,
    gamma_l2: float,
    n_starts: int = 64,
    n_iters: int = 500,
    seed: int = 0,
) -> np.ndarray:
    """Max-Sharpe weights over the long-only simplex with an L2 pull to uniform.

    Maximises sharpe(w) - gamma_l2 * ||w||^2 by a projected multi-start
    local search: random Gaussian steps repaired back onto the simplex,
    with a step size that shrinks on rejection.
    """
    if gamma_l2 < 0:
        raise ValueError("gamma_l2 must be >= 0")
    n = model.n_assets
    if n == 1:
        return np.array([1.0])

    def objective(w: np.ndarray) -> float:
        var = portfolio_variance(w, model.sigma)
        if var <= 0.0:
            return -np.inf
        sr = (portfolio_return(w, model.mu) - model.rf) / np.sqrt(var)
        return sr - gamma_l2 * float(w @ w)

    rng = np.random.Generator(np.random.PCG64(seed))
    best_w, best_f = None, -np.inf
    for start in range(n_starts):
        w = np.full(n, 1.0 / n) if start == 0 else repair_to_simplex(rng.dirichlet(np.ones(n)))
        f = objective(w)
        step = 0.25
        for _ in range(n_iters):
            cand = repair_to_simplex(w + rng.normal(0.0, step, n))
            fc = objective(cand)
            if fc > f:
                w, f = cand, fc
            else:
                step = max(step * 0.97, 1e-4)
        if f > best_f:
            best_w, best_f = w, f

    if best_w is None or not np.isfinite(best_f):
        raise SolverFailure("no feasible point with positive variance found")
    return best_w


def two_asset_frontier(model: MarketModel, n_points: int = 100) -> np.ndarray:
    """Closed-form attainable set for n=2: (variance, return) along w1 in [0,1]."""
    if model.n_assets != 2:
        raise DimensionMismatch("closed-form frontier needs exactly 2 assets")
    w1 = np.linspace(0.0, 1.0, n_points)
    weights = np.stack([w1, 1.0 - w1], axis=1)
    risk = np.einsum("ki,ij,kj->k", weights, model.sigma, weights)
    ret = weights @ model.mu
    return np.stack([risk, ret], axis=1)
