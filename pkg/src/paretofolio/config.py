"""Experiment configuration: a flat ``key = value`` file with dotted keys,
overridable by CLI flags.  Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace

from .evolve import RunConfig
from .market_data import MarketModelConfig, NoiseSpec
from .portfolio import CostSpec
from .surrogate import SurrogateConfig


@dataclass(frozen=True)
class ExperimentConfig:
    prices_path: str = "prices.csv"
    market_ticker: str | None = None  # None -> equal-weight proxy
    universe_k: int = 10
    noise_target: str = "returns"  # or "prices"
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    cost: CostSpec = field(default_factory=CostSpec)
    run: RunConfig = field(default_factory=RunConfig)
    surrogate: SurrogateConfig = field(default_factory=SurrogateConfig)
    model: MarketModelConfig = field(default_factory=MarketModelConfig)
    hv_ref: tuple[float, float] = (1.1, 1.1)
    backtest_start: dt.date | None = None
    backtest_end: dt.date | None = None
    backtest_rebalance_every: int | None = None
    gamma_l2_grid: tuple[float, ...] = (0.0, 0.01, 0.1, 1.0)
    out_dir: str = "out"


def _parse_scalar(raw: str):
    raw = raw.strip()
    lowered = raw.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("none", ""):
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_config_text(text: str) -> dict:
    """Flat key = value lines; '#' starts a comment; lists are comma-separated."""
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if "," in raw:
            values[key] = tuple(_parse_scalar(tok) for tok in raw.split(","))
        else:
            values[key] = _parse_scalar(raw)
    return values


_KEY_MAP = {
    "data.prices": ("prices_path", str),
    "data.market": ("market_ticker", str),
    "universe.k": ("universe_k", int),
    "noise.target": ("noise_target", str),
    "out.dir": ("out_dir", str),
}

_NOISE_KEYS = {"noise.mean": "mean", "noise.std_dev": "std_dev", "noise.seed": "seed"}
_COST_KEYS = {
    "cost.gamma": "gamma",
    "cost.gamma_t": "gamma_t",
    "cost.gamma_h": "gamma_h",
    "cost.trade_rate": "trade_rate",
    "cost.borrow_rate": "borrow_rate",
    "cost.l_max": "l_max",
    "cost.mode": "mode",
}
_RUN_KEYS = {
    "evolve.pop_size": "pop_size",
    "evolve.generations": "generations",
    "evolve.runs": "runs",
    "evolve.seed": "seed",
    "evolve.algorithm": "algorithm",
    "evolve.eta_c": "eta_c",
    "evolve.prob_c": "prob_c",
    "evolve.eta_m": "eta_m",
    "evolve.prob_m": "prob_m",
}
_SURROGATE_KEYS = {
    "surrogate.alpha": "alpha",
    "surrogate.beta": "beta",
    "surrogate.n_max_doe": "n_max_doe",
    "surrogate.n_max_infills": "n_max_infills",
    "surrogate.seed": "seed",
}
_MODEL_KEYS = {
    "model.rf_annual": "rf_annual",
    "model.periods_per_year": "periods_per_year",
    "model.shrinkage_alpha": "shrinkage_alpha_override",
}


def build_config(values: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    noise, cost, run, surro, model = {}, {}, {}, {}, {}
    updates: dict[str, object] = {}
    for key, value in values.items():
        if key in _KEY_MAP:
            attr, cast = _KEY_MAP[key]
            updates[attr] = None if value is None else cast(value)
        elif key in _NOISE_KEYS:
            noise[_NOISE_KEYS[key]] = value
        elif key in _COST_KEYS:
            cost[_COST_KEYS[key]] = value
        elif key in _RUN_KEYS:
            run[_RUN_KEYS[key]] = value
        elif key in _SURROGATE_KEYS:
            surro[_SURROGATE_KEYS[key]] = value
        elif key in _MODEL_KEYS:
            model[_MODEL_KEYS[key]] = value
        elif key == "hv.ref":
            updates["hv_ref"] = tuple(float(v) for v in value)
        elif key == "backtest.start":
            updates["backtest_start"] = dt.date.fromisoformat(str(value))
        elif key == "backtest.end":
            updates["backtest_end"] = dt.date.fromisoformat(str(value))
        elif key == "backtest.rebalance_every":
            updates["backtest_rebalance_every"] = value
        elif key == "backtest.gamma_l2_grid":
            grid = value if isinstance(value, tuple) else (value,)
            updates["gamma_l2_grid"] = tuple(float(v) for v in grid)
        else:
            raise ValueError(f"unknown config key {key!r}")
    if noise:
        updates["noise"] = replace(cfg.noise, **noise)
    if cost:
        updates["cost"] = replace(cfg.cost, **cost)
    if run:
        updates["run"] = replace(cfg.run, **run)
    if surro:
        updates["surrogate"] = replace(cfg.surrogate, **surro)
    if model:
        updates["model"] = replace(cfg.model, **model)
    return replace(cfg, **updates)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return build_config(parse_config_text(fh.read()))
