"""Experiment orchestration CLI.

Subcommands: ``prepare`` (clean + forecast + universe files), ``optimize``
(seeded optimisation campaigns), ``backtest`` (weight validation), and
``report`` (combined tables).  All outputs are plain CSV; reruns with an
identical config are byte-identical except for the timing file.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import backtest as bt
from . import market_data as md
from .config import ExperimentConfig, load_config
from .errors import ParetofolioError
from .evolve import finalize_hv_traces, run as run_evolve
from .indicators import aggregate_traces, front_bounds
from .portfolio import PortfolioProblem, tangency_weights_for_gamma, sharpe_ratio
from .surrogate import surrogate_assisted_run


def _thread_count() -> int:
    raw = os.environ.get("PARETOFOLIO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _prepare_paths(out_dir: str) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return {
        "clean": out / "clean.csv",
        "forecast": out / "forecast.csv",
        "universe": out / "universe.txt",
    }


def cmd_prepare(cfg: ExperimentConfig) -> int:
    paths = _prepare_paths(cfg.out_dir)
    raw = md.load_prices(cfg.prices_path, dedup=True)
    cleaned = md.clean(raw)
    md.write_prices_csv(cleaned, paths["clean"])

    if cfg.noise_target == "prices":
        noisy_prices = md.add_forecast_noise(
            md.ReturnsFrame(cleaned.dates, cleaned.tickers, cleaned.prices), cfg.noise
        )
        frame = md.PriceFrame(cleaned.dates, cleaned.tickers, np.maximum(noisy_prices.returns, 1e-6))
        forecast = md.simple_returns(frame)
    else:
        forecast = md.add_forecast_noise(md.simple_returns(cleaned), cfg.noise)
    md.write_returns_csv(forecast, paths["forecast"])

    market = _market_series(forecast, cfg)
    mu = md.capm_expected_returns(forecast, market, cfg.model.rf_per_period)
    k = min(cfg.universe_k, len(forecast.tickers))
    universe = md.select_top_k(mu, forecast.tickers, k)
    paths["universe"].write_text("\n".join(universe) + "\n", encoding="utf-8")

    print(
        f"prepared: {cleaned.n_dates} rows x {cleaned.n_tickers} tickers "
        f"(raw {raw.n_dates} x {raw.n_tickers}); universe of {len(universe)}"
    )
    return 0


def _market_series(returns: md.ReturnsFrame, cfg: ExperimentConfig) -> np.ndarray:
    if cfg.market_ticker and cfg.market_ticker in returns.tickers:
        return returns.returns[:, returns.tickers.index(cfg.market_ticker)]
    return returns.returns.mean(axis=1)


def _load_prepared(cfg: ExperimentConfig):
    paths = _prepare_paths(cfg.out_dir)
    for p in paths.values():
        if not p.exists():
            raise FileNotFoundError(f"missing prepared file {p}; run 'prepare' first")
    cleaned = md.load_prices(paths["clean"])
    forecast = md.load_returns_csv(paths["forecast"])
    universe = [t for t in paths["universe"].read_text(encoding="utf-8").splitlines() if t]
    return cleaned, forecast, universe


def _build_problem(cfg: ExperimentConfig, forecast: md.ReturnsFrame, universe: list[str]):
    market = _market_series(forecast, cfg)
    cols = [forecast.tickers.index(t) for t in universe]
    sub = md.ReturnsFrame(forecast.dates, tuple(universe), forecast.returns[:, cols])
    model = md.build_market_model(sub, market, cfg.model)
    return PortfolioProblem(model, cfg.cost), model


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_optimize(cfg: ExperimentConfig, surrogate: bool) -> int:
    _, forecast, universe = _load_prepared(cfg)
    problem, _ = _build_problem(cfg, forecast, universe)

    def one_run(i: int):
        run_cfg = replace(cfg.run, seed=cfg.run.seed + i)
        if surrogate:
            s_cfg = replace(cfg.surrogate, seed=run_cfg.seed)
            return surrogate_assisted_run(cfg.run.algorithm, problem, run_cfg, s_cfg)
        return run_evolve(cfg.run.algorithm, problem, run_cfg)

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        runs = list(pool.map(one_run, range(cfg.run.runs)))

    # experiment-wide normalization so HV is comparable across runs
    all_points = [
        f
        for r in runs
        for f in (r.archive_fronts + r.fronts_per_generation)
        if f.size
    ]
    bounds = front_bounds(np.vstack(all_points)) if all_points else None
    if bounds is not None:
        for r in runs:
            finalize_hv_traces(r, bounds, cfg.hv_ref)

    out = Path(cfg.out_dir)
    label = ("sa_" if surrogate else "") + cfg.run.algorithm
    for i, r in enumerate(runs):
        rows = [(repr(float(p[0])), repr(float(-p[1]))) for p in r.fronts_per_generation[-1]]
        _write_csv(out / f"front_{label}_{i}.csv", ["risk", "return"], rows)

    summary = aggregate_traces(runs)
    _write_csv(
        out / f"hv_trace_{label}.csv",
        ["generation", "mean_hv", "std_hv"],
        [
            (g, repr(float(m)), repr(float(s)))
            for g, (m, s) in enumerate(zip(summary.mean_hv, summary.std_hv))
        ],
    )
    _write_csv(
        out / f"summary_{label}.csv",
        ["algorithm", "mean_hv"],
        [(label, repr(float(summary.mean_hv[-1])))],
    )
    # timing is machine-dependent, so it lives in its own file
    _write_csv(
        out / f"timing_{label}.csv",
        ["algorithm", "mean_time_sec"],
        [(label, repr(summary.mean_wall_time))],
    )
    print(
        f"{label}: {cfg.run.runs} runs, final mean HV {summary.mean_hv[-1]:.4f}, "
        f"mean time {summary.mean_wall_time:.3f}s"
    )
    return 0


def _backtest_window(cfg: ExperimentConfig, cleaned: md.PriceFrame):
    start = cfg.backtest_start or cleaned.dates[max(0, cleaned.n_dates - 253)]
    end = cfg.backtest_end or cleaned.dates[-1]
    return start, end


def _load_weights_file(path, universe: list[str]) -> np.ndarray:
    weights = dict.fromkeys(universe, 0.0)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParetofolioError(f"weights file {path} is empty")
        for row in reader:
            if len(row) < 2:
                continue
            ticker, value = row[0].strip(), float(row[1])
            if ticker not in weights:
                raise ParetofolioError(f"weights file names unknown ticker {ticker!r}")
            weights[ticker] = value
    return np.array([weights[t] for t in universe])


def cmd_backtest(cfg: ExperimentConfig, weights_file: str | None) -> int:
    cleaned, forecast, universe = _load_prepared(cfg)
    _, model = _build_problem(cfg, forecast, universe)
    start, end = _backtest_window(cfg, cleaned)

    def report_for(name: str, weights: np.ndarray, time_sec=None) -> bt.BacktestReport:
        spec = bt.BacktestSpec(
            weights=weights,
            tickers=tuple(universe),
            start_date=start,
            end_date=end,
            rebalance_every=cfg.backtest_rebalance_every,
            rf_annual=cfg.model.rf_annual,
        )
        rep = bt.run_backtest(cleaned, spec, name=name)
        return replace(rep, wall_time_seconds=time_sec) if time_sec is not None else rep

    n = len(universe)
    baseline = report_for("no_ga", np.full(n, 1.0 / n))

    candidates = []
    if weights_file is not None:
        candidates.append(report_for("file", _load_weights_file(weights_file, universe)))
    else:
        import time as _time

        t0 = _time.perf_counter()
        best_w, best_sr = None, -np.inf
        for gamma_l2 in cfg.gamma_l2_grid:
            w = tangency_weights_for_gamma(model, gamma_l2, seed=cfg.run.seed)
            sr = sharpe_ratio(w, model)
            if sr > best_sr:
                best_w, best_sr = w, sr
        candidates.append(
            report_for(cfg.run.algorithm, best_w, time_sec=_time.perf_counter() - t0)
        )

    reports = bt.compare_backtests(baseline, candidates)
    out_path = Path(cfg.out_dir) / "backtest.csv"
    bt.write_comparison_csv(reports, out_path)
    for r in reports:
        print(
            f"{r.name}: vol {r.annual_volatility_pct:.2f}% "
            f"return {r.expected_annual_return_pct:.2f}% SR {r.sharpe:.3f}"
        )
    return 0


def cmd_report(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out_dir)
    rows = []
    for summary in sorted(out.glob("summary_*.csv")):
        with open(summary, newline="", encoding="utf-8") as fh:
            for row in list(csv.reader(fh))[1:]:
                rows.append((row[0], float(row[1])))
    if rows:
        print(f"{'algorithm':<16}{'mean_hv':>10}")
        for name, hv in rows:
            print(f"{name:<16}{hv:>10.4f}")
    backtest_path = out / "backtest.csv"
    if backtest_path.exists():
        print(backtest_path.read_text(encoding="utf-8").rstrip())
    if not rows and not backtest_path.exists():
        print(f"no result files in {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretofolio",
        description="Constrained bi-objective portfolio optimisation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("prepare", "optimize", "backtest", "report"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument(
            "--algorithm",
            choices=["nsga2", "rnsga2", "nsga3", "unsga3"],
            default=None,
        )
        p.add_argument("--surrogate", action="store_true")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        if name == "backtest":
            p.add_argument("--weights-file", default=None)
    return parser


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    run = cfg.run
    if args.algorithm is not None:
        run = replace(run, algorithm=args.algorithm)
    if args.seed is not None:
        run = replace(run, seed=args.seed)
    updates = {"run": run}
    if args.out is not None:
        updates["out_dir"] = args.out
    return replace(cfg, **updates)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        cfg = _apply_overrides(cfg, args)
        if args.command == "prepare":
            return cmd_prepare(cfg)
        if args.command == "optimize":
            return cmd_optimize(cfg, args.surrogate)
        if args.command == "backtest":
            return cmd_backtest(cfg, args.weights_file)
        return cmd_report(cfg)
    except ParetofolioError as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"ERROR FILE_NOT_FOUND: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"ERROR INVALID_INPUT: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
