"""Gaussian-process surrogate layer: DOE, per-output GP regression and the
offspring pre-screening loop that limits exact evaluations to an initial
design plus per-generation infills.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularKernel
from .evolve import (
    Algorithm,
    Genome,
    OptimizerRun,
    RunConfig,
    _apply_ranks_and_crowding,
    _feasible_front,
    _merge_archive,
    fast_non_dominated_sort,
    finalize_hv_traces,
    make_algorithm,
    make_offspring,
)
from .portfolio import ObjectivePoint

LENGTH_SCALE_GRID = (0.05, 0.1, 0.2, 0.5, 1.0)
SIGNAL_VAR_GRID = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class SurrogateConfig:
    """Knobs of the pre-screening layer.

    alpha: surrogate-space survival rounds applied to the offspring pool.
    beta: pool size as a multiple of pop_size.
    n_max_doe: exact evaluations spent on the initial Latin-hypercube design.
    n_max_infills: exact evaluations allowed per generation.
    """

    alpha: int = 2
    beta: int = 4
    n_max_doe: int = 24
    n_max_infills: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 1:
            raise ValueError("need alpha >= 0 and beta >= 1")
        if self.n_max_infills < 1:
            raise ValueError("n_max_infills must be >= 1")


def latin_hypercube(n: int, d: int, seed: int) -> np.ndarray:
    """n points in [0,1)^d, one per stratum [k/n, (k+1)/n) per dimension."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = np.empty((n, d))
    for j in range(d):
        strata = (rng.permutation(n) + rng.uniform(0.0, 1.0, n)) / n
        samples[:, j] = strata
    return samples


class GPRegressor:
    """Squared-exponential GP with grid-searched hyperparameters.

    fit(x, y) selects (length_scale, signal_var) by maximum log marginal
    likelihood over a fixed grid; observation noise is pinned to
    1e-6 * var(y) + 1e-10.  predict(x) returns posterior means and
    variances (clipped at zero).
    """

    def __init__(self):
        self.length_scale: float | None = None
        self.signal_var: float | None = None
        self.noise_var: float | None = None

    def get_params(self) -> dict:
        return {
            "length_scale": self.length_scale,
            "signal_var": self.signal_var,
            "noise_var": self.noise_var,
        }

    def _kernel(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        sq = np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :] - 2.0 * a @ b.T
        sq = np.maximum(sq, 0.0)
        return self.signal_var * np.exp(-sq / (2.0 * self.length_scale**2))

    @staticmethod
    def _chol_with_jitter(k: np.ndarray) -> np.ndarray:
        jitter = 1e-10
        while jitter <= 1e-6:
            try:
                return np.linalg.cholesky(k + jitter * np.eye(k.shape[0]))
            except np.linalg.LinAlgError:
                jitter *= 10.0
        raise SingularKernel("kernel matrix not positive definite after jitter escalation")

    def fit(self, x: np.ndarray, y: np.ndarray) -> "GPRegressor":
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.asarray(y, dtype=float).ravel()
        if x.shape[0] < 2:
            raise ValueError("need at least 2 training points")
        if not np.all(np.isfinite(y)):
            raise ValueError("training targets must be finite")
        self.train_x = x
        self.y_mean = float(y.mean())
        yc = y - self.y_mean
        var_y = max(float(y.var()), 1e-12)
        self.noise_var = 1e-6 * var_y + 1e-10

        best = (-np.inf, None, None, None, None)
        n = x.shape[0]
        for ls in LENGTH_SCALE_GRID:
            for sv_mult in SIGNAL_VAR_GRID:
                self.length_scale = ls
                self.signal_var = sv_mult * var_y
                k = self._kernel(x, x) + self.noise_var * np.eye(n)
                try:
                    chol = self._chol_with_jitter(k)
                except SingularKernel:
                    continue
                alpha = np.linalg.solve(chol.T, np.linalg.solve(chol, yc))
                lml = (
                    -0.5 * yc @ alpha
                    - np.sum(np.log(np.diag(chol)))
                    - 0.5 * n * np.log(2.0 * np.pi)
                )
                if lml > best[0]:
                    best = (lml, ls, self.signal_var, chol, alpha)
        if best[1] is None:
            raise SingularKernel("no hyperparameter setting produced a usable kernel")
        _, self.length_scale, self.signal_var, self._chol, self._alpha = best
        return self

    def predict(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        k_star = self._kernel(self.train_x, x)  # (n_train, n_query)
        mean = k_star.T @ self._alpha + self.y_mean
        v = np.linalg.solve(self._chol, k_star)
        var = self.signal_var - np.sum(v * v, axis=0)
        return mean, np.maximum(var, 0.0)


def gp_fit(x: np.ndarray, y: np.ndarray) -> GPRegressor:
    return GPRegressor().fit(x, y)


def gp_predict(model: GPRegressor, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return model.predict(x)


@dataclass
class _ExactArchive:
    """Deduplicated record of every exactly evaluated genome."""

    genes: list[np.ndarray] = field(default_factory=list)
    objectives: list[ObjectivePoint] = field(default_factory=list)
    _seen: set = field(default_factory=set)

    def add(self, genome: Genome) -> None:
        key = genome.genes.tobytes()
        if key in self._seen:
            return
        self._seen.add(key)
        self.genes.append(genome.genes.copy())
        self.objectives.append(genome.objectives)

    def training_sets(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        x = np.array(self.genes)
        risk = np.array([o.risk for o in self.objectives])
        neg_ret = np.array([o.neg_return for o in self.objectives])
        cv = np.array([o.cv for o in self.objectives])
        return x, risk, neg_ret, cv


def _fit_surrogates(archive: _ExactArchive) -> tuple[GPRegressor, GPRegressor, GPRegressor]:
    x, risk, neg_ret, cv = archive.training_sets()
    return gp_fit(x, risk), gp_fit(x, neg_ret), gp_fit(x, cv)


def _doe_population(
    problem, run_config: RunConfig, s_config: SurrogateConfig, archive: _ExactArchive
) -> list[Genome]:
    """Evaluate the LHS design exactly and keep the best pop_size members."""
    n_doe = max(s_config.n_max_doe, run_config.pop_size)
    genes = latin_hypercube(n_doe, problem.n_var, s_config.seed + 0x5EED)
    doe = [Genome(g.copy()) for g in genes]
    for g in doe:
        g.objectives = problem.evaluate(g.genes)
        archive.add(g)
    _apply_ranks_and_crowding(doe)
    ordered = sorted(range(len(doe)), key=lambda i: (doe[i].rank, -doe[i].crowding, i))
    return [doe[i] for i in ordered[: run_config.pop_size]]


def surrogate_assisted_run(
    algorithm: str | Algorithm,
    problem,
    run_config: RunConfig,
    s_config: SurrogateConfig,
) -> OptimizerRun:
    """GP-filtered generational loop.

    Phase 1 evaluates a Latin-hypercube design exactly and seeds the
    population from its best members.  Each generation then breeds a
    beta*pop_size pool, scores it on the GPs, shrinks it with alpha rounds
    of the host algorithm's survival rule in surrogate space, and promotes
    only n_max_infills survivors to exact evaluation.  Only exactly
    evaluated members ever enter the real population or the reported fronts.
    """
    if isinstance(algorithm, str):
        algorithm = make_algorithm(algorithm, run_config.pop_size)
    rng = np.random.Generator(np.random.PCG64(run_config.seed))
    t0 = time.perf_counter()

    archive_points = _ExactArchive()
    pop = _doe_population(problem, run_config, s_config, archive_points)
    algorithm.prepare(pop)

    result = OptimizerRun(algorithm=f"sa_{algorithm.name}", seed=run_config.seed)
    hv_archive = _feasible_front(pop)

    models = None
    for _ in range(run_config.generations):
        pool = make_offspring(
            algorithm, pop, s_config.beta * run_config.pop_size, run_config, rng
        )

        use_surrogate = len(archive_points.genes) >= 2 and (
            s_config.alpha > 0 or s_config.n_max_infills < len(pool)
        )
        if use_surrogate:
            try:
                if models is None:
                    models = _fit_surrogates(archive_points)
                gp_risk, gp_ret, gp_cv = models
                genes = np.array([g.genes for g in pool])
                risk_hat, _ = gp_risk.predict(genes)
                ret_hat, _ = gp_ret.predict(genes)
                cv_hat, _ = gp_cv.predict(genes)
                for g, r, nr, c in zip(pool, risk_hat, ret_hat, cv_hat):
                    g.objectives = ObjectivePoint(float(r), float(nr), max(float(c), 0.0))
                    g.eval_kind = "surrogate"
                for _ in range(s_config.alpha):
                    target = max(s_config.n_max_infills, (len(pool) + 1) // 2)
                    if target >= len(pool):
                        break
                    pool = algorithm.survive(pool, target)
                if s_config.n_max_infills < len(pool):
                    pool = algorithm.survive(pool, s_config.n_max_infills)
            except SingularKernel:
                result.notes.append("gp fit failed; exact evaluation for this generation")
                pool = pool[: s_config.n_max_infills]

        infills = pool[: s_config.n_max_infills]
        for g in infills:
            g.objectives = problem.evaluate(g.genes)
            g.eval_kind = "exact"
            archive_points.add(g)
        models = None  # refit next generation on the grown archive

        pop = algorithm.survive(pop + infills, run_config.pop_size)
        algorithm.prepare(pop)

        hv_archive = _merge_archive(hv_archive, _feasible_front(pop))
        result.fronts_per_generation.append(_feasible_front(pop))
        result.archive_fronts.append(hv_archive.copy())
        result.population_trace.append(np.array([g.genes for g in pop]))

    result.wall_time_seconds = time.perf_counter() - t0
    result.exact_evals = len(archive_points.genes)
    result.final_population = pop
    fronts = fast_non_dominated_sort([g.objectives for g in pop])
    result.final_front = [pop[i] for i in fronts[0]]
    finalize_hv_traces(result)
    return result
