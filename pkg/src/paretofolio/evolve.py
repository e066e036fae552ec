"""NSGA-II, R-NSGA-II, NSGA-III and U-NSGA-III over real-valued genomes.

Genes live in [0, 1]^n and are decoded by the problem's evaluate closure.
Dominance is feasibility-first: lower constraint violation wins outright;
Pareto dominance applies among equally-violated points.  All deterministic
ties break toward the lower population index; the RNG is drawn only where a
coin flip is genuinely specified.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .errors import (
    NoDirections,
    NoReferencePoints,
    PopulationTooSmall,
    UnevaluatedPoint,
)
from .portfolio import ObjectivePoint


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class Genome:
    """One candidate: genes in [0,1]^n plus survival bookkeeping."""

    genes: np.ndarray
    objectives: ObjectivePoint | None = None
    rank: int = -1
    crowding: float = 0.0
    niche: int | None = None
    niche_dist: float = math.inf
    eval_kind: str = "exact"

    def copy(self) -> "Genome":
        return Genome(
            genes=self.genes.copy(),
            objectives=self.objectives,
            rank=self.rank,
            crowding=self.crowding,
            niche=self.niche,
            niche_dist=self.niche_dist,
            eval_kind=self.eval_kind,
        )


@dataclass(frozen=True)
class ReferenceDirections:
    dirs: np.ndarray
    partitions: int


@dataclass(frozen=True)
class ReferencePoints:
    points: np.ndarray
    epsilon: float = 0.01

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        object.__setattr__(self, "points", pts)
        if pts.size == 0:
            raise NoReferencePoints("R-NSGA-II needs at least one reference point")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")


@dataclass(frozen=True)
class RunConfig:
    pop_size: int = 12
    generations: int = 30
    runs: int = 10
    seed: int = 0
    algorithm: str = "nsga2"
    eta_c: float = 15.0
    prob_c: float = 0.9
    eta_m: float = 20.0
    prob_m: float | None = None  # None -> 1/n at run time

    def __post_init__(self):
        if self.pop_size < 4 or self.pop_size % 2 != 0:
            raise ValueError("pop_size must be even and >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")


@dataclass
class OptimizerRun:
    """Everything recorded for one seeded run."""

    algorithm: str
    seed: int
    fronts_per_generation: list[np.ndarray] = field(default_factory=list)
    archive_fronts: list[np.ndarray] = field(default_factory=list)
    population_trace: list[np.ndarray] = field(default_factory=list)
    hv_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))
    archive_hv_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))
    hv_bounds: tuple[np.ndarray, np.ndarray] | None = None
    wall_time_seconds: float = 0.0
    final_front: list[Genome] = field(default_factory=list)
    final_population: list[Genome] = field(default_factory=list)
    exact_evals: int = 0
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# dominance and sorting
# ---------------------------------------------------------------------------

def _obj_arrays(points: list[ObjectivePoint]) -> tuple[np.ndarray, np.ndarray]:
    for p in points:
        if p is None:
            raise UnevaluatedPoint("point missing objectives")
    f = np.array([[p.risk, p.neg_return] for p in points], dtype=float)
    cv = np.array([p.cv for p in points], dtype=float)
    return f, cv


def constrained_dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    if a.cv < b.cv:
        return True
    if a.cv > b.cv:
        return False
    fa, fb = a.as_array(), b.as_array()
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def fast_non_dominated_sort(points: list[ObjectivePoint]) -> list[list[int]]:
    """Partition indices into fronts under constrained dominance.

    Vectorised dominance matrix plus Deb-style front peeling.
    """
    n = len(points)
    if n == 0:
        return []
    f, cv = _obj_arrays(points)
    cv_lt = cv[:, None] < cv[None, :]
    cv_eq = cv[:, None] == cv[None, :]
    le_all = np.all(f[:, None, :] <= f[None, :, :], axis=-1)
    lt_any = np.any(f[:, None, :] < f[None, :, :], axis=-1)
    dom = cv_lt | (cv_eq & le_all & lt_any)  # dom[i, j]: i dominates j

    counts = dom.sum(axis=0)
    fronts: list[list[int]] = []
    assigned = np.zeros(n, dtype=bool)
    while not assigned.all():
        current = np.where((counts == 0) & ~assigned)[0]
        fronts.append(current.tolist())
        assigned[current] = True
        counts = counts - dom[current].sum(axis=0)
    return fronts


def crowding_distance(front: list[ObjectivePoint]) -> list[float]:
    """Normalized neighbour-gap sums; boundary members (and any front of
    size <= 2) get infinity; zero-width objectives contribute nothing."""
    n = len(front)
    if n <= 2:
        return [math.inf] * n
    f, _ = _obj_arrays(front)
    dist = np.zeros(n)
    for m in range(f.shape[1]):
        order = np.argsort(f[:, m], kind="stable")
        span = f[order[-1], m] - f[order[0], m]
        dist[order[0]] = dist[order[-1]] = math.inf
        if span <= 0:
            continue
        gaps = (f[order[2:], m] - f[order[:-2], m]) / span
        dist[order[1:-1]] += gaps
    return dist.tolist()


def binary_tournament(pop: list[Genome], rng: np.random.Generator) -> int:
    """Lower rank wins; equal rank prefers larger crowding; true ties flip a coin."""
    i, j = rng.choice(len(pop), size=2, replace=False)
    a, b = pop[i], pop[j]
    if a.rank != b.rank:
        return int(i if a.rank < b.rank else j)
    if a.crowding != b.crowding:
        return int(i if a.crowding > b.crowding else j)
    return int(i if rng.random() < 0.5 else j)


# ---------------------------------------------------------------------------
# variation operators
# ---------------------------------------------------------------------------

def sbx_crossover(
    a: Genome,
    b: Genome,
    eta_c: float,
    prob_c: float,
    rng: np.random.Generator,
) -> tuple[Genome, Genome]:
    """Simulated binary crossover bounded on [0, 1], applied gene-wise with
    probability ``prob_c``."""
    x, y = a.genes, b.genes
    if x.size != y.size:
        raise ValueError("parents must have equal gene length")
    c1, c2 = x.copy(), y.copy()
    for i in range(x.size):
        if rng.random() > prob_c or abs(x[i] - y[i]) <= 1e-14:
            continue
        y1, y2 = (x[i], y[i]) if x[i] < y[i] else (y[i], x[i])
        rand = rng.random()

        beta = 1.0 + 2.0 * y1 / (y2 - y1)
        alpha = 2.0 - beta ** (-(eta_c + 1.0))
        if rand <= 1.0 / alpha:
            betaq = (rand * alpha) ** (1.0 / (eta_c + 1.0))
        else:
            betaq = (1.0 / (2.0 - rand * alpha)) ** (1.0 / (eta_c + 1.0))
        child1 = 0.5 * ((y1 + y2) - betaq * (y2 - y1))

        beta = 1.0 + 2.0 * (1.0 - y2) / (y2 - y1)
        alpha = 2.0 - beta ** (-(eta_c + 1.0))
        if rand <= 1.0 / alpha:
            betaq = (rand * alpha) ** (1.0 / (eta_c + 1.0))
        else:
            betaq = (1.0 / (2.0 - rand * alpha)) ** (1.0 / (eta_c + 1.0))
        child2 = 0.5 * ((y1 + y2) + betaq * (y2 - y1))

        if rng.random() < 0.5:
            child1, child2 = child2, child1
        c1[i] = min(max(child1, 0.0), 1.0)
        c2[i] = min(max(child2, 0.0), 1.0)
    return Genome(c1), Genome(c2)


def polynomial_mutation(
    g: Genome,
    eta_m: float,
    prob_m: float,
    rng: np.random.Generator,
) -> Genome:
    """Bounded polynomial mutation on [0, 1], gene-wise probability ``prob_m``."""
    genes = g.genes.copy()
    for i in range(genes.size):
        if rng.random() > prob_m:
            continue
        y = genes[i]
        rand = rng.random()
        mut_pow = 1.0 / (eta_m + 1.0)
        if rand < 0.5:
            xy = 1.0 - y
            val = 2.0 * rand + (1.0 - 2.0 * rand) * xy ** (eta_m + 1.0)
            deltaq = val ** mut_pow - 1.0
        else:
            xy = y
            val = 2.0 * (1.0 - rand) + 2.0 * (rand - 0.5) * xy ** (eta_m + 1.0)
            deltaq = 1.0 - val ** mut_pow
        genes[i] = min(max(y + deltaq, 0.0), 1.0)
    return Genome(genes)


# ---------------------------------------------------------------------------
# survival rules
# ---------------------------------------------------------------------------

def _apply_ranks_and_crowding(pop: list[Genome]) -> list[list[int]]:
    fronts = fast_non_dominated_sort([g.objectives for g in pop])
    for r, front in enumerate(fronts):
        dists = crowding_distance([pop[i].objectives for i in front])
        for i, d in zip(front, dists):
            pop[i].rank = r
            pop[i].crowding = d
    return fronts


def nsga2_survival(merged: list[Genome], pop_size: int) -> list[Genome]:
    """Whole fronts by rank; the splitting front by descending crowding."""
    if len(merged) < pop_size:
        raise PopulationTooSmall(f"{len(merged)} candidates for pop_size {pop_size}")
    fronts = _apply_ranks_and_crowding(merged)
    survivors: list[int] = []
    for front in fronts:
        if len(survivors) + len(front) <= pop_size:
            survivors.extend(front)
            continue
        slots = pop_size - len(survivors)
        # stable sort: crowding descending, index ascending on ties
        ordered = sorted(front, key=lambda i: (-merged[i].crowding, i))
        survivors.extend(ordered[:slots])
        break
    return [merged[i] for i in survivors]


def _normalize_objectives(f: np.ndarray) -> np.ndarray:
    """Min/max scale per axis; zero-width axes map to 0."""
    lo = f.min(axis=0)
    hi = f.max(axis=0)
    span = hi - lo
    out = np.zeros_like(f)
    for m in range(f.shape[1]):
        if span[m] > 0:
            out[:, m] = (f[:, m] - lo[m]) / span[m]
    return out


def rnsga2_survival(
    merged: list[Genome], pop_size: int, refs: ReferencePoints
) -> list[Genome]:
    """NSGA-II fronts; the splitting front is filled by ascending distance to
    the nearest reference point, with epsilon-clustering demotion so that
    near-duplicates of an already-picked member wait their turn."""
    if refs.points.size == 0:
        raise NoReferencePoints("empty reference point set")
    if len(merged) < pop_size:
        raise PopulationTooSmall(f"{len(merged)} candidates for pop_size {pop_size}")
    fronts = _apply_ranks_and_crowding(merged)

    f_all, _ = _obj_arrays([g.objectives for g in merged])
    norm = _normalize_objectives(f_all)

    survivors: list[int] = []
    for front in fronts:
        if len(survivors) + len(front) <= pop_size:
            survivors.extend(front)
            continue
        slots = pop_size - len(survivors)
        dists = {
            i: float(np.min(np.linalg.norm(refs.points - norm[i], axis=1)))
            for i in front
        }
        remaining = sorted(front, key=lambda i: (dists[i], i))
        demoted: list[int] = []
        picked: list[int] = []
        while len(picked) < slots:
            if not remaining:
                remaining, demoted = demoted, []
                continue
            chosen = remaining.pop(0)
            picked.append(chosen)
            still = []
            for i in remaining:
                if np.linalg.norm(norm[i] - norm[chosen]) <= refs.epsilon:
                    demoted.append(i)
                else:
                    still.append(i)
            remaining = still
        survivors.extend(picked)
        break
    return [merged[i] for i in survivors]


def das_dennis(m: int, p: int) -> ReferenceDirections:
    """Uniform simplex-lattice directions: all compositions of p into m parts / p."""
    if m < 2 or p < 1:
        raise ValueError("need m >= 2 objectives and p >= 1 partitions")
    dirs = []
    for cuts in combinations_with_replacement(range(p + 1), m - 1):
        parts = []
        prev = 0
        for c in cuts:
            parts.append(c - prev)
            prev = c
        parts.append(p - prev)
        dirs.append([x / p for x in parts])
    return ReferenceDirections(np.array(dirs, dtype=float), p)


def _perpendicular_distances(f_norm: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Distance of each point to the ray through each direction; (n_pts, n_dirs)."""
    d_unit = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    proj = f_norm @ d_unit.T  # (n, k)
    residual = f_norm[:, None, :] - proj[:, :, None] * d_unit[None, :, :]
    return np.linalg.norm(residual, axis=2)


def _nsga3_normalize(f: np.ndarray) -> np.ndarray:
    """Translate by the ideal point and scale by hyperplane intercepts from the
    extreme points; fall back to per-axis max when the intercepts degenerate."""
    ideal = f.min(axis=0)
    ft = f - ideal
    m = f.shape[1]
    weights = np.full((m, m), 1e-6) + np.eye(m) * (1.0 - 1e-6)
    extreme_idx = [int(np.argmin(np.max(ft / w, axis=1))) for w in weights]
    extremes = ft[extreme_idx]
    intercepts = None
    try:
        x = np.linalg.solve(extremes, np.ones(m))
        cand = 1.0 / x
        if np.all(np.isfinite(cand)) and np.all(cand > 1e-12):
            intercepts = cand
    except np.linalg.LinAlgError:
        pass
    if intercepts is None:
        intercepts = ft.max(axis=0)
    out = np.zeros_like(ft)
    for j in range(m):
        if intercepts[j] > 1e-12:
            out[:, j] = ft[:, j] / intercepts[j]
    return out


def associate_to_directions(
    pop: list[Genome], dirs: ReferenceDirections
) -> None:
    """Attach niche index and perpendicular distance to every member."""
    if dirs.dirs.size == 0:
        raise NoDirections("empty reference direction set")
    f, _ = _obj_arrays([g.objectives for g in pop])
    f_norm = _nsga3_normalize(f)
    perp = _perpendicular_distances(f_norm, dirs.dirs)
    nearest = perp.argmin(axis=1)
    for g, niche, row in zip(pop, nearest, perp):
        g.niche = int(niche)
        g.niche_dist = float(row[niche])


def nsga3_survival(
    merged: list[Genome], pop_size: int, dirs: ReferenceDirections
) -> list[Genome]:
    """Reference-direction niching on the splitting front.

    Members are associated with the direction of minimum perpendicular
    distance after ideal/intercept normalization; the splitting front is
    filled direction-by-direction starting from the least-crowded niche,
    always taking the closest remaining candidate (deterministic variant of
    the usual random pick)."""
    if dirs.dirs.size == 0:
        raise NoDirections("empty reference direction set")
    if len(merged) < pop_size:
        raise PopulationTooSmall(f"{len(merged)} candidates for pop_size {pop_size}")
    fronts = _apply_ranks_and_crowding(merged)
    associate_to_directions(merged, dirs)

    survivors: list[int] = []
    for front in fronts:
        if len(survivors) + len(front) <= pop_size:
            survivors.extend(front)
            continue
        slots = pop_size - len(survivors)
        niche_counts = np.zeros(len(dirs.dirs), dtype=int)
        for i in survivors:
            niche_counts[merged[i].niche] += 1
        candidates: dict[int, list[int]] = {}
        for i in front:
            candidates.setdefault(merged[i].niche, []).append(i)
        for members in candidates.values():
            members.sort(key=lambda i: (merged[i].niche_dist, i))
        active = set(candidates)
        picked: list[int] = []
        while len(picked) < slots and active:
            j = min(active, key=lambda k: (niche_counts[k], k))
            members = candidates[j]
            chosen = members.pop(0)
            picked.append(chosen)
            niche_counts[j] += 1
            if not members:
                active.discard(j)
        survivors.extend(picked)
        break
    return [merged[i] for i in survivors]


def unsga3_tournament(
    pop: list[Genome], dirs: ReferenceDirections, rng: np.random.Generator
) -> int:
    """Niched tournament: within a shared niche the closer member breaks rank
    ties; across niches only rank decides; exact ties flip a coin."""
    i, j = rng.choice(len(pop), size=2, replace=False)
    a, b = pop[i], pop[j]
    if a.rank != b.rank:
        return int(i if a.rank < b.rank else j)
    if a.niche is not None and a.niche == b.niche and a.niche_dist != b.niche_dist:
        return int(i if a.niche_dist < b.niche_dist else j)
    return int(i if rng.random() < 0.5 else j)


# ---------------------------------------------------------------------------
# algorithm objects (parameterised, sklearn-style get_params surface)
# ---------------------------------------------------------------------------

class Algorithm:
    """Survival + parent-selection strategy for the shared generational loop."""

    name = "base"

    def get_params(self) -> dict:
        return {}

    def prepare(self, pop: list[Genome]) -> None:
        _apply_ranks_and_crowding(pop)

    def survive(self, merged: list[Genome], pop_size: int) -> list[Genome]:
        raise NotImplementedError

    def select_parent(self, pop: list[Genome], rng: np.random.Generator) -> int:
        return binary_tournament(pop, rng)


class NSGA2(Algorithm):
    name = "nsga2"

    def survive(self, merged, pop_size):
        return nsga2_survival(merged, pop_size)


class RNSGA2(Algorithm):
    name = "rnsga2"

    def __init__(self, refs: ReferencePoints | None = None):
        self.refs = refs if refs is not None else ReferencePoints(np.array([[0.0, 0.0]]))

    def get_params(self):
        return {"refs": self.refs}

    def survive(self, merged, pop_size):
        return rnsga2_survival(merged, pop_size, self.refs)


class NSGA3(Algorithm):
    name = "nsga3"

    def __init__(self, dirs: ReferenceDirections | None = None, pop_size_hint: int = 12):
        if dirs is None:
            p = 1
            while p + 1 < pop_size_hint:  # C(p+1, 1) = p+1 dirs for m=2
                p += 1
            dirs = das_dennis(2, p)
        self.dirs = dirs

    def get_params(self):
        return {"dirs": self.dirs}

    def prepare(self, pop):
        _apply_ranks_and_crowding(pop)
        associate_to_directions(pop, self.dirs)

    def survive(self, merged, pop_size):
        return nsga3_survival(merged, pop_size, self.dirs)

    def select_parent(self, pop, rng):
        # canonical NSGA-III draws parents uniformly at random
        return int(rng.integers(len(pop)))


class UNSGA3(NSGA3):
    name = "unsga3"

    def select_parent(self, pop, rng):
        return unsga3_tournament(pop, self.dirs, rng)


def make_algorithm(tag: str, pop_size: int = 12) -> Algorithm:
    tag = tag.lower().replace("-", "").replace("_", "")
    if tag in ("nsga2", "nsgaii"):
        return NSGA2()
    if tag in ("rnsga2", "rnsgaii"):
        return RNSGA2()
    if tag in ("nsga3", "nsgaiii"):
        return NSGA3(pop_size_hint=pop_size)
    if tag in ("unsga3", "unsgaiii"):
        return UNSGA3(pop_size_hint=pop_size)
    raise ValueError(f"unknown algorithm {tag!r}")


# ---------------------------------------------------------------------------
# generational loop
# ---------------------------------------------------------------------------

def _feasible_front(pop: list[Genome]) -> np.ndarray:
    """Objective pairs of the feasible non-dominated members (may be empty)."""
    feas = [g.objectives for g in pop if g.objectives.cv == 0.0]
    if not feas:
        return np.zeros((0, 2))
    fronts = fast_non_dominated_sort(feas)
    return np.array([feas[i].as_array() for i in fronts[0]])


def _merge_archive(archive: np.ndarray, new_points: np.ndarray) -> np.ndarray:
    """Non-dominated subset of archive U new_points (feasible points only)."""
    pts = np.vstack([archive, new_points]) if archive.size else new_points
    if pts.shape[0] == 0:
        return pts
    keep = []
    for i in range(pts.shape[0]):
        others = np.delete(pts, i, axis=0)
        dominated = np.any(
            np.all(others <= pts[i], axis=1) & np.any(others < pts[i], axis=1)
        )
        if not dominated:
            keep.append(i)
    return np.unique(pts[keep], axis=0)


def make_offspring(
    algorithm: Algorithm,
    pop: list[Genome],
    n_offspring: int,
    config: RunConfig,
    rng: np.random.Generator,
) -> list[Genome]:
    """Selection -> SBX -> polynomial mutation, drawn in a fixed order."""
    n_var = pop[0].genes.size
    prob_m = config.prob_m if config.prob_m is not None else 1.0 / n_var
    offspring: list[Genome] = []
    while len(offspring) < n_offspring:
        pa = algorithm.select_parent(pop, rng)
        pb = algorithm.select_parent(pop, rng)
        c1, c2 = sbx_crossover(pop[pa], pop[pb], config.eta_c, config.prob_c, rng)
        offspring.append(polynomial_mutation(c1, config.eta_m, prob_m, rng))
        if len(offspring) < n_offspring:
            offspring.append(polynomial_mutation(c2, config.eta_m, prob_m, rng))
    return offspring


def run(
    algorithm: str | Algorithm,
    problem,
    config: RunConfig,
    initial_population: np.ndarray | None = None,
) -> OptimizerRun:
    """Full generational loop: uniform-random init, fixed generation count,
    per-generation front / archive / population recording.

    Same seed (and same initial population, when given) reproduces the run
    exactly; wall time is the only nondeterministic field.
    """
    if isinstance(algorithm, str):
        algorithm = make_algorithm(algorithm, config.pop_size)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n_var = problem.n_var
    t0 = time.perf_counter()

    if initial_population is None:
        genes = rng.uniform(0.0, 1.0, size=(config.pop_size, n_var))
    else:
        genes = np.asarray(initial_population, dtype=float)
        if genes.shape != (config.pop_size, n_var):
            raise PopulationTooSmall(
                f"initial population shape {genes.shape}, expected "
                f"{(config.pop_size, n_var)}"
            )
    pop = [Genome(g.copy()) for g in genes]
    for g in pop:
        g.objectives = problem.evaluate(g.genes)
    exact_evals = len(pop)
    algorithm.prepare(pop)

    result = OptimizerRun(algorithm=algorithm.name, seed=config.seed)
    archive = _feasible_front(pop)

    for _ in range(config.generations):
        offspring = make_offspring(algorithm, pop, config.pop_size, config, rng)
        for g in offspring:
            g.objectives = problem.evaluate(g.genes)
        exact_evals += len(offspring)
        pop = algorithm.survive(pop + offspring, config.pop_size)
        algorithm.prepare(pop)

        archive = _merge_archive(archive, _feasible_front(pop))
        result.fronts_per_generation.append(_feasible_front(pop))
        result.archive_fronts.append(archive.copy())
        result.population_trace.append(np.array([g.genes for g in pop]))

    result.wall_time_seconds = time.perf_counter() - t0
    result.exact_evals = exact_evals
    result.final_population = pop
    fronts = fast_non_dominated_sort([g.objectives for g in pop])
    result.final_front = [pop[i] for i in fronts[0]]
    finalize_hv_traces(result)
    return result


def finalize_hv_traces(
    result: OptimizerRun,
    bounds: tuple[np.ndarray, np.ndarray] | None = None,
    ref: tuple[float, float] = (1.1, 1.1),
) -> None:
    """Fill hv_trace / archive_hv_trace from the recorded fronts.

    Default bounds come from the run's own final archive; campaigns recompute
    with experiment-wide bounds before aggregating across runs.
    """
    from .indicators import front_bounds, hypervolume_2d, normalize_front

    if bounds is None:
        all_pts = [f for f in result.archive_fronts + result.fronts_per_generation if f.size]
        if not all_pts:
            result.hv_trace = np.zeros(len(result.fronts_per_generation))
            result.archive_hv_trace = np.zeros(len(result.archive_fronts))
            return
        bounds = front_bounds(np.vstack(all_pts))
    result.hv_bounds = bounds
    ref_arr = np.asarray(ref, dtype=float)

    def hv(points: np.ndarray) -> float:
        if points.size == 0:
            return 0.0
        norm, _ = normalize_front(points, bounds)
        return hypervolume_2d(norm, ref_arr)

    result.hv_trace = np.array([hv(f) for f in result.fronts_per_generation])
    result.archive_hv_trace = np.array([hv(f) for f in result.archive_fronts])
