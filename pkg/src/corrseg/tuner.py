"""Hyperparameter search over scaling and threshold genes.

A candidate is the gene vector (a, b, omega, threshold) for a fixed model
throughput; its fitness is the mean window_diff on a validation set, so
lower is better. Two optimizers share the same repair rule and fitness
cache: a real-valued genetic algorithm with elitist truncation, and a
bound-constrained particle swarm. Feasibility (a + b <= 1, everything in
[0, 1]) is restored by repair after every move and re-checked on every
evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .core import SegmentationVector
from .errors import (
    EmptyTrainingSetError,
    MissingModelError,
    NoCandidatesError,
    ParamConstraintError,
)
from .merge import MergeConfig
from .metrics import window_diff
from .pipeline import PipelineConfig, segment_stack
from .regressor import RidgeModel
from .scaling import ScalingParams
from .synthgen import Record

VALID_THROUGHPUTS = (8, 16, 32)
N_GENES = 4
CACHE_GRID = 1e-6
TOP_PER_METHOD = 5


@dataclass(frozen=True)
class TuningCandidate:
    """One gene vector with the throughput it was tuned for."""

    a: float
    b: float
    omega: float
    threshold: float
    throughput: int
    fitness: float = math.nan

    def __post_init__(self) -> None:
        ScalingParams(self.a, self.b, self.omega)
        if not 0.0 <= self.threshold <= 1.0:
            raise ParamConstraintError(
                f"threshold must lie in [0, 1], got {self.threshold}"
            )
        if self.throughput not in VALID_THROUGHPUTS:
            raise ParamConstraintError(
                f"throughput must be one of {VALID_THROUGHPUTS}, got {self.throughput}"
            )

    @property
    def genes(self) -> np.ndarray:
        return np.array([self.a, self.b, self.omega, self.threshold])

    def pipeline_config(self, model: RidgeModel) -> PipelineConfig:
        return PipelineConfig(
            model=model,
            scaling=ScalingParams(self.a, self.b, self.omega),
            merge=MergeConfig(self.threshold),
        )


@dataclass(frozen=True)
class GaConfig:
    """Genetic algorithm settings; defaults match the tuned budget."""

    epochs: int = 20
    population: int = 200
    offspring_per_epoch: int = 100
    crossover_rate: float = 0.5
    mutation_variance: float = 0.1
    crossover: str = "uniform"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1 or self.population < 1 or self.offspring_per_epoch < 1:
            raise ParamConstraintError("epochs, population, and offspring must be >= 1")
        if self.population < self.offspring_per_epoch:
            raise ParamConstraintError("population must be >= offspring_per_epoch")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ParamConstraintError("crossover_rate must lie in [0, 1]")
        if self.mutation_variance < 0.0:
            raise ParamConstraintError("mutation_variance must be >= 0")
        if self.crossover != "uniform":
            raise ParamConstraintError(f"unsupported crossover {self.crossover!r}")


@dataclass(frozen=True)
class PsoConfig:
    """Particle swarm settings; defaults match the tuned budget."""

    particles: int = 30
    inertia: float = 0.5
    cognition: float = 1.0
    social: float = 1.0
    iterations: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.particles < 1 or self.iterations < 1:
            raise ParamConstraintError("particles and iterations must be >= 1")
        if min(self.inertia, self.cognition, self.social) < 0.0:
            raise ParamConstraintError("inertia and acceleration factors must be >= 0")


def repair_genes(genes: np.ndarray) -> np.ndarray:
    """Project a gene vector back into the feasible region.

    Genes are clamped to [0, 1]; if a + b then exceeds 1 both are divided
    by their sum, with a last-ulp nudge so the constraint holds exactly in
    floating point.
    """
    g = np.clip(np.asarray(genes, dtype=np.float64), 0.0, 1.0)
    total = g[0] + g[1]
    if total > 1.0:
        g[0] /= total
        g[1] /= total
        while g[0] + g[1] > 1.0:
            g[1] = np.nextafter(g[1], 0.0)
    return g


def _uniform_feasible(rng: np.random.Generator, count: int) -> np.ndarray:
    """Sample gene vectors uniformly over the feasible region by rejection."""
    rows: list[np.ndarray] = []
    while len(rows) < count:
        draw = rng.random((count, N_GENES))
        keep = draw[:, 0] + draw[:, 1] <= 1.0
        rows.extend(draw[keep])
    return np.array(rows[:count])


class _Evaluator:
    """Mean window_diff on a fixed validation set, cached per gene vector.

    The cache key quantizes genes to a 1e-6 grid, so re-visits of the same
    point (a frequent event late in a run) cost nothing.
    """

    def __init__(self, model: RidgeModel, validation: Sequence[Record]) -> None:
        if not validation:
            raise EmptyTrainingSetError("validation set is empty")
        self.model = model
        self.groups: list[tuple[np.ndarray, list[SegmentationVector]]] = []
        by_size: dict[int, list[Record]] = {}
        for record in validation:
            by_size.setdefault(record[0].size, []).append(record)
        for size in sorted(by_size):
            records = by_size[size]
            stack = np.stack([m.values for m, _ in records])
            self.groups.append((stack, [seg for _, seg in records]))
        self.total = len(validation)
        self.cache: dict[tuple[int, ...], float] = {}

    def fitness(self, genes: np.ndarray) -> float:
        key = tuple(int(round(g / CACHE_GRID)) for g in genes)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        cfg = PipelineConfig(
            model=self.model,
            scaling=ScalingParams(genes[0], genes[1], genes[2]),
            merge=MergeConfig(genes[3]),
        )
        wd_sum = 0.0
        for stack, refs in self.groups:
            _, bits = segment_stack(stack, cfg)
            for i, ref in enumerate(refs):
                wd_sum += window_diff(ref, SegmentationVector(bits[i]))
        value = wd_sum / self.total
        self.cache[key] = value
        return value

    def fitness_many(self, genes: np.ndarray) -> np.ndarray:
        return np.array([self.fitness(row) for row in genes])


def evaluate_candidate(
    c: TuningCandidate, bank: dict[int, RidgeModel], validation: Sequence[Record]
) -> float:
    """Mean window_diff of the candidate's pipeline over the validation set."""
    model = bank.get(c.throughput)
    if model is None:
        raise MissingModelError(
            f"model bank has no entry for throughput {c.throughput}"
        )
    return _Evaluator(model, validation).fitness(c.genes)


def _to_candidates(
    genes: np.ndarray, fits: np.ndarray, throughput: int
) -> list[TuningCandidate]:
    order = np.argsort(fits, kind="stable")
    return [
        TuningCandidate(
            a=float(genes[i, 0]),
            b=float(genes[i, 1]),
            omega=float(genes[i, 2]),
            threshold=float(genes[i, 3]),
            throughput=throughput,
            fitness=float(fits[i]),
        )
        for i in order
    ]


def _require_model(bank: dict[int, RidgeModel], throughput: int) -> RidgeModel:
    model = bank.get(throughput)
    if model is None:
        raise MissingModelError(f"model bank has no entry for throughput {throughput}")
    return model


def ga_optimize(
    cfg: GaConfig,
    throughput: int,
    bank: dict[int, RidgeModel],
    validation: Sequence[Record],
    on_epoch: Callable[[int, float], None] | None = None,
) -> list[TuningCandidate]:
    """Elitist real-valued GA; returns the final population, best first.

    Parents are drawn by linear rank weighting from the current elite,
    children take each gene from the first parent with the crossover rate,
    every child gene is jittered by Gaussian noise, and survivors are the
    best `population` of parents plus offspring. The best-so-far fitness is
    therefore non-increasing across epochs.
    """
    model = _require_model(bank, throughput)
    evaluator = _Evaluator(model, validation)
    rng = np.random.default_rng(cfg.seed)
    pop = _uniform_feasible(rng, cfg.population)
    fits = evaluator.fitness_many(pop)
    order = np.argsort(fits, kind="stable")
    pop, fits = pop[order], fits[order]
    rank_weights = np.arange(cfg.population, 0, -1, dtype=np.float64)
    rank_probs = rank_weights / rank_weights.sum()
    sigma = float(np.sqrt(cfg.mutation_variance))
    for epoch in range(cfg.epochs):
        parents = rng.choice(cfg.population, size=(cfg.offspring_per_epoch, 2), p=rank_probs)
        masks = rng.random((cfg.offspring_per_epoch, N_GENES)) < cfg.crossover_rate
        children = np.where(masks, pop[parents[:, 0]], pop[parents[:, 1]])
        children = children + rng.normal(0.0, sigma, children.shape)
        children = np.array([repair_genes(child) for child in children])
        child_fits = evaluator.fitness_many(children)
        pool = np.vstack([pop, children])
        pool_fits = np.concatenate([fits, child_fits])
        order = np.argsort(pool_fits, kind="stable")[: cfg.population]
        pop, fits = pool[order], pool_fits[order]
        if on_epoch is not None:
            on_epoch(epoch, float(fits[0]))
    return _to_candidates(pop, fits, throughput)


def pso_optimize(
    cfg: PsoConfig,
    throughput: int,
    bank: dict[int, RidgeModel],
    validation: Sequence[Record],
    on_iteration: Callable[[int, float], None] | None = None,
) -> list[TuningCandidate]:
    """Bound-constrained particle swarm; returns personal bests, best first.

    Velocities start at zero, each step blends inertia with pulls toward
    the personal and global bests scaled by fresh uniform draws, and moved
    positions are repaired back into the feasible region.
    """
    model = _require_model(bank, throughput)
    evaluator = _Evaluator(model, validation)
    rng = np.random.default_rng(cfg.seed)
    pos = _uniform_feasible(rng, cfg.particles)
    vel = np.zeros_like(pos)
    best_pos = pos.copy()
    best_fits = evaluator.fitness_many(pos)
    g_index = int(np.argmin(best_fits))
    for iteration in range(cfg.iterations):
        r_cog = rng.random(pos.shape)
        r_soc = rng.random(pos.shape)
        vel = (
            cfg.inertia * vel
            + cfg.cognition * r_cog * (best_pos - pos)
            + cfg.social * r_soc * (best_pos[g_index] - pos)
        )
        pos = np.array([repair_genes(p) for p in pos + vel])
        fits = evaluator.fitness_many(pos)
        improved = fits < best_fits
        best_pos[improved] = pos[improved]
        best_fits[improved] = fits[improved]
        g_index = int(np.argmin(best_fits))
        if on_iteration is not None:
            on_iteration(iteration, float(best_fits[g_index]))
    return _to_candidates(best_pos, best_fits, throughput)


def _candidate_order(c: TuningCandidate) -> tuple:
    return (c.fitness, c.throughput, c.a, c.b, c.omega, c.threshold)


def select_best(
    ga_results: Sequence[TuningCandidate],
    pso_results: Sequence[TuningCandidate],
    bank: dict[int, RidgeModel],
    validation: Sequence[Record],
) -> TuningCandidate:
    """Re-evaluate the top candidates of both methods and pick the winner.

    The best five of each method (pooled across whatever throughputs each
    list carries) are re-scored on the validation set; the minimum wins,
    with ties broken by smaller throughput and then lexicographic genes.
    """
    finalists = list(sorted(ga_results, key=_candidate_order)[:TOP_PER_METHOD])
    finalists += sorted(pso_results, key=_candidate_order)[:TOP_PER_METHOD]
    if not finalists:
        raise NoCandidatesError("select_best needs at least one candidate")
    rescored = [
        replace(c, fitness=evaluate_candidate(c, bank, validation)) for c in finalists
    ]
    return min(rescored, key=_candidate_order)
