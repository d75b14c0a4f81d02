"""Generational loop: elites, crossover, two mutation streams, randoms.

Per generation the next population is o1 elites carried verbatim (their
fitness is reused, never recomputed), o2 crossover children with parents
from the beta1/beta2 elite fractions, o3 flip and o4 bisection mutants
of beta3-elite parents, and o5 fresh random chromosomes. Every random
draw comes from a (seed, generation, phase, slot) substream, so the run
is bit-reproducible at any evaluation worker count.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .encoding import decode_block
from .errors import ConfigError
from .fitness import FitnessConfig, FitnessContext, FitnessValue
from .operators import (
    OperatorConfig,
    bisection_mutation,
    elitist_select,
    flip_mutation,
    intermediate_crossover,
    random_addition,
)
from .rng import (
    PHASE_BISECT,
    PHASE_FLIP,
    PHASE_INIT,
    PHASE_RANDOM,
    PHASE_XOVER,
    substream,
)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines one GA run, including the master seed."""

    k: int = 10
    iterations: int = 100
    operator_config: OperatorConfig = field(
        default_factory=lambda: OperatorConfig(200, 200, 200, 200, 200)
    )
    fitness_config: FitnessConfig = field(default_factory=FitnessConfig)
    seed: int = 42
    population_size: int | None = None  # optional; must equal the operator-count sum

    def resolved_population(self) -> int:
        return self.operator_config.population_size

    def validate(self) -> None:
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        self.operator_config.validate()
        self.fitness_config.validate()
        if (
            self.population_size is not None
            and self.population_size != self.operator_config.population_size
        ):
            raise ConfigError(
                f"population_size {self.population_size} does not equal the "
                f"operator-count sum {self.operator_config.population_size}"
            )


class Population:
    """Fitness-annotated gene matrix, sorted descending by combined score.

    The sort is stable, so equal-fitness members keep their assembly
    order: elites first, then crossover, flip, bisection, random blocks.
    """

    __slots__ = ("genes", "dunn", "penalty", "combined")

    def __init__(self, genes, dunn, penalty, combined):
        self.genes = genes
        self.dunn = dunn
        self.penalty = penalty
        self.combined = combined

    @classmethod
    def from_unsorted(cls, genes, dunn, penalty, combined) -> "Population":
        order = np.argsort(-combined, kind="stable")
        return cls(genes[order], dunn[order], penalty[order], combined[order])

    def __len__(self) -> int:
        return self.genes.shape[0]

    def best_value(self) -> FitnessValue:
        return FitnessValue(
            float(self.dunn[0]), int(self.penalty[0]), float(self.combined[0])
        )

    def members(self):
        """(chromosome copy, FitnessValue) pairs, best first."""
        return [
            (self.genes[i].copy(), FitnessValue(
                float(self.dunn[i]), int(self.penalty[i]), float(self.combined[i])
            ))
            for i in range(len(self))
        ]


@dataclass(frozen=True)
class RunResult:
    """Trajectory and best-ever individual of one run.

    ``trajectory`` has one (min, mean, max) combined-fitness row per
    generation; generation 0 (the random initial population) is kept in
    the ``initial_*`` fields so improvement over the start is checkable
    without re-running.
    """

    trajectory: np.ndarray
    best_chromosome: np.ndarray
    best_labeling: np.ndarray
    best_fitness: FitnessValue
    initial_best_labeling: np.ndarray
    initial_best_fitness: FitnessValue
    evaluations: int
    wall_time: float


def termination_check(completed_iterations: int, config: RunConfig) -> bool:
    """True while the loop must continue; the budget is iterations only."""
    return completed_iterations < config.iterations


def _evaluate_block(ctx: FitnessContext, genes: np.ndarray, k: int, workers: int):
    """Decode and score a gene block; disjoint row-range writes per worker."""
    rows = genes.shape[0]
    labels = decode_block(genes, k)
    dunn = np.empty(rows)
    penalty = np.empty(rows, dtype=np.int64)
    combined = np.empty(rows)

    def score(span):
        lo, hi = span
        for r in range(lo, hi):
            d, p, c = ctx.evaluate_labels(labels[r])
            dunn[r] = d
            penalty[r] = p
            combined[r] = c

    if workers <= 1 or rows <= 1:
        score((0, rows))
    else:
        step = math.ceil(rows / workers)
        spans = [(lo, min(lo + step, rows)) for lo in range(0, rows, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(score, spans))
    return dunn, penalty, combined


def evolve(config: RunConfig, features, index, workers: int = 1) -> RunResult:
    """Run the full generational loop; bit-identical for any ``workers``."""
    config.validate()
    oc = config.operator_config
    pop_size = config.resolved_population()
    ctx = FitnessContext(features, index, config.fitness_config)
    n = ctx.n
    master = config.seed
    t0 = time.perf_counter()

    genes = random_addition(pop_size, n, substream(master, 0, PHASE_INIT))
    dunn, penalty, combined = _evaluate_block(ctx, genes, config.k, workers)
    pop = Population.from_unsorted(genes, dunn, penalty, combined)
    evaluations = pop_size

    best_genes = pop.genes[0].copy()
    best_fitness = pop.best_value()
    initial_best_labeling = decode_block(pop.genes[:1], config.k)[0]
    initial_best_fitness = best_fitness

    trajectory = np.empty((config.iterations, 3))
    gen = 0
    while termination_check(gen, config):
        gen += 1
        children = np.empty((pop_size - oc.o1, n))
        row = 0
        for j in range(oc.o2):
            r = substream(master, gen, PHASE_XOVER, j)
            p1 = elitist_select(pop.genes, oc.beta1, r)
            p2 = elitist_select(pop.genes, oc.beta2, r)
            children[row] = intermediate_crossover(p1, p2, oc.alpha, r)
            row += 1
        for j in range(oc.o3):
            r = substream(master, gen, PHASE_FLIP, j)
            parent = elitist_select(pop.genes, oc.beta3, r)
            children[row] = flip_mutation(parent, oc.gamma1, r)
            row += 1
        for j in range(oc.o4):
            r = substream(master, gen, PHASE_BISECT, j)
            parent = elitist_select(pop.genes, oc.beta3, r)
            children[row] = bisection_mutation(parent, oc.gamma2, r)
            row += 1
        if oc.o5 > 0:
            children[row:] = random_addition(oc.o5, n, substream(master, gen, PHASE_RANDOM))

        c_dunn, c_pen, c_comb = _evaluate_block(ctx, children, config.k, workers)
        evaluations += children.shape[0]
        pop = Population.from_unsorted(
            np.concatenate([pop.genes[: oc.o1], children]),
            np.concatenate([pop.dunn[: oc.o1], c_dunn]),
            np.concatenate([pop.penalty[: oc.o1], c_pen]),
            np.concatenate([pop.combined[: oc.o1], c_comb]),
        )
        trajectory[gen - 1, 0] = pop.combined[-1]
        trajectory[gen - 1, 1] = pop.combined.mean()
        trajectory[gen - 1, 2] = pop.combined[0]
        if pop.combined[0] > best_fitness.combined:
            best_genes = pop.genes[0].copy()
            best_fitness = pop.best_value()

    best_labeling = decode_block(best_genes[None, :], config.k)[0]
    return RunResult(
        trajectory=trajectory,
        best_chromosome=best_genes,
        best_labeling=best_labeling,
        best_fitness=best_fitness,
        initial_best_labeling=initial_best_labeling,
        initial_best_fitness=initial_best_fitness,
        evaluations=evaluations,
        wall_time=time.perf_counter() - t0,
    )
