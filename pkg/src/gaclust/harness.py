"""Batch experiment runner: eight stock operator mixes, repeated runs.

Each experiment fixes the offspring composition (o1..o5); the suite runs
every experiment ``repetitions`` times with seeds derived from (master
seed, experiment id, repetition) and aggregates per-iteration statistics
across the repetitions: min of run-minima, mean of run-means, max of
run-maxima.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .engine import RunConfig, RunResult, evolve
from .errors import ConfigError
from .operators import OperatorConfig, scale_counts
from .rng import derive_seed

# Stock experiment compositions (o1, o2, o3, o4, o5): a balanced mix, a
# pure elite+random search, one operator-heavy mix per operator, and
# three moderately tilted blends. Population 1000 each.
BUILTIN_COUNTS: tuple[tuple[int, int, int, int, int], ...] = (
    (200, 200, 200, 200, 200),
    (500, 0, 0, 0, 500),
    (200, 600, 0, 0, 200),
    (200, 0, 600, 0, 200),
    (200, 0, 0, 600, 200),
    (200, 400, 100, 100, 200),
    (200, 100, 400, 100, 200),
    (200, 100, 100, 400, 200),
)


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: an operator composition plus the shared run template."""

    experiment_id: int
    operator_counts: tuple[int, int, int, int, int]
    repetitions: int = 5
    base: RunConfig = field(default_factory=RunConfig)

    def validate(self) -> None:
        if self.experiment_id < 1:
            raise ConfigError("experiment_id must be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if any(c < 0 for c in self.operator_counts) or sum(self.operator_counts) < 1:
            raise ConfigError("operator counts must be >= 0 and sum positive")


def builtin_experiments(base: RunConfig | None = None, repetitions: int = 5):
    """The eight stock experiment specs over a shared base configuration."""
    base = base if base is not None else RunConfig()
    return [
        ExperimentSpec(
            experiment_id=i + 1,
            operator_counts=counts,
            repetitions=repetitions,
            base=base,
        )
        for i, counts in enumerate(BUILTIN_COUNTS)
    ]


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregates for one experiment across its repetitions."""

    experiment_id: int
    operator_counts: tuple[int, int, int, int, int]
    population_size: int
    aggregate: np.ndarray  # (iterations, 3): min of mins, mean of means, max of maxes
    run_trajectories: tuple[np.ndarray, ...]
    final_best: tuple[float, ...]  # best combined fitness per repetition
    best_run: RunResult  # run with the highest final best (ties: lowest repetition)
    seeds: tuple[int, ...]
    wall_times: tuple[float, ...]


@dataclass(frozen=True)
class ExperimentReport:
    """Everything the suite produced, in experiment order."""

    results: tuple[ExperimentResult, ...]
    master_seed: int
    scale: float
    wall_time: float


def _scaled_config(spec: ExperimentSpec, scale: float, run_seed: int) -> RunConfig:
    counts = scale_counts(spec.operator_counts, scale)
    op = replace(spec.base.operator_config, o1=counts[0], o2=counts[1],
                 o3=counts[2], o4=counts[3], o5=counts[4])
    return replace(spec.base, operator_config=op, seed=run_seed, population_size=None)


def run_suite(
    specs,
    features,
    index,
    scale: float = 1.0,
    master_seed: int = 42,
    workers: int = 1,
) -> ExperimentReport:
    """Run every spec x repetition; deterministic for a fixed master seed.

    ``workers`` parallelizes across independent runs; each run evaluates
    single-threaded, so the report is identical at any worker count.
    """
    specs = list(specs)
    if not specs:
        raise ConfigError("suite needs at least one experiment spec")
    for spec in specs:
        spec.validate()
    ids = [spec.experiment_id for spec in specs]
    if len(set(ids)) != len(ids):
        raise ConfigError("experiment ids must be unique within a suite")
    t0 = time.perf_counter()
    jobs = []
    for spec in specs:
        for rep in range(spec.repetitions):
            run_seed = derive_seed(master_seed, spec.experiment_id, rep)
            jobs.append((spec, rep, run_seed, _scaled_config(spec, scale, run_seed)))

    def run_one(job):
        _, _, _, config = job
        return evolve(config, features, index, workers=1)

    if workers <= 1:
        results = [run_one(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, jobs))

    by_spec: dict[int, list] = {}
    for (spec, rep, run_seed, _), result in zip(jobs, results):
        by_spec.setdefault(spec.experiment_id, []).append((rep, run_seed, spec, result))

    experiment_results = []
    for spec in specs:
        entries = by_spec[spec.experiment_id]
        entries.sort(key=lambda e: e[0])
        runs = [r for _, _, _, r in entries]
        trajs = [r.trajectory for r in runs]
        stack = np.stack(trajs)  # (reps, iterations, 3)
        aggregate = np.stack(
            [stack[:, :, 0].min(axis=0), stack[:, :, 1].mean(axis=0), stack[:, :, 2].max(axis=0)],
            axis=1,
        )
        finals = tuple(float(r.best_fitness.combined) for r in runs)
        best_idx = int(np.argmax(finals))
        experiment_results.append(
            ExperimentResult(
                experiment_id=spec.experiment_id,
                operator_counts=scale_counts(spec.operator_counts, scale),
                population_size=sum(scale_counts(spec.operator_counts, scale)),
                aggregate=aggregate,
                run_trajectories=tuple(trajs),
                final_best=finals,
                best_run=runs[best_idx],
                seeds=tuple(seed for _, seed, _, _ in entries),
                wall_times=tuple(float(r.wall_time) for r in runs),
            )
        )
    return ExperimentReport(
        results=tuple(experiment_results),
        master_seed=master_seed,
        scale=scale,
        wall_time=time.perf_counter() - t0,
    )
