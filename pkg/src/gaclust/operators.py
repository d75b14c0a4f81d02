"""Evolutionary operators over random-key chromosomes.

All operators are pure: they read a fitness-sorted gene matrix (row 0 is
the best individual), draw from an explicit Generator, never mutate
their inputs, and re-establish the [0, GENE_MAX] gene range on output.
Populations are plain (P, n) float64 matrices here; the engine owns the
fitness bookkeeping.
"""

import math
from dataclasses import dataclass

import numpy as np

from .encoding import GENE_MAX, clamp_genes
from .errors import ConfigError, ValidationError


def frac_count(fraction: float, size: int) -> int:
    """ceil(fraction * size) with a guard against float round-up.

    Products like 0.3 * 1000 may land one ulp above the exact integer;
    the 1e-9 backoff keeps the mathematical ceiling in that case.
    """
    return min(size, max(1, math.ceil(fraction * size - 1e-9)))


@dataclass(frozen=True)
class OperatorConfig:
    """Offspring composition counts and operator constants.

    o1 elites are carried verbatim, o2 children come from intermediate
    crossover, o3 from flip mutation, o4 from bisection mutation, o5 are
    fresh random chromosomes; the counts sum to the population size.
    """

    o1: int
    o2: int
    o3: int
    o4: int
    o5: int
    alpha: float = 0.5
    beta1: float = 0.3
    beta2: float = 0.7
    beta3: float = 0.5
    gamma1: float = 0.1
    gamma2: float = 0.1

    @property
    def counts(self) -> tuple[int, int, int, int, int]:
        return (self.o1, self.o2, self.o3, self.o4, self.o5)

    @property
    def population_size(self) -> int:
        return sum(self.counts)

    def validate(self) -> None:
        if any(c < 0 for c in self.counts):
            raise ConfigError("operator counts must be >= 0")
        if self.population_size < 1:
            raise ConfigError("operator counts must sum to a positive population")
        if not 0.0 < self.beta1 <= self.beta2 <= 1.0:
            raise ConfigError("need 0 < beta1 <= beta2 <= 1")
        if not 0.0 < self.beta3 <= 1.0:
            raise ConfigError("need 0 < beta3 <= 1")
        if not (0.0 < self.gamma1 <= 1.0 and 0.0 < self.gamma2 <= 1.0):
            raise ConfigError("need gamma1, gamma2 in (0, 1]")
        if self.alpha < 0.0:
            raise ConfigError("alpha must be >= 0")

    def scaled(self, scale: float) -> "OperatorConfig":
        """Shrink counts proportionally; see :func:`scale_counts`."""
        return OperatorConfig(
            *scale_counts(self.counts, scale),
            alpha=self.alpha,
            beta1=self.beta1,
            beta2=self.beta2,
            beta3=self.beta3,
            gamma1=self.gamma1,
            gamma2=self.gamma2,
        )


def scale_counts(counts: tuple[int, ...], scale: float) -> tuple[int, ...]:
    """Largest-remainder scaling of integer counts.

    The scaled counts sum exactly to round(sum(counts) * scale); the
    leftover units go to the largest fractional remainders, ties to the
    lowest index, so results are deterministic.
    """
    if not 0.0 < scale <= 1.0:
        raise ConfigError("scale must be in (0, 1]")
    total = sum(counts)
    target = int(round(total * scale))
    if target < 1:
        raise ConfigError(f"scale {scale} collapses population {total} to zero")
    raw = [c * scale for c in counts]
    base = [int(math.floor(r)) for r in raw]
    deficit = target - sum(base)
    order = sorted(range(len(counts)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in order[:deficit]:
        base[i] += 1
    return tuple(base)


def elitist_select(sorted_genes: np.ndarray, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform pick among the top ceil(fraction * P) rows (row 0 best)."""
    pop = sorted_genes.shape[0]
    if pop == 0:
        raise ValidationError("population is empty")
    if not 0.0 < fraction <= 1.0:
        raise ConfigError("elite fraction must be in (0, 1]")
    top = frac_count(fraction, pop)
    return sorted_genes[int(rng.integers(0, top))]


def elite_carryover(sorted_genes: np.ndarray, o1: int) -> np.ndarray:
    """Copy of the o1 best rows, order preserved."""
    if o1 > sorted_genes.shape[0]:
        raise ValidationError("o1 exceeds population size")
    return sorted_genes[:o1].copy()


def intermediate_crossover(
    p1: np.ndarray, p2: np.ndarray, alpha: float, rng: np.random.Generator
) -> np.ndarray:
    """Per-gene blend child = p1 + s * (p2 - p1), s ~ U[-alpha, 1+alpha]."""
    if p1.shape != p2.shape:
        raise ValidationError("parents differ in length")
    s = rng.uniform(-alpha, 1.0 + alpha, p1.shape[0])
    child = p1 + s * (p2 - p1)
    return clamp_genes(child)


def flip_mutation(genes: np.ndarray, gamma1: float, rng: np.random.Generator) -> np.ndarray:
    """Mirror ceil(gamma1 * n) distinct genes: c becomes 1 - c."""
    n = genes.shape[0]
    count = frac_count(gamma1, n)
    pos = rng.choice(n, size=count, replace=False)
    out = genes.copy()
    # clamp only the flipped slots so unselected genes stay bit-identical
    out[pos] = np.clip(1.0 - out[pos], 0.0, GENE_MAX)
    return out


def bisection_mutation(genes: np.ndarray, gamma2: float, rng: np.random.Generator) -> np.ndarray:
    """Halve ceil(gamma2 * n) distinct genes: c becomes c / 2."""
    n = genes.shape[0]
    count = frac_count(gamma2, n)
    pos = rng.choice(n, size=count, replace=False)
    out = genes.copy()
    out[pos] = out[pos] / 2.0
    return out


def random_addition(count: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """count fresh uniform chromosomes as a (count, n) matrix."""
    if count < 0:
        raise ConfigError("count must be >= 0")
    return rng.random((count, n))
