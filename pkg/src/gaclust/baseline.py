"""Traditional comparison pipeline: k-means plus neighborhood smoothing.

Lloyd's algorithm with seeded distinct-point initialization; an empty
cluster is re-seeded at the point farthest from its stale center. The
smoothing step replaces each label by the modal label among the point's
planar neighbors plus itself, computed synchronously from the input
labeling (one pass never cascades).
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .data import FeatureMatrix
from .errors import ConfigError, ValidationError
from .spatial import PlanarIndex, neighbor_table


@dataclass(frozen=True)
class KMeansResult:
    """Labels (1..k), final centers, inertia, and per-iteration history."""

    labeling: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations_used: int
    inertia_history: tuple[float, ...]


def _feature_values(features) -> np.ndarray:
    if isinstance(features, FeatureMatrix):
        return features.values
    return np.ascontiguousarray(features, dtype=np.float64)


def kmeans(
    features,
    k: int,
    seed: int = 42,
    max_iter: int = 100,
    tol: float = 1e-6,
) -> KMeansResult:
    """Seeded Lloyd iteration; ties in assignment go to the lowest center id."""
    values = _feature_values(features)
    n = values.shape[0]
    if k < 1:
        raise ConfigError("k must be >= 1")
    if k > n:
        raise ConfigError(f"k {k} exceeds point count {n}")
    if max_iter < 1:
        raise ConfigError("max_iter must be >= 1")
    if tol < 0:
        raise ConfigError("tol must be >= 0")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed,))))
    centers = values[rng.choice(n, size=k, replace=False)].copy()

    def assign(cen):
        d2 = cdist(values, cen, "sqeuclidean")
        lab = d2.argmin(axis=1)  # argmin takes the first minimum: lowest center id
        return lab, d2

    history = []
    labels = None
    iterations = 0
    for _ in range(max_iter):
        labels, d2 = assign(centers)
        # Re-seed empty clusters at the point farthest from the stale
        # center (first-largest wins: lowest point id), excluding points
        # already taken by this pass.
        taken = np.zeros(n, dtype=bool)
        for _ in range(k):
            counts = np.bincount(labels, minlength=k)
            empties = np.flatnonzero(counts == 0)
            if empties.size == 0:
                break
            c = int(empties[0])
            dist_c = d2[:, c].copy()
            dist_c[taken] = -np.inf
            far = int(np.argmax(dist_c))
            taken[far] = True
            centers[c] = values[far]
            labels, d2 = assign(centers)
        iterations += 1
        history.append(float(d2[np.arange(n), labels].sum()))
        new_centers = centers.copy()
        for c in range(k):
            mask = labels == c
            if mask.any():
                new_centers[c] = values[mask].mean(axis=0)
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        if shift < tol:
            break
    labels, d2 = assign(centers)
    inertia = float(d2[np.arange(n), labels].sum())
    return KMeansResult(
        labeling=labels.astype(np.int64) + 1,
        centers=centers,
        inertia=inertia,
        iterations_used=iterations,
        inertia_history=tuple(history),
    )


def knn_majority_smooth(
    index: PlanarIndex, labeling, neighbor_k: int = 8, repeats: int = 1
) -> np.ndarray:
    """Replace each label by the modal label of (self + planar neighbors).

    Ties keep the current label when it is modal, otherwise the lowest
    modal label id wins. ``repeats`` chains synchronous passes.
    """
    if neighbor_k < 1:
        raise ConfigError("neighbor_k must be >= 1")
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    labels = np.ascontiguousarray(labeling, dtype=np.int64)
    if labels.shape[0] != len(index):
        raise ValidationError("labeling and index disagree in length")
    if labels.min() < 1:
        raise ValidationError("labels must be >= 1")
    n = labels.shape[0]
    nbr = neighbor_table(index, neighbor_k)
    kmax = int(labels.max())
    rows = np.arange(n)
    for _ in range(repeats):
        counts = np.zeros((n, kmax + 1), dtype=np.int64)
        if nbr.shape[1] > 0:
            np.add.at(counts, (rows[:, None], labels[nbr]), 1)
        counts[rows, labels] += 1
        top = counts.max(axis=1)
        current_is_modal = counts[rows, labels] == top
        lowest_modal = (counts == top[:, None]).argmax(axis=1)
        labels = np.where(current_is_modal, labels, lowest_modal)
    return labels


def adjusted_rand_index(a, b) -> float:
    """Chance-corrected agreement between two labelings of the same points.

    Both-trivial partitions (each a single block) agree perfectly and
    return 1.0; the general case is the standard contingency-table form.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("labelings must be 1-D and equal length")
    n = a.shape[0]
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    ka = int(ai.max()) + 1
    kb = int(bi.max()) + 1
    table = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)

    def comb2(x):
        return x * (x - 1) / 2.0

    sum_ij = comb2(table.astype(np.float64)).sum()
    sum_a = comb2(table.sum(axis=1).astype(np.float64)).sum()
    sum_b = comb2(table.sum(axis=0).astype(np.float64)).sum()
    total = comb2(float(n))
    if total == 0:
        return 1.0
    expected = sum_a * sum_b / total
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))
