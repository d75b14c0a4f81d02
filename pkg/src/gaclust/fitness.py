"""Labeling fitness: Dunn index minus a weighted spatial-inhomogeneity term.

The Dunn index is the smallest single-linkage distance between two
non-empty clusters divided by the largest cluster diameter, both in
feature space. The penalty counts points whose planar neighborhood
mostly disagrees with their own label; a point counts when at least
``inhomogeneity_rule`` of its ``neighbor_k`` nearest planar neighbors
carry a different label (>= threshold, so a half-and-half neighborhood
at rule 0.5 counts). Combined fitness is

    combined = min(dunn, dunn_cap) - lam * penalty_count / N

with the division by N dropped when ``normalize_penalty`` is off.
Labelings with fewer than two non-empty clusters get ``worst_fitness``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import kernels
from .data import FeatureMatrix
from .errors import ConfigError, DegenerateLabelingError, ValidationError
from .spatial import PlanarIndex, neighbor_table

DUNN_CAP = 1.0e6
WORST_FITNESS = -1.0e9


@dataclass(frozen=True)
class FitnessConfig:
    """Weights and neighborhood parameters for the combined score."""

    lam: float = 1.0
    neighbor_k: int = 8
    inhomogeneity_rule: float = 0.5
    normalize_penalty: bool = True
    dunn_cap: float = DUNN_CAP
    worst_fitness: float = WORST_FITNESS

    def validate(self) -> None:
        if self.lam < 0:
            raise ConfigError("lam must be >= 0")
        if self.neighbor_k < 1:
            raise ConfigError("neighbor_k must be >= 1")
        if not 0.0 < self.inhomogeneity_rule <= 1.0:
            raise ConfigError("inhomogeneity_rule must be in (0, 1]")
        if self.dunn_cap <= 0:
            raise ConfigError("dunn_cap must be positive")


@dataclass(frozen=True)
class FitnessValue:
    """Component scores of one labeling.

    ``dunn`` is capped at the configured cap; it is NaN for degenerate
    labelings, in which case ``combined`` is the worst-fitness sentinel
    instead of the linear form.
    """

    dunn: float
    penalty_count: int
    combined: float


def _label_array(labeling) -> np.ndarray:
    labels = np.ascontiguousarray(labeling, dtype=np.int64)
    if labels.ndim != 1 or labels.shape[0] == 0:
        raise ValidationError("labeling must be a non-empty 1-D vector")
    if labels.min() < 1:
        raise ValidationError("labels must be >= 1")
    return labels


def _feature_values(features) -> np.ndarray:
    if isinstance(features, FeatureMatrix):
        return features.values
    return np.ascontiguousarray(features, dtype=np.float64)


def dunn_index(features, labeling) -> float:
    """Dunn index of a labeling; +inf when the max diameter is zero.

    Raises DegenerateLabelingError for fewer than two non-empty clusters
    (callers that must stay total use :func:`evaluate` instead).
    """
    values = _feature_values(features)
    labels = _label_array(labeling)
    if values.shape[0] != labels.shape[0]:
        raise ValidationError("features and labeling disagree in length")
    if np.unique(labels).size < 2:
        raise DegenerateLabelingError("labeling has fewer than 2 non-empty clusters")
    dist = cdist(values, values)
    min_inter, max_intra = kernels.dunn_parts(dist, labels)
    if max_intra == 0.0:
        return math.inf
    return min_inter / max_intra


def inhomogeneity_penalty(index: PlanarIndex, labeling, cfg: FitnessConfig) -> int:
    """Count of points with a mostly foreign-labeled planar neighborhood."""
    cfg.validate()
    labels = _label_array(labeling)
    if labels.shape[0] != len(index):
        raise ValidationError("labeling and index disagree in length")
    nbr = neighbor_table(index, cfg.neighbor_k)
    return int(kernels.penalty_count(nbr, labels, cfg.inhomogeneity_rule))


class FitnessContext:
    """Precomputed state for scoring many labelings of one data set.

    Features and planar neighborhoods are fixed for a whole run; only
    labels vary. The feature distance matrix and the neighbor table are
    therefore built once and shared read-only across threads.
    """

    def __init__(self, features, index: PlanarIndex, cfg: FitnessConfig):
        cfg.validate()
        self.cfg = cfg
        values = _feature_values(features)
        if values.shape[0] != len(index):
            raise ValidationError("features and index disagree in length")
        self.n = values.shape[0]
        self.dist = np.ascontiguousarray(cdist(values, values))
        self.nbr = np.ascontiguousarray(neighbor_table(index, cfg.neighbor_k))
        self._pen_scale = cfg.lam / self.n if cfg.normalize_penalty else cfg.lam

    def evaluate_labels(self, labels: np.ndarray) -> tuple[float, int, float]:
        """Hot path: (dunn-or-NaN, penalty_count, combined) for int64 labels."""
        cfg = self.cfg
        pen = int(kernels.penalty_count(self.nbr, labels, cfg.inhomogeneity_rule))
        counts = np.bincount(labels)
        if np.count_nonzero(counts[1:]) < 2:
            return math.nan, pen, cfg.worst_fitness
        min_inter, max_intra = kernels.dunn_parts(self.dist, labels)
        if max_intra == 0.0:
            dunn = cfg.dunn_cap
        else:
            dunn = min(min_inter / max_intra, cfg.dunn_cap)
        return dunn, pen, dunn - self._pen_scale * pen

    def value(self, labels: np.ndarray) -> FitnessValue:
        dunn, pen, combined = self.evaluate_labels(_label_array(labels))
        return FitnessValue(dunn, pen, combined)


def evaluate(features, index: PlanarIndex, labeling, cfg: FitnessConfig) -> FitnessValue:
    """Score one labeling; convenience wrapper building a fresh context."""
    labels = _label_array(labeling)
    if labels.shape[0] != len(index):
        raise ValidationError("labeling and index disagree in length")
    return FitnessContext(features, index, cfg).value(labels)
