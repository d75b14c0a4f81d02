"""Genetic-algorithm clustering of airborne laser scanning point clouds.

Points are clustered in signal-feature space (elevation, amplitude, echo
width, echo counts) by a random-key genetic algorithm whose fitness is
the Dunn validity index minus a weighted planar-inhomogeneity penalty. A
k-means plus majority-smoothing baseline and a seeded experiment harness
round out the package.
"""

from .accel import active_backend
from .baseline import KMeansResult, adjusted_rand_index, kmeans, knn_majority_smooth
from .data import (
    DEFAULT_FEATURES,
    FeatureMatrix,
    PointCloud,
    PointRecord,
    RegionSpec,
    SceneSpec,
    generate_synthetic_scene,
    parse_point_records,
    select_features,
    serialize_point_records,
    two_patch_scene,
)
from .encoding import GENE_MAX, decode, random_chromosome
from .engine import Population, RunConfig, RunResult, evolve, termination_check
from .fitness import (
    FitnessConfig,
    FitnessValue,
    dunn_index,
    evaluate,
    inhomogeneity_penalty,
)
from .harness import (
    ExperimentReport,
    ExperimentSpec,
    builtin_experiments,
    run_suite,
)
from .operators import (
    OperatorConfig,
    bisection_mutation,
    elite_carryover,
    elitist_select,
    flip_mutation,
    intermediate_crossover,
    random_addition,
    scale_counts,
)
from .spatial import PlanarIndex, build_planar_index, k_nearest_planar, neighbor_table

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FEATURES",
    "ExperimentReport",
    "ExperimentSpec",
    "FeatureMatrix",
    "FitnessConfig",
    "FitnessValue",
    "GENE_MAX",
    "KMeansResult",
    "OperatorConfig",
    "PlanarIndex",
    "PointCloud",
    "PointRecord",
    "Population",
    "RegionSpec",
    "RunConfig",
    "RunResult",
    "SceneSpec",
    "active_backend",
    "adjusted_rand_index",
    "bisection_mutation",
    "build_planar_index",
    "builtin_experiments",
    "decode",
    "dunn_index",
    "elite_carryover",
    "elitist_select",
    "evaluate",
    "evolve",
    "flip_mutation",
    "generate_synthetic_scene",
    "intermediate_crossover",
    "k_nearest_planar",
    "kmeans",
    "knn_majority_smooth",
    "neighbor_table",
    "parse_point_records",
    "random_addition",
    "random_chromosome",
    "run_suite",
    "scale_counts",
    "select_features",
    "serialize_point_records",
    "termination_check",
    "two_patch_scene",
    "__version__",
]
