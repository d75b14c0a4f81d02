"""Dunn index, inhomogeneity penalty, and combined-fitness tests."""

import math

import numpy as np
import pytest

from gaclust.data import generate_synthetic_scene, two_patch_scene, select_features
from gaclust.errors import ConfigError, DegenerateLabelingError, ValidationError
from gaclust.fitness import (
    DUNN_CAP,
    WORST_FITNESS,
    FitnessConfig,
    FitnessContext,
    dunn_index,
    evaluate,
    inhomogeneity_penalty,
)
from gaclust.spatial import _build_from_xy, build_planar_index

from oracles import dunn_brute, penalty_brute


def _line_index(n, spacing=1.0):
    xs = np.arange(n, dtype=np.float64) * spacing
    return _build_from_xy(xs, np.zeros(n))


def test_dunn_two_tight_clusters():
    feats = np.array([[0.0], [1.0], [10.0], [11.0]])
    labels = np.array([1, 1, 2, 2])
    assert dunn_index(feats, labels) == pytest.approx(9.0)


def test_dunn_all_singletons_is_infinite():
    feats = np.array([[0.0], [5.0], [10.0]])
    labels = np.array([1, 2, 3])
    assert dunn_index(feats, labels) == math.inf


def test_dunn_degenerate_raises():
    feats = np.array([[0.0], [1.0]])
    with pytest.raises(DegenerateLabelingError):
        dunn_index(feats, np.array([1, 1]))


def test_dunn_matches_bruteforce_oracle():
    rng = np.random.default_rng(10)
    for trial in range(40):
        n = int(rng.integers(6, 50))
        f = int(rng.integers(2, 5))
        k = int(rng.integers(2, 6))
        feats = rng.normal(size=(n, f))
        labels = rng.integers(1, k + 1, n)
        labels[: k] = np.arange(1, k + 1)  # keep at least two clusters non-empty
        got = dunn_index(feats, labels)
        want = dunn_brute(feats.tolist(), labels.tolist())
        if math.isinf(want):
            assert math.isinf(got)
        else:
            assert got == pytest.approx(want, rel=1e-12), trial


def test_dunn_invariant_under_relabeling():
    rng = np.random.default_rng(11)
    feats = rng.normal(size=(30, 3))
    labels = rng.integers(1, 4, 30)
    labels[:3] = [1, 2, 3]
    permuted = np.array([4, 1, 9])[labels - 1]
    assert dunn_index(feats, labels) == dunn_index(feats, permuted)


def test_dunn_scale_invariant():
    rng = np.random.default_rng(12)
    feats = rng.normal(size=(25, 4))
    labels = rng.integers(1, 3, 25)
    labels[:2] = [1, 2]
    base = dunn_index(feats, labels)
    assert dunn_index(feats * 37.5, labels) == pytest.approx(base, rel=1e-12)


def test_penalty_homogeneous_is_zero():
    index = _line_index(20)
    cfg = FitnessConfig(neighbor_k=4)
    assert inhomogeneity_penalty(index, np.ones(20, dtype=int), cfg) == 0


def test_penalty_alternating_strip_counts_everyone():
    n = 10
    index = _line_index(n)
    labels = np.array([1 + (i % 2) for i in range(n)])
    cfg = FitnessConfig(neighbor_k=2, inhomogeneity_rule=0.5)
    assert inhomogeneity_penalty(index, labels, cfg) == n


def test_penalty_two_grid_patches_matches_oracle():
    # two solid 10x10 unit-grid patches side by side, distinct labels
    xs, ys, labels = [], [], []
    for gy in range(10):
        for gx in range(20):
            xs.append(float(gx))
            ys.append(float(gy))
            labels.append(1 if gx < 10 else 2)
    xs = np.array(xs)
    ys = np.array(ys)
    labels = np.array(labels)
    index = _build_from_xy(xs, ys)
    cfg = FitnessConfig(neighbor_k=8, inhomogeneity_rule=0.5)
    got = inhomogeneity_penalty(index, labels, cfg)
    want = penalty_brute(xs.tolist(), ys.tolist(), labels.tolist(), 8, 0.5)
    assert got == want
    # only points within one column of the border may count
    border = {9.0, 10.0}
    eligible = sum(1 for x in xs if x in border)
    assert got <= eligible


def test_penalty_matches_oracle_random_scenes():
    rng = np.random.default_rng(13)
    for _ in range(10):
        n = int(rng.integers(2, 60))
        xs = rng.uniform(0, 30, n)
        ys = rng.uniform(0, 30, n)
        labels = rng.integers(1, 4, n)
        index = _build_from_xy(xs, ys)
        for k, rule in ((1, 0.5), (5, 0.5), (8, 0.25), (3, 1.0)):
            cfg = FitnessConfig(neighbor_k=k, inhomogeneity_rule=rule)
            got = inhomogeneity_penalty(index, labels, cfg)
            want = penalty_brute(xs.tolist(), ys.tolist(), labels.tolist(), k, rule)
            assert got == want, (n, k, rule)


def test_penalty_relabel_invariant():
    rng = np.random.default_rng(14)
    xs = rng.uniform(0, 10, 40)
    ys = rng.uniform(0, 10, 40)
    labels = rng.integers(1, 4, 40)
    index = _build_from_xy(xs, ys)
    cfg = FitnessConfig()
    permuted = np.array([7, 2, 5])[labels - 1]
    assert inhomogeneity_penalty(index, labels, cfg) == inhomogeneity_penalty(
        index, permuted, cfg
    )


def test_penalty_monotone_under_interior_flip():
    # flipping one interior point of a homogeneous patch never lowers the count
    xs, ys = np.meshgrid(np.arange(9, dtype=float), np.arange(9, dtype=float))
    xs = xs.ravel()
    ys = ys.ravel()
    index = _build_from_xy(xs, ys)
    cfg = FitnessConfig(neighbor_k=8, inhomogeneity_rule=0.5)
    base = np.ones(81, dtype=int)
    before = inhomogeneity_penalty(index, base, cfg)
    for flip in (40, 30, 50):  # interior ids
        labels = base.copy()
        labels[flip] = 2
        assert inhomogeneity_penalty(index, labels, cfg) >= before


def test_evaluate_combined_formula_exact():
    cloud, truth = generate_synthetic_scene(two_patch_scene(80), 2)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    cfg = FitnessConfig(lam=1.7)
    rng = np.random.default_rng(0)
    labels = rng.integers(1, 3, len(cloud))
    labels[:2] = [1, 2]
    value = evaluate(feats, index, labels, cfg)
    assert value.combined == value.dunn - 1.7 * value.penalty_count / len(cloud)


def test_evaluate_zero_penalty_means_pure_dunn():
    cloud, truth = generate_synthetic_scene(two_patch_scene(80), 3)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    value = evaluate(feats, index, truth, FitnessConfig())
    assert value.penalty_count == 0
    assert value.combined == value.dunn


def test_evaluate_lambda_zero_ignores_layout():
    cloud, _ = generate_synthetic_scene(two_patch_scene(60), 4)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    rng = np.random.default_rng(1)
    labels = rng.integers(1, 3, len(cloud))
    labels[:2] = [1, 2]
    value = evaluate(feats, index, labels, FitnessConfig(lam=0.0))
    assert value.combined == value.dunn
    assert value.penalty_count > 0


def test_evaluate_raw_penalty_mode():
    cloud, _ = generate_synthetic_scene(two_patch_scene(60), 5)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    rng = np.random.default_rng(2)
    labels = rng.integers(1, 3, len(cloud))
    labels[:2] = [1, 2]
    cfg = FitnessConfig(lam=1.0, normalize_penalty=False)
    value = evaluate(feats, index, labels, cfg)
    assert value.combined == value.dunn - value.penalty_count


def test_evaluate_degenerate_gets_sentinel():
    cloud, _ = generate_synthetic_scene(two_patch_scene(40), 6)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    value = evaluate(feats, index, np.ones(len(cloud), dtype=int), FitnessConfig())
    assert value.combined == WORST_FITNESS
    assert math.isnan(value.dunn)


def test_evaluate_caps_infinite_dunn():
    # three singleton-featured points, all distinct labels, zero diameter
    feats = np.array([[0.0], [5.0], [10.0]])
    index = _line_index(3)
    value = evaluate(feats, index, np.array([1, 2, 3]), FitnessConfig())
    assert value.dunn == DUNN_CAP


def test_evaluate_clean_beats_noisy_borders():
    cloud, truth = generate_synthetic_scene(two_patch_scene(200), 7)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    cfg = FitnessConfig()
    rng = np.random.default_rng(3)
    noisy = truth.copy()
    flip = rng.choice(len(cloud), size=len(cloud) // 20, replace=False)
    noisy[flip] = 3 - noisy[flip]
    clean_value = evaluate(feats, index, truth, cfg)
    noisy_value = evaluate(feats, index, noisy, cfg)
    assert clean_value.combined > noisy_value.combined


def test_context_matches_one_shot_evaluate():
    cloud, truth = generate_synthetic_scene(two_patch_scene(70), 8)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    cfg = FitnessConfig()
    ctx = FitnessContext(feats, index, cfg)
    rng = np.random.default_rng(4)
    for _ in range(10):
        labels = rng.integers(1, 3, len(cloud)).astype(np.int64)
        labels[:2] = [1, 2]
        assert ctx.value(labels) == evaluate(feats, index, labels, cfg)


def test_evaluate_is_pure():
    cloud, truth = generate_synthetic_scene(two_patch_scene(50), 9)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    cfg = FitnessConfig()
    a = evaluate(feats, index, truth, cfg)
    b = evaluate(feats, index, truth, cfg)
    assert a == b


def test_config_validation():
    with pytest.raises(ConfigError):
        FitnessConfig(lam=-1.0).validate()
    with pytest.raises(ConfigError):
        FitnessConfig(neighbor_k=0).validate()
    with pytest.raises(ConfigError):
        FitnessConfig(inhomogeneity_rule=0.0).validate()
    with pytest.raises(ConfigError):
        FitnessConfig(inhomogeneity_rule=1.5).validate()


def test_length_mismatch_rejected():
    cloud, _ = generate_synthetic_scene(two_patch_scene(30), 1)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    with pytest.raises(ValidationError):
        evaluate(feats, index, np.array([1, 2, 1]), FitnessConfig())
