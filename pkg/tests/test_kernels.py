"""Backend equivalence: numba kernels against their numpy fallbacks."""

import os
import subprocess
import sys

import numpy as np
import pytest

from gaclust import kernels
from gaclust.accel import HAS_NUMBA, resolve_backend
from gaclust.errors import ConfigError
from gaclust.spatial import _build_from_xy, neighbor_table

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


@needs_numba
def test_dunn_parts_backends_agree():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = int(rng.integers(2, 80))
        feats = rng.normal(size=(n, 3))
        labels = rng.integers(1, 5, n).astype(np.int64)
        dist = np.sqrt(((feats[:, None, :] - feats[None, :, :]) ** 2).sum(-1))
        got = kernels.dunn_parts_numba(dist, labels)
        want = kernels.dunn_parts_numpy(dist, labels)
        assert got == want


@needs_numba
def test_dunn_parts_single_label_and_singletons():
    dist = np.array([[0.0, 2.0], [2.0, 0.0]])
    one = np.array([1, 1], dtype=np.int64)
    two = np.array([1, 2], dtype=np.int64)
    assert kernels.dunn_parts_numba(dist, one) == kernels.dunn_parts_numpy(dist, one)
    assert kernels.dunn_parts_numpy(dist, one) == (np.inf, 2.0)
    assert kernels.dunn_parts_numba(dist, two) == kernels.dunn_parts_numpy(dist, two)
    assert kernels.dunn_parts_numpy(dist, two) == (2.0, 0.0)


@needs_numba
def test_penalty_count_backends_agree():
    rng = np.random.default_rng(1)
    for _ in range(30):
        n = int(rng.integers(2, 200))
        m = int(rng.integers(1, min(9, n)))
        nbr = np.empty((n, m), dtype=np.int64)
        for i in range(n):
            others = np.delete(np.arange(n), i)
            nbr[i] = rng.choice(others, size=m, replace=False)
        labels = rng.integers(1, 4, n).astype(np.int64)
        rule = float(rng.choice([0.25, 0.5, 0.75, 1.0]))
        got = kernels.penalty_count_numba(nbr, labels, rule)
        want = kernels.penalty_count_numpy(nbr, labels, rule)
        assert got == want


@needs_numba
def test_penalty_count_zero_width_table():
    nbr = np.empty((4, 0), dtype=np.int64)
    labels = np.array([1, 2, 1, 2], dtype=np.int64)
    assert kernels.penalty_count_numba(nbr, labels, 0.5) == 0
    assert kernels.penalty_count_numpy(nbr, labels, 0.5) == 0


@needs_numba
def test_knn_backends_agree():
    rng = np.random.default_rng(2)
    for n in (2, 3, 25, 400):
        xs = rng.uniform(0, 50, n)
        ys = rng.uniform(0, 50, n)
        index = _build_from_xy(xs, ys)
        qids = np.arange(n, dtype=np.int64)
        for k in (1, 5, 8):
            grid = kernels.knn_query_grid_numba(
                qids, index.xs, index.ys, index.x0, index.y0, index.h,
                index.gx, index.gy, index.cell_start, index.order, k,
            )
            brute = kernels.knn_query_numpy(qids, index.xs, index.ys, k)
            assert np.array_equal(grid, brute), (n, k)


def test_resolve_backend_values():
    assert resolve_backend("numpy") == "numpy"
    assert resolve_backend("") in ("numba", "numpy")
    assert resolve_backend(None) in ("numba", "numpy")
    with pytest.raises(ConfigError):
        resolve_backend("cuda")


def test_env_flag_selects_numpy_backend():
    code = (
        "import gaclust.accel as a; import gaclust.kernels as k; "
        "print(a.active_backend(), k.dunn_parts is k.dunn_parts_numpy)"
    )
    env = dict(os.environ, GACLUST_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["numpy", "True"]


def test_neighbor_table_consistent_across_backend_env(tmp_path):
    # the fallback lane must produce the same table the default lane does
    cloud_code = """
import numpy as np
from gaclust.data import generate_synthetic_scene, two_patch_scene
from gaclust.spatial import build_planar_index, neighbor_table
cloud, _ = generate_synthetic_scene(two_patch_scene(200), 4)
table = neighbor_table(build_planar_index(cloud), 8)
np.save(r"{out}", table)
"""
    paths = []
    for backend in ("", "numpy"):
        out = tmp_path / f"table_{backend or 'default'}.npy"
        env = dict(os.environ)
        if backend:
            env["GACLUST_BACKEND"] = backend
        else:
            env.pop("GACLUST_BACKEND", None)
        run = subprocess.run(
            [sys.executable, "-c", cloud_code.format(out=out)],
            env=env,
            capture_output=True,
            text=True,
        )
        assert run.returncode == 0, run.stderr
        paths.append(out)
    a = np.load(paths[0])
    b = np.load(paths[1])
    assert np.array_equal(a, b)
