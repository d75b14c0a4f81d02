"""Timing comparison of the compiled and pure-numpy kernel lanes.

Times the three hot kernels (Dunn parts, penalty count, kNN table) on a
synthetic scene and prints a table with the speedup of the compiled lane.

    python3 benchmarks/bench_kernels.py [--points 2000] [--k 10] [--repeat 5]
"""

import argparse
import statistics
import time

import numpy as np
from scipy.spatial.distance import cdist

from gaclust import kernels
from gaclust.accel import HAS_NUMBA
from gaclust.data import generate_synthetic_scene, select_features, two_patch_scene
from gaclust.spatial import build_planar_index, neighbor_table


def _time(fn, repeat: int) -> float:
    fn()  # warm-up: first numba call includes compilation
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--neighbor-k", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cloud, _ = generate_synthetic_scene(two_patch_scene(args.points), 42)
    feats = select_features(cloud)
    index = build_planar_index(cloud)
    dist = np.ascontiguousarray(cdist(feats.values, feats.values))
    rng = np.random.default_rng(0)
    labels = rng.integers(1, args.k + 1, args.points).astype(np.int64)
    nbr = np.ascontiguousarray(neighbor_table(index, args.neighbor_k))
    qids = np.arange(args.points, dtype=np.int64)

    rows = []

    def add(name, numba_fn, numpy_fn):
        t_np = _time(numpy_fn, args.repeat)
        t_nb = _time(numba_fn, args.repeat) if HAS_NUMBA else float("nan")
        rows.append((name, t_nb, t_np))

    add(
        f"dunn_parts (N={args.points})",
        lambda: kernels.dunn_parts_numba(dist, labels),
        lambda: kernels.dunn_parts_numpy(dist, labels),
    )
    add(
        f"penalty_count (N={args.points}, k={args.neighbor_k})",
        lambda: kernels.penalty_count_numba(nbr, labels, 0.5),
        lambda: kernels.penalty_count_numpy(nbr, labels, 0.5),
    )
    add(
        f"knn_table (N={args.points}, k={args.neighbor_k})",
        lambda: kernels.knn_query_grid_numba(
            qids, index.xs, index.ys, index.x0, index.y0,
            index.h, index.gx, index.gy, index.cell_start, index.order,
            args.neighbor_k,
        ),
        lambda: kernels.knn_query_numpy(qids, index.xs, index.ys, args.neighbor_k),
    )

    if not HAS_NUMBA:
        print("numba is not installed; showing the numpy lane only\n")
    header = f"{'kernel':<34} {'numba':>12} {'numpy':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, t_nb, t_np in rows:
        nb = f"{t_nb * 1e3:10.3f}ms" if t_nb == t_nb else "       n/a"
        speed = f"{t_np / t_nb:8.1f}x" if t_nb == t_nb and t_nb > 0 else "      n/a"
        print(f"{name:<34} {nb:>12} {t_np * 1e3:10.3f}ms {speed:>9}")


if __name__ == "__main__":
    main()
