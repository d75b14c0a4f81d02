"""Hot numeric kernels in two interchangeable variants.

Every kernel has a numba-compiled loop form (``*_numba``) and a
vectorized numpy form (``*_numpy``). Both compute bit-identical results;
the module-level unsuffixed names point at the variant selected by
:mod:`gaclust.accel`. The numba forms release the GIL so evaluation
threads can overlap.

Shared conventions:

- ``dist`` is a full symmetric N x N float64 distance matrix.
- ``labels`` is int64, values 1..k (label names never matter here).
- ``nbr`` is an N x m int64 neighbor-id table, m neighbors per point.
- kNN order is ascending by (squared distance, point id); squared
  distances are compared directly so ties are exact, never a sqrt
  artifact.
"""

import numpy as np

from .accel import BACKEND, HAS_NUMBA

if HAS_NUMBA:
    import numba as nb


def dunn_parts_numpy(dist: np.ndarray, labels: np.ndarray) -> tuple[float, float]:
    """Return (min inter-cluster distance, max intra-cluster diameter).

    min over pairs with different labels, max over pairs with equal
    labels. With no cross pair the first value is +inf; with no
    same-label pair the second is 0 (the diagonal is a zero-distance
    same-label pair by construction).
    """
    same = labels[:, None] == labels[None, :]
    min_inter = float(np.where(same, np.inf, dist).min())
    max_intra = float(np.where(same, dist, -np.inf).max())
    return min_inter, max_intra


def penalty_count_numpy(nbr: np.ndarray, labels: np.ndarray, rule: float) -> int:
    """Count points whose neighborhood disagrees in >= rule fraction.

    A point is counted when at least ``rule * m`` of its m listed
    neighbors carry a different label. With m = 0 no point counts.
    """
    n, m = nbr.shape
    if m == 0:
        return 0
    diff = (labels[nbr] != labels[:, None]).sum(axis=1)
    return int((diff >= rule * m).sum())


def knn_query_numpy(qids: np.ndarray, xs: np.ndarray, ys: np.ndarray, k: int) -> np.ndarray:
    """Exhaustive-scan kNN: per query, stable argsort on squared distance.

    Stable sort breaks distance ties by ascending point id, matching the
    grid kernel's comparator. Quadratic; kept as the correctness lane.
    """
    n = xs.shape[0]
    m = min(k, n - 1)
    out = np.empty((qids.shape[0], m), dtype=np.int64)
    for row in range(qids.shape[0]):
        i = qids[row]
        d2 = (xs - xs[i]) ** 2 + (ys - ys[i]) ** 2
        d2[i] = np.inf
        out[row] = np.argsort(d2, kind="stable")[:m]
    return out


if HAS_NUMBA:

    @nb.njit(cache=True, nogil=True)
    def dunn_parts_numba(dist, labels):  # pragma: no cover - compiled
        n = labels.shape[0]
        min_inter = np.inf
        max_intra = 0.0
        for i in range(n):
            li = labels[i]
            for j in range(i + 1, n):
                d = dist[i, j]
                if labels[j] == li:
                    if d > max_intra:
                        max_intra = d
                else:
                    if d < min_inter:
                        min_inter = d
        return min_inter, max_intra

    @nb.njit(cache=True, nogil=True)
    def penalty_count_numba(nbr, labels, rule):  # pragma: no cover - compiled
        n, m = nbr.shape
        if m == 0:
            return 0
        thresh = rule * m
        count = 0
        for i in range(n):
            li = labels[i]
            diff = 0
            for t in range(m):
                if labels[nbr[i, t]] != li:
                    diff += 1
            if diff >= thresh:
                count += 1
        return count

    @nb.njit(cache=True, nogil=True)
    def knn_query_grid_numba(
        qids, xs, ys, x0, y0, h, gx, gy, cell_start, order, k
    ):  # pragma: no cover - compiled
        # Ring search over a uniform gx x gy grid of square cells of side h.
        # After fully scanning Chebyshev ring r, any unscanned point is
        # strictly farther than r*h, so the current k-th squared distance
        # certifies completeness once it drops below (r*h)^2 (with a
        # conservative relative slack for float rounding).
        n = xs.shape[0]
        m = k if k < n - 1 else n - 1
        nq = qids.shape[0]
        out = np.empty((nq, m), dtype=np.int64)
        if m == 0:
            return out
        cand_d2 = np.empty(m, dtype=np.float64)
        cand_id = np.empty(m, dtype=np.int64)
        for qi in range(nq):
            i = qids[qi]
            px = xs[i]
            py = ys[i]
            cx = int((px - x0) / h)
            if cx < 0:
                cx = 0
            if cx > gx - 1:
                cx = gx - 1
            cy = int((py - y0) / h)
            if cy < 0:
                cy = 0
            if cy > gy - 1:
                cy = gy - 1
            rx = cx if cx > gx - 1 - cx else gx - 1 - cx
            ry = cy if cy > gy - 1 - cy else gy - 1 - cy
            max_r = rx if rx > ry else ry
            cnt = 0
            r = 0
            while True:
                a_lo = cx - r
                a_hi = cx + r
                for a in range(a_lo, a_hi + 1):
                    if a < 0 or a >= gx:
                        continue
                    if a == a_lo or a == a_hi:
                        b_from = cy - r
                        b_to = cy + r
                        b_step = 1
                    else:
                        b_from = cy - r
                        b_to = cy + r
                        b_step = 2 * r  # interior columns: only the two rim rows
                    b = b_from
                    while b <= b_to:
                        if 0 <= b < gy:
                            base = a * gy + b
                            for t in range(cell_start[base], cell_start[base + 1]):
                                j = order[t]
                                if j == i:
                                    continue
                                dx = xs[j] - px
                                dy = ys[j] - py
                                d2 = dx * dx + dy * dy
                                if cnt < m:
                                    pos = cnt
                                    cnt += 1
                                else:
                                    if d2 > cand_d2[m - 1] or (
                                        d2 == cand_d2[m - 1] and j > cand_id[m - 1]
                                    ):
                                        continue
                                    pos = m - 1
                                while pos > 0 and (
                                    cand_d2[pos - 1] > d2
                                    or (cand_d2[pos - 1] == d2 and cand_id[pos - 1] > j)
                                ):
                                    cand_d2[pos] = cand_d2[pos - 1]
                                    cand_id[pos] = cand_id[pos - 1]
                                    pos -= 1
                                cand_d2[pos] = d2
                                cand_id[pos] = j
                        b += b_step
                if cnt == m:
                    bound = r * h
                    if cand_d2[m - 1] <= bound * bound * (1.0 - 1e-9):
                        break
                if r >= max_r:
                    break
                r += 1
            for t in range(m):
                out[qi, t] = cand_id[t]
        return out

else:  # pragma: no cover - numba absent
    dunn_parts_numba = None
    penalty_count_numba = None
    knn_query_grid_numba = None


if BACKEND == "numba":
    dunn_parts = dunn_parts_numba
    penalty_count = penalty_count_numba
else:
    dunn_parts = dunn_parts_numpy
    penalty_count = penalty_count_numpy
