"""Numeric hot kernels with a numba fast path and a pure-numpy fallback.

Three inner loops dominate engine runtime: the brute-force cosine scan
behind exact kNN, the graph-layer search behind approximate kNN, and the
pairwise title-distance matrix behind clustering. Each has two
implementations with identical semantics (including tie handling by id):

* ``*_numba`` — ``@njit(cache=True)`` scalar loops, compiled on first use;
* ``*_numpy`` — vectorized numpy / plain Python.

The active path is chosen at import time: numba when importable, unless
``CORPUSDESK_NO_NUMBA=1`` forces the fallback. ``benchmarks/bench_kernels.py``
times both paths side by side; per those numbers the dense scan ships on
the BLAS-backed numpy path even when numba is available.
"""

from __future__ import annotations

import heapq
import os
from typing import List, Tuple

import numpy as np

_DISABLE = os.environ.get("CORPUSDESK_NO_NUMBA", "").lower() in ("1", "true", "yes")

if not _DISABLE:
    try:
        from numba import njit
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# brute-force cosine scan

def dense_distances_numpy(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Cosine distances 1 - M @ q for unit-norm rows, float64."""
    return 1.0 - matrix @ query


if NUMBA_ENABLED:

    @njit(cache=True)
    def _dense_distances_jit(matrix, query):  # pragma: no cover - compiled
        n, dim = matrix.shape
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            acc = 0.0
            for j in range(dim):
                acc += matrix[i, j] * query[j]
            out[i] = 1.0 - acc
        return out

    def dense_distances_numba(matrix: np.ndarray, query: np.ndarray) -> np.ndarray:
        return _dense_distances_jit(np.ascontiguousarray(matrix),
                                    np.ascontiguousarray(query))
else:
    dense_distances_numba = dense_distances_numpy


# ---------------------------------------------------------------------------
# graph layer search (ef-search over a padded adjacency matrix)
#
# Heaps order entries by (distance, node id) so equal distances resolve
# identically in both implementations.

def search_layer_numpy(vectors: np.ndarray, adj: np.ndarray, deg: np.ndarray,
                       query: np.ndarray, entry: int, ef: int
                       ) -> Tuple[np.ndarray, np.ndarray]:
    """Return up to `ef` (distance, id) pairs nearest to `query`, ascending."""
    n = vectors.shape[0]
    visited = np.zeros(n, dtype=bool)
    visited[entry] = True
    d0 = float(1.0 - vectors[entry] @ query)
    candidates: List[Tuple[float, int]] = [(d0, entry)]
    # max-heap on (distance, id) via negated tuple ordering trick
    result: List[Tuple[float, int]] = [(-d0, -entry)]
    while candidates:
        dist, node = heapq.heappop(candidates)
        worst_d, worst_i = -result[0][0], -result[0][1]
        if len(result) >= ef and (dist, node) > (worst_d, worst_i):
            break
        nbrs = adj[node, :deg[node]]
        fresh = nbrs[~visited[nbrs]]
        if fresh.size == 0:
            continue
        visited[fresh] = True
        dists = 1.0 - vectors[fresh] @ query
        for d, nb in zip(dists.tolist(), fresh.tolist()):
            worst_d, worst_i = -result[0][0], -result[0][1]
            if len(result) < ef or (d, nb) < (worst_d, worst_i):
                heapq.heappush(candidates, (d, nb))
                heapq.heappush(result, (-d, -nb))
                if len(result) > ef:
                    heapq.heappop(result)
    pairs = sorted((-d, -i) for d, i in result)
    out_d = np.array([p[0] for p in pairs], dtype=np.float64)
    out_i = np.array([p[1] for p in pairs], dtype=np.int64)
    return out_d, out_i


if NUMBA_ENABLED:

    @njit(cache=True)
    def _lt(d1, i1, d2, i2):  # pragma: no cover - compiled
        return d1 < d2 or (d1 == d2 and i1 < i2)

    @njit(cache=True)
    def _heap_push(hd, hi, size, d, i, is_max):  # pragma: no cover - compiled
        hd[size] = d
        hi[size] = i
        pos = size
        while pos > 0:
            parent = (pos - 1) // 2
            if is_max:
                swap = _lt(hd[parent], hi[parent], hd[pos], hi[pos])
            else:
                swap = _lt(hd[pos], hi[pos], hd[parent], hi[parent])
            if not swap:
                break
            hd[pos], hd[parent] = hd[parent], hd[pos]
            hi[pos], hi[parent] = hi[parent], hi[pos]
            pos = parent
        return size + 1

    @njit(cache=True)
    def _heap_pop(hd, hi, size, is_max):  # pragma: no cover - compiled
        size -= 1
        hd[0], hd[size] = hd[size], hd[0]
        hi[0], hi[size] = hi[size], hi[0]
        pos = 0
        while True:
            left = 2 * pos + 1
            if left >= size:
                break
            best = left
            right = left + 1
            if right < size:
                if is_max:
                    if _lt(hd[best], hi[best], hd[right], hi[right]):
                        best = right
                else:
                    if _lt(hd[right], hi[right], hd[best], hi[best]):
                        best = right
            if is_max:
                swap = _lt(hd[pos], hi[pos], hd[best], hi[best])
            else:
                swap = _lt(hd[best], hi[best], hd[pos], hi[pos])
            if not swap:
                break
            hd[pos], hd[best] = hd[best], hd[pos]
            hi[pos], hi[best] = hi[best], hi[pos]
            pos = best
        return size

    @njit(cache=True)
    def _search_layer_jit(vectors, adj, deg, query, entry, ef):  # pragma: no cover
        n, dim = vectors.shape
        visited = np.zeros(n, dtype=np.uint8)
        visited[entry] = 1

        cand_d = np.empty(n + 1, dtype=np.float64)
        cand_i = np.empty(n + 1, dtype=np.int64)
        cand_size = 0
        res_d = np.empty(ef + 1, dtype=np.float64)
        res_i = np.empty(ef + 1, dtype=np.int64)
        res_size = 0

        acc = 0.0
        for j in range(dim):
            acc += vectors[entry, j] * query[j]
        d0 = 1.0 - acc
        cand_size = _heap_push(cand_d, cand_i, cand_size, d0, entry, False)
        res_size = _heap_push(res_d, res_i, res_size, d0, entry, True)

        while cand_size > 0:
            dist = cand_d[0]
            node = cand_i[0]
            cand_size = _heap_pop(cand_d, cand_i, cand_size, False)
            if res_size >= ef and _lt(res_d[0], res_i[0], dist, node):
                break
            for t in range(deg[node]):
                nb = adj[node, t]
                if visited[nb]:
                    continue
                visited[nb] = 1
                acc = 0.0
                for j in range(dim):
                    acc += vectors[nb, j] * query[j]
                d = 1.0 - acc
                if res_size < ef or _lt(d, nb, res_d[0], res_i[0]):
                    cand_size = _heap_push(cand_d, cand_i, cand_size, d, nb, False)
                    res_size = _heap_push(res_d, res_i, res_size, d, nb, True)
                    if res_size > ef:
                        res_size = _heap_pop(res_d, res_i, res_size, True)
            # loop continues until the candidate heap drains or breaks above

        out_d = np.empty(res_size, dtype=np.float64)
        out_i = np.empty(res_size, dtype=np.int64)
        for t in range(res_size - 1, -1, -1):
            out_d[t] = res_d[0]
            out_i[t] = res_i[0]
            res_size = _heap_pop(res_d, res_i, res_size, True)
        return out_d, out_i

    def search_layer_numba(vectors: np.ndarray, adj: np.ndarray, deg: np.ndarray,
                           query: np.ndarray, entry: int, ef: int
                           ) -> Tuple[np.ndarray, np.ndarray]:
        return _search_layer_jit(vectors, adj, deg, query, int(entry), int(ef))
else:
    search_layer_numba = search_layer_numpy


# ---------------------------------------------------------------------------
# pairwise title distances for clustering
#
# Token sets are encoded as sorted int32 id arrays, concatenated in `flat`
# with `offsets[i]:offsets[i+1]` delimiting title i. The combined distance is
# alpha * (1 - jaccard) + (1 - alpha) * |position difference|, emitted as a
# condensed upper-triangle matrix in (i, j) row-major pair order.

def pdc_pairwise_numpy(flat: np.ndarray, offsets: np.ndarray,
                       positions: np.ndarray, alpha: float) -> np.ndarray:
    n = len(offsets) - 1
    sets = [frozenset(flat[offsets[i]:offsets[i + 1]].tolist()) for i in range(n)]
    out = np.empty(n * (n - 1) // 2, dtype=np.float64)
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            union = len(sets[i] | sets[j])
            inter = len(sets[i] & sets[j])
            jac = inter / union if union else 1.0
            out[idx] = alpha * (1.0 - jac) + (1.0 - alpha) * abs(positions[i] - positions[j])
            idx += 1
    return out


if NUMBA_ENABLED:

    @njit(cache=True)
    def _pdc_pairwise_jit(flat, offsets, positions, alpha):  # pragma: no cover
        n = len(offsets) - 1
        out = np.empty(n * (n - 1) // 2, dtype=np.float64)
        idx = 0
        for i in range(n):
            a0, a1 = offsets[i], offsets[i + 1]
            for j in range(i + 1, n):
                b0, b1 = offsets[j], offsets[j + 1]
                # sorted-array intersection count
                inter = 0
                p, q = a0, b0
                while p < a1 and q < b1:
                    if flat[p] == flat[q]:
                        inter += 1
                        p += 1
                        q += 1
                    elif flat[p] < flat[q]:
                        p += 1
                    else:
                        q += 1
                union = (a1 - a0) + (b1 - b0) - inter
                jac = inter / union if union > 0 else 1.0
                diff = positions[i] - positions[j]
                if diff < 0:
                    diff = -diff
                out[idx] = alpha * (1.0 - jac) + (1.0 - alpha) * diff
                idx += 1
        return out

    def pdc_pairwise_numba(flat: np.ndarray, offsets: np.ndarray,
                           positions: np.ndarray, alpha: float) -> np.ndarray:
        return _pdc_pairwise_jit(flat, offsets, positions, float(alpha))
else:
    pdc_pairwise_numba = pdc_pairwise_numpy


# Active implementations. The dense scan stays on numpy either way: BLAS
# beats the scalar loop there (see benchmarks/bench_kernels.py), while the
# graph search and the pairwise title loop profit from numba.
dense_distances = dense_distances_numpy
if NUMBA_ENABLED:
    search_layer = search_layer_numba
    pdc_pairwise = pdc_pairwise_numba
else:
    search_layer = search_layer_numpy
    pdc_pairwise = pdc_pairwise_numpy
