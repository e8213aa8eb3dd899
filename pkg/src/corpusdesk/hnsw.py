"""Layered proximity graph for approximate cosine kNN.

Classic hierarchical navigable-small-world construction: each node draws a
top layer from a geometric distribution, links to at most M neighbors per
upper layer (2M on the base layer) chosen with the diversity heuristic, and
queries greedily descend layer by layer before an ef-bounded base-layer
sweep. Construction is deterministic: the level RNG is fixed-seeded, nodes
are inserted in index order, and every comparison breaks distance ties by
node index.

Build keeps adjacency as Python lists; `freeze` converts them to padded
int32 matrices so searches run through the `kernels` fast path.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from . import kernels

LEVEL_SEED = 0x5EC71F5


@dataclass
class HnswParams:
    M: int = 16
    ef_construction: int = 200


@dataclass
class HnswGraph:
    params: HnswParams
    levels: np.ndarray           # int32[N], top layer per node
    entry: int
    max_level: int
    adjacency: List[np.ndarray]  # per layer: int32[N, max_deg], -1 padded
    degrees: List[np.ndarray]    # per layer: int32[N]

    def search(self, vectors: np.ndarray, query: np.ndarray, ef: int
               ) -> Tuple[np.ndarray, np.ndarray]:
        """(distances, node ids) ascending by (distance, id), up to `ef`."""
        ep = self.entry
        for layer in range(self.max_level, 0, -1):
            _, ids = kernels.search_layer(vectors, self.adjacency[layer],
                                          self.degrees[layer], query, ep, 1)
            ep = int(ids[0])
        return kernels.search_layer(vectors, self.adjacency[0],
                                    self.degrees[0], query, ep, ef)


class _Builder:
    def __init__(self, vectors: np.ndarray, params: HnswParams) -> None:
        self.vectors = vectors
        self.params = params
        self.n = vectors.shape[0]
        self.m_l = 1.0 / math.log(params.M)
        self.layers: List[Dict[int, List[int]]] = []
        self.entry = -1
        self.max_level = -1

    def _distance(self, a: int, b: int) -> float:
        return float(1.0 - self.vectors[a] @ self.vectors[b])

    def _query_distance(self, q: np.ndarray, node: int) -> float:
        return float(1.0 - self.vectors[node] @ q)

    def _search(self, q: np.ndarray, layer: Dict[int, List[int]],
                entry_points: List[int], ef: int) -> List[Tuple[float, int]]:
        """ef-search over list adjacency; returns ascending (dist, id)."""
        visited = set(entry_points)
        candidates = [(self._query_distance(q, e), e) for e in entry_points]
        heapq.heapify(candidates)
        result = [(-d, -i) for d, i in candidates]
        heapq.heapify(result)
        while candidates:
            dist, node = heapq.heappop(candidates)
            worst = (-result[0][0], -result[0][1])
            if len(result) >= ef and (dist, node) > worst:
                break
            fresh = [nb for nb in layer[node] if nb not in visited]
            if not fresh:
                continue
            visited.update(fresh)
            dists = 1.0 - self.vectors[np.asarray(fresh)] @ q
            for d, nb in zip(dists.tolist(), fresh):
                worst = (-result[0][0], -result[0][1])
                if len(result) < ef or (d, nb) < worst:
                    heapq.heappush(candidates, (d, nb))
                    heapq.heappush(result, (-d, -nb))
                    if len(result) > ef:
                        heapq.heappop(result)
        return sorted((-d, -i) for d, i in result)

    def _select_neighbors(self, candidates: List[Tuple[float, int]],
                          m: int) -> List[Tuple[float, int]]:
        """Diversity heuristic: keep a candidate only if no already-kept
        neighbor is strictly closer to it than the candidate is to the
        insertion point."""
        selected: List[Tuple[float, int]] = []
        for d, c in sorted(candidates):
            if len(selected) >= m:
                break
            good = True
            for _, s in selected:
                if self._distance(c, s) < d:
                    good = False
                    break
            if good:
                selected.append((d, c))
        return selected

    def insert(self, node: int, level: int) -> None:
        for layer in range(len(self.layers), level + 1):
            self.layers.append({})
        for layer in range(level + 1):
            self.layers[layer].setdefault(node, [])
        if self.entry < 0:
            self.entry = node
            self.max_level = level
            return

        q = self.vectors[node]
        ep = self.entry
        for layer in range(self.max_level, level, -1):
            nearest = self._search(q, self.layers[layer], [ep], 1)
            ep = nearest[0][1]

        entry_points = [ep]
        for layer in range(min(level, self.max_level), -1, -1):
            graph = self.layers[layer]
            m_layer = self.params.M * 2 if layer == 0 else self.params.M
            found = self._search(q, graph, entry_points, self.params.ef_construction)
            neighbors = self._select_neighbors(found, m_layer)
            graph[node] = [c for _, c in neighbors]
            for d, nb in neighbors:
                links = graph[nb]
                links.append(node)
                if len(links) > m_layer:
                    with_dists = [(self._distance(nb, x), x) for x in links]
                    graph[nb] = [c for _, c in
                                 self._select_neighbors(with_dists, m_layer)]
            entry_points = [c for _, c in found]

        if level > self.max_level:
            self.entry = node
            self.max_level = level

    def freeze(self, levels: np.ndarray) -> HnswGraph:
        adjacency: List[np.ndarray] = []
        degrees: List[np.ndarray] = []
        for layer in self.layers:
            deg = np.zeros(self.n, dtype=np.int32)
            max_deg = max((len(v) for v in layer.values()), default=0)
            adj = np.full((self.n, max(max_deg, 1)), -1, dtype=np.int32)
            for node, nbrs in layer.items():
                deg[node] = len(nbrs)
                if nbrs:
                    adj[node, :len(nbrs)] = nbrs
            adjacency.append(adj)
            degrees.append(deg)
        return HnswGraph(params=self.params, levels=levels, entry=self.entry,
                         max_level=self.max_level, adjacency=adjacency,
                         degrees=degrees)


def build_graph(vectors: np.ndarray, params: HnswParams) -> HnswGraph:
    """Build the proximity graph over float64 unit vectors (row = node)."""
    n = vectors.shape[0]
    rng = np.random.default_rng(LEVEL_SEED)
    uniforms = rng.random(n)
    levels = np.empty(n, dtype=np.int32)
    for i in range(n):
        u = max(uniforms[i], 1e-12)
        levels[i] = int(-math.log(u) * (1.0 / math.log(params.M)))
    builder = _Builder(vectors, params)
    for i in range(n):
        builder.insert(i, int(levels[i]))
    return builder.freeze(levels)
