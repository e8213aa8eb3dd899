"""Embedded vector index: exact and approximate cosine kNN with persistence.

Entries are keyed by sentence id and stored in lexicographic id order, which
doubles as the tie-break rank: equal distances always resolve to the
lexicographically smaller sentence id. Exact mode scans the whole matrix;
approximate mode searches a serialized proximity graph (see `hnsw`), so a
loaded index answers queries identically to the one that was saved.

File format (little-endian): magic ``CSIX``, format version u16, dim u32,
mode u8, entry count u32, then per entry a u16-length-prefixed UTF-8 id and
dim float32 values; approximate indexes append the graph section.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional

import numpy as np

from . import kernels
from .errors import ConfigurationError
from .hnsw import HnswGraph, HnswParams, build_graph

MAGIC = b"CSIX"
FORMAT_VERSION = 1
MODE_EXACT = "exact"
MODE_APPROX = "approximate"
DEFAULT_EF_SEARCH = 64


class IndexFormatError(Exception):
    """The index file is not readable: bad magic, version, or truncation."""


@dataclass(frozen=True)
class Neighbor:
    sentence_id: str
    distance: float


class VectorIndex:
    """Read-only after build; concurrent queries are safe."""

    def __init__(self, ids: List[str], matrix: np.ndarray, mode: str,
                 graph: Optional[HnswGraph] = None) -> None:
        self.ids = ids
        self.matrix = matrix  # float32, rows in lexicographic id order
        self.mode = mode
        self.graph = graph
        self.dim = int(matrix.shape[1])
        self._v64 = matrix.astype(np.float64)
        self._row_of = {sid: i for i, sid in enumerate(ids)}

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def entries(self) -> Dict[str, np.ndarray]:
        return {sid: self.matrix[i] for i, sid in enumerate(self.ids)}

    def vector(self, sentence_id: str) -> np.ndarray:
        row = self._row_of.get(sentence_id)
        if row is None:
            raise KeyError(sentence_id)
        return self.matrix[row]

    def has(self, sentence_id: str) -> bool:
        return sentence_id in self._row_of


def build_index(vectors: Mapping[str, np.ndarray], mode: str = MODE_EXACT,
                params: Optional[HnswParams] = None) -> VectorIndex:
    if not vectors:
        raise ValueError("cannot build an index with no entries")
    if mode not in (MODE_EXACT, MODE_APPROX):
        raise ValueError(f"unknown index mode {mode!r}")
    ids = sorted(vectors)
    dims = {np.asarray(vectors[i]).shape for i in ids}
    if len(dims) != 1 or len(next(iter(dims))) != 1:
        raise ConfigurationError(f"entries disagree on dimension: {sorted(dims)}")
    matrix = np.stack([np.asarray(vectors[i], dtype=np.float32) for i in ids])
    graph = None
    if mode == MODE_APPROX:
        graph = build_graph(matrix.astype(np.float64), params or HnswParams())
    return VectorIndex(ids=ids, matrix=matrix, mode=mode, graph=graph)


def knn(index: VectorIndex, query: np.ndarray, k: int,
        ef_search: int = DEFAULT_EF_SEARCH) -> List[Neighbor]:
    """The k nearest entries by cosine distance, ties by sentence id.

    Exact mode is a full scan; approximate mode is best effort over the
    graph's candidate set with the same tie rule.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query, dtype=np.float64).reshape(-1)
    if q.shape[0] != index.dim:
        raise ConfigurationError(
            f"query dim {q.shape[0]} does not match index dim {index.dim}")
    if index.mode == MODE_EXACT:
        dists = kernels.dense_distances(index._v64, q)
        order = np.lexsort((np.arange(len(dists)), dists))[:k]
        return [Neighbor(index.ids[i], float(dists[i])) for i in order]
    dists, nodes = index.graph.search(index._v64, q, max(ef_search, k))
    return [Neighbor(index.ids[int(i)], float(d))
            for d, i in zip(dists[:k], nodes[:k])]


def _write_graph(fh, graph: HnswGraph, n: int) -> None:
    fh.write(struct.pack("<IIiI", graph.params.M, graph.params.ef_construction,
                         graph.entry, graph.max_level))
    fh.write(graph.levels.astype("<i4").tobytes())
    for layer in range(graph.max_level + 1):
        adj = graph.adjacency[layer]
        deg = graph.degrees[layer]
        fh.write(struct.pack("<I", adj.shape[1]))
        fh.write(deg.astype("<i4").tobytes())
        fh.write(adj.astype("<i4").tobytes())


def save_index(index: VectorIndex, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        mode_byte = 0 if index.mode == MODE_EXACT else 1
        fh.write(struct.pack("<HIB", FORMAT_VERSION, index.dim, mode_byte))
        fh.write(struct.pack("<I", len(index.ids)))
        for i, sid in enumerate(index.ids):
            raw = sid.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(index.matrix[i].astype("<f4").tobytes())
        if index.mode == MODE_APPROX:
            _write_graph(fh, index.graph, len(index.ids))


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise IndexFormatError("index file is truncated")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _read_graph(r: _Reader, n: int) -> HnswGraph:
    m, ef_c, entry, max_level = r.unpack("<IIiI")
    levels = np.frombuffer(r.take(4 * n), dtype="<i4").copy()
    adjacency = []
    degrees = []
    for _ in range(max_level + 1):
        (max_deg,) = r.unpack("<I")
        deg = np.frombuffer(r.take(4 * n), dtype="<i4").copy()
        adj = np.frombuffer(r.take(4 * n * max_deg), dtype="<i4").reshape(n, max_deg).copy()
        adjacency.append(adj)
        degrees.append(deg)
    return HnswGraph(params=HnswParams(M=int(m), ef_construction=int(ef_c)),
                     levels=levels, entry=int(entry), max_level=int(max_level),
                     adjacency=adjacency, degrees=degrees)


def load_index(path: str) -> VectorIndex:
    with open(path, "rb") as fh:
        data = fh.read()
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise IndexFormatError("not an index file (bad magic bytes)")
    version, dim, mode_byte = r.unpack("<HIB")
    if version != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported index format version {version}")
    if mode_byte not in (0, 1):
        raise IndexFormatError(f"unknown index mode byte {mode_byte}")
    (count,) = r.unpack("<I")
    ids: List[str] = []
    rows = np.empty((count, dim), dtype=np.float32)
    for i in range(count):
        (id_len,) = r.unpack("<H")
        ids.append(r.take(id_len).decode("utf-8"))
        rows[i] = np.frombuffer(r.take(4 * dim), dtype="<f4")
    mode = MODE_EXACT if mode_byte == 0 else MODE_APPROX
    graph = _read_graph(r, count) if mode == MODE_APPROX else None
    if r.pos != len(data):
        raise IndexFormatError("trailing bytes after index payload")
    return VectorIndex(ids=ids, matrix=rows, mode=mode, graph=graph)
