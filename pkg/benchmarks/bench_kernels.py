"""Times the hot kernels on both implementations (numba vs pure numpy).

Run: python benchmarks/bench_kernels.py [--n 20000] [--dim 256] [--repeat 5]
Setting CORPUSDESK_NO_NUMBA=1 before launch removes the numba columns (the
fallback is then the only path, which is also what the engine would use).
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from corpusdesk import kernels
from corpusdesk.embed import EmbeddingInput, compose_embedding_text, local_embed
from corpusdesk.hnsw import HnswParams, build_graph
from corpusdesk.pdc import _pairwise_distances  # noqa: the benchmark mirrors its encoding
from corpusdesk.textutil import token_set

WORDS = ("system users study design tasks editor model writing corpus "
         "sentences sections titles participants results evaluation").split()


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_dense(n, dim, repeat):
    rng = np.random.default_rng(7)
    mat = rng.normal(size=(n, dim))
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    q = rng.normal(size=dim)
    q /= np.linalg.norm(q)

    rows = []
    for name, impl in [("numpy", kernels.dense_distances_numpy),
                       ("numba", kernels.dense_distances_numba)]:
        impl(mat, q)  # warm / compile
        rows.append((name, timeit(lambda: impl(mat, q), repeat)))
    return rows


def bench_search_layer(n, dim, repeat):
    rng = np.random.default_rng(11)
    mat = rng.normal(size=(n, dim))
    mat /= np.linalg.norm(mat, axis=1, keepdims=True)
    graph = build_graph(mat, HnswParams())
    q = rng.normal(size=dim)
    q /= np.linalg.norm(q)
    adj, deg = graph.adjacency[0], graph.degrees[0]

    rows = []
    for name, impl in [("numpy", kernels.search_layer_numpy),
                       ("numba", kernels.search_layer_numba)]:
        impl(mat, adj, deg, q, graph.entry, 64)
        rows.append((name, timeit(lambda: impl(mat, adj, deg, q, graph.entry, 64),
                                  repeat)))
    return rows


def bench_pdc_pairwise(n_titles, repeat):
    rng = random.Random(13)
    titles = [" ".join(rng.sample(WORDS, rng.randint(1, 3))) for _ in range(n_titles)]
    vocab = sorted({t for title in titles for t in token_set(title)})
    token_id = {t: i for i, t in enumerate(vocab)}
    offsets = np.zeros(n_titles + 1, dtype=np.int64)
    flat = []
    for i, title in enumerate(titles):
        ids = sorted(token_id[t] for t in token_set(title))
        flat.extend(ids)
        offsets[i + 1] = offsets[i] + len(ids)
    flat = np.asarray(flat, dtype=np.int32)
    positions = np.asarray([rng.random() for _ in range(n_titles)])

    rows = []
    for name, impl in [("numpy", kernels.pdc_pairwise_numpy),
                       ("numba", kernels.pdc_pairwise_numba)]:
        impl(flat, offsets, positions, 0.7)
        rows.append((name, timeit(lambda: impl(flat, offsets, positions, 0.7),
                                  repeat)))
    return rows


def report(label, rows):
    base = dict(rows)["numpy"]
    print(f"\n{label}")
    for name, secs in rows:
        speedup = base / secs if secs else float("inf")
        print(f"  {name:<6} {secs * 1e3:9.3f} ms   x{speedup:5.2f} vs numpy")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000, help="vectors for the scan")
    ap.add_argument("--dim", type=int, default=256)
    ap.add_argument("--graph-n", type=int, default=2000, help="nodes for graph search")
    ap.add_argument("--titles", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"numba path active: {kernels.NUMBA_ENABLED}")
    report(f"dense cosine scan ({args.n} x {args.dim})",
           bench_dense(args.n, args.dim, args.repeat))
    report(f"graph layer search ({args.graph_n} nodes, ef=64)",
           bench_search_layer(args.graph_n, args.dim, args.repeat))
    report(f"pairwise title distances ({args.titles} titles)",
           bench_pdc_pairwise(args.titles, args.repeat))


if __name__ == "__main__":
    main()
