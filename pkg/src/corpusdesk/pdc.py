"""Ordered distribution over section-title clusters.

Top-level section titles are clustered on a blend of diction overlap and
relative position: d(a, b) = alpha * (1 - Jaccard(tokens)) +
(1 - alpha) * |position difference|, agglomerated with average linkage while
the minimum merge distance stays within the cut. Clusters are then ordered
by mean position so the list reads like a typical paper skeleton, each
cluster is named by its most frequent member title, tokens common to every
member are underlined in the name, and tokens already seen higher in a
cluster's member list are flagged for grey-out rendering.

Titles are tokenized to lowercase alphanumeric runs with stopwords retained
(titles are short; dropping connectives would distort overlap) and no
stemming, so e.g. "Related Work" and "Related Works" only merge when their
positions nearly coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import kernels
from .model import Document
from .textutil import token_set, tokenize


@dataclass(frozen=True)
class TitleOccurrence:
    title: str
    doc_id: str
    position: float          # top-level index / max(1, count - 1), in [0, 1]
    tokens: frozenset


@dataclass(frozen=True)
class TitleCluster:
    members: Tuple[TitleOccurrence, ...]   # in within-cluster display order
    name: str
    count: int
    mean_position: float
    underline_tokens: frozenset
    # grey_flags[i][t]: token t of member i's title token list already
    # appeared in some member before i
    grey_flags: Tuple[Tuple[bool, ...], ...]


@dataclass(frozen=True)
class PdcResult:
    clusters: Tuple[TitleCluster, ...]
    total_titles: int


def extract_title_occurrences(corpus: Sequence[Document], n_max: int) -> List[TitleOccurrence]:
    """Top-level titles in corpus order, truncated to the first `n_max`.

    Positions are computed per paper before truncation, so a cut-off paper's
    surviving titles keep their true relative positions.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    occurrences: List[TitleOccurrence] = []
    for doc in corpus:
        titles = [sec.title for sec in doc.sections]
        denom = max(1, len(titles) - 1)
        for i, title in enumerate(titles):
            occurrences.append(TitleOccurrence(
                title=title, doc_id=doc.doc_id,
                position=i / denom, tokens=token_set(title)))
    return occurrences[:n_max]


def jaccard(a: frozenset, b: frozenset) -> float:
    union = len(a | b)
    if union == 0:
        return 1.0
    return len(a & b) / union


def cluster_name(titles: Sequence[str]) -> str:
    """Most frequent exact title, ties to the lexicographically smallest."""
    if not titles:
        raise ValueError("cannot name an empty cluster")
    counts: Dict[str, int] = {}
    for t in titles:
        counts[t] = counts.get(t, 0) + 1
    return min(counts, key=lambda t: (-counts[t], t))


def order_within_cluster(members: Sequence[TitleOccurrence], name: str
                         ) -> List[TitleOccurrence]:
    """Greedy diction chain: start at the first occurrence of the name title,
    then repeatedly append the remaining member most token-similar to the
    previous one (ties by title, then doc id, then original order)."""
    start = None
    for i, m in enumerate(members):
        if m.title == name:
            start = i
            break
    if start is None:
        raise ValueError(f"name {name!r} is not a member title")
    remaining = list(enumerate(members))
    ordered = [remaining.pop(start)[1]]
    while remaining:
        prev = ordered[-1]
        best = min(remaining,
                   key=lambda im: (-jaccard(im[1].tokens, prev.tokens),
                                   im[1].title, im[1].doc_id, im[0]))
        remaining.remove(best)
        ordered.append(best[1])
    return ordered


def _pairwise_distances(occ: Sequence[TitleOccurrence], alpha: float) -> np.ndarray:
    vocab = sorted({t for o in occ for t in o.tokens})
    token_id = {t: i for i, t in enumerate(vocab)}
    offsets = np.zeros(len(occ) + 1, dtype=np.int64)
    flat_parts = []
    for i, o in enumerate(occ):
        ids = sorted(token_id[t] for t in o.tokens)
        flat_parts.extend(ids)
        offsets[i + 1] = offsets[i] + len(ids)
    flat = np.asarray(flat_parts, dtype=np.int32)
    positions = np.asarray([o.position for o in occ], dtype=np.float64)
    condensed = kernels.pdc_pairwise(flat, offsets, positions, alpha)
    n = len(occ)
    full = np.full((n, n), np.inf, dtype=np.float64)
    idx = 0
    for i in range(n):
        row = condensed[idx:idx + n - 1 - i]
        full[i, i + 1:] = row
        full[i + 1:, i] = row
        idx += n - 1 - i
    return full


def _finish_cluster(member_indices: List[int], occ: Sequence[TitleOccurrence]
                    ) -> TitleCluster:
    members = [occ[i] for i in sorted(member_indices)]
    name = cluster_name([m.title for m in members])
    ordered = order_within_cluster(members, name)
    underline = frozenset.intersection(*(m.tokens for m in ordered))
    grey_rows: List[Tuple[bool, ...]] = []
    seen: set = set()
    for m in ordered:
        title_tokens = tokenize(m.title)
        grey_rows.append(tuple(t in seen for t in title_tokens))
        seen.update(title_tokens)
    mean_position = float(np.mean([m.position for m in ordered]))
    return TitleCluster(members=tuple(ordered), name=name, count=len(ordered),
                        mean_position=mean_position,
                        underline_tokens=underline,
                        grey_flags=tuple(grey_rows))


def cluster_titles(occ: Sequence[TitleOccurrence], alpha: float = 0.7,
                   cut: float = 0.35) -> PdcResult:
    """Average-linkage agglomeration under the blended distance, merging
    while the minimum average-link distance is within `cut`."""
    if not occ:
        raise ValueError("no title occurrences to cluster")
    if not (0.0 <= alpha <= 1.0 and 0.0 <= cut <= 1.0):
        raise ValueError("alpha and cut must lie in [0, 1]")
    n = len(occ)
    members: Dict[int, List[int]] = {i: [i] for i in range(n)}
    names: Dict[int, str] = {i: occ[i].title for i in range(n)}
    sizes = np.ones(n, dtype=np.float64)
    if n > 1:
        # inactive rows/columns are pinned to inf, so the matrix min is
        # always the closest active pair
        dist = _pairwise_distances(occ, alpha)
        remaining = n
        while remaining > 1:
            dmin = dist.min()
            if dmin > cut or not np.isfinite(dmin):
                break
            best = None
            best_key = None
            for a, b in np.argwhere(dist == dmin):
                if a >= b:
                    continue
                na, nb = names[int(a)], names[int(b)]
                key = (min(na, nb), max(na, nb), int(a), int(b))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (int(a), int(b))
            i, j = best
            si, sj = sizes[i], sizes[j]
            merged_row = (si * dist[i] + sj * dist[j]) / (si + sj)
            dist[i, :] = merged_row
            dist[:, i] = merged_row
            dist[i, i] = np.inf
            dist[j, :] = np.inf
            dist[:, j] = np.inf
            sizes[i] = si + sj
            members[i] = members[i] + members[j]
            names[i] = cluster_name([occ[m].title for m in members[i]])
            del members[j], names[j]
            remaining -= 1
    clusters = [_finish_cluster(m, occ) for m in members.values()]
    clusters.sort(key=lambda c: (c.mean_position, -c.count, c.name))
    return PdcResult(clusters=tuple(clusters), total_titles=n)


def pdc_to_json(result: PdcResult) -> dict:
    clusters = []
    for c in result.clusters:
        member_objs = []
        for i, m in enumerate(c.members):
            grey_indices = [t for t, flag in enumerate(c.grey_flags[i]) if flag]
            member_objs.append({"title": m.title, "doc_id": m.doc_id,
                                "grey_token_indices": grey_indices})
        clusters.append({
            "name": c.name,
            "count": c.count,
            "underline_tokens": sorted(c.underline_tokens),
            "members": member_objs,
        })
    return {"clusters": clusters, "total_titles": result.total_titles}
