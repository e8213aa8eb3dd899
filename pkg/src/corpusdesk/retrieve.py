"""Analogous spatial retrieval.

A query is built from the writer's cursor context (containing section title
plus the focused paragraph's text), embedded exactly like the corpus was,
and matched by cosine kNN. Each surviving row pairs the displayed sentence
with its successor; an offset of o swaps each match for its o-th successor,
dropping matches whose section ends first. Extra candidates (twice the
requested count) are fetched up front so offset filtering and duplicate
suppression rarely shrink the final page below k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .embed import EmbeddingInput, compose_embedding_text, cosine_distance
from .errors import ConfigurationError
from .index import VectorIndex, knn
from .model import CitationRef, SentenceRecord
from .store import CorpusStore

CANDIDATE_RESERVE_FACTOR = 2


@dataclass(frozen=True)
class CursorContext:
    section_title: str
    paragraph_text: str
    offset: int = 0


@dataclass(frozen=True)
class RetrievedRow:
    match: SentenceRecord
    next: Optional[SentenceRecord]
    distance: float
    display_sentence: SentenceRecord


@dataclass(frozen=True)
class RetrievalResult:
    rows: Tuple[RetrievedRow, ...]
    query_echo: CursorContext


@dataclass(frozen=True)
class TooltipContext:
    paper_title: str
    paper_url: Optional[str]
    section_path: Tuple[str, ...]
    prev_text: Optional[str]
    next_text: Optional[str]
    citations: Tuple[CitationRef, ...]


def apply_offset(match: SentenceRecord, offset: int,
                 store: CorpusStore) -> Optional[SentenceRecord]:
    """The sentence `offset` positions after the match in its top-level
    section; None when the section ends first (callers drop the row)."""
    return store.successor(match, offset)


def spatial_retrieve(ctx: CursorContext, index: VectorIndex, provider,
                     store: CorpusStore, k: int = 25,
                     ef_search: int = 64) -> RetrievalResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    if ctx.offset < 0:
        raise ValueError("offset must be >= 0")
    if not ctx.section_title.strip():
        raise ValueError("cursor context needs a section title")
    if not ctx.paragraph_text.strip():
        raise ValueError("nothing to query: focused paragraph is empty")
    if provider.dim != index.dim:
        raise ConfigurationError(
            f"provider dim {provider.dim} does not match index dim {index.dim}")

    composed = compose_embedding_text(
        EmbeddingInput(section_title=ctx.section_title, text=ctx.paragraph_text))
    query = provider.embed_text(composed)
    budget = k + CANDIDATE_RESERVE_FACTOR * k
    candidates = knn(index, query, budget, ef_search=max(ef_search, budget))

    rows: List[RetrievedRow] = []
    seen_texts: set = set()
    for cand in candidates:
        if len(rows) >= k:
            break
        match = store.sentence(cand.sentence_id)
        display = apply_offset(match, ctx.offset, store)
        if display is None:
            continue
        if display.text in seen_texts:
            continue
        seen_texts.add(display.text)
        rows.append(RetrievedRow(
            match=match,
            next=store.successor(display, 1),
            distance=cand.distance,
            display_sentence=display,
        ))
    return RetrievalResult(rows=tuple(rows), query_echo=ctx)


def rerank(result: RetrievalResult, anchor_row: int,
           index: VectorIndex) -> RetrievalResult:
    """Move the anchor row to the top and sort the rest by ascending cosine
    distance between display-sentence vectors and the anchor's, ties by
    sentence id. The row set is unchanged (a permutation); grey-out
    annotations must be recomputed for the new order."""
    rows = result.rows
    if not (0 <= anchor_row < len(rows)):
        raise IndexError(f"anchor row {anchor_row} out of range 0..{len(rows) - 1}")
    anchor = rows[anchor_row]
    anchor_vec = index.vector(anchor.display_sentence.sentence_id)
    rest = [r for i, r in enumerate(rows) if i != anchor_row]
    rest.sort(key=lambda r: (
        cosine_distance(index.vector(r.display_sentence.sentence_id), anchor_vec),
        r.display_sentence.sentence_id))
    return RetrievalResult(rows=(anchor, *rest), query_echo=result.query_echo)


def sentence_context(sentence_id: str, store: CorpusStore) -> TooltipContext:
    """Provenance shown on hover: paper, section path, and the sentences
    immediately before and after."""
    rec = store.sentence(sentence_id)
    doc = store.document(rec.doc_id)
    return TooltipContext(
        paper_title=doc.title,
        paper_url=doc.url,
        section_path=tuple(rec.section_path),
        prev_text=rec.prev_text,
        next_text=rec.next_text,
        citations=tuple(rec.citations),
    )
