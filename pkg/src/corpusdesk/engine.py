"""Wires corpus, provider, index, clustering, and notebook into one engine."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import ServiceConfig
from .embed import EmbeddingInput, LocalHashProvider, RemoteConfig, RemoteProvider
from .errors import ConfigurationError
from .highlight import annotations_to_json
from .index import VectorIndex, build_index, load_index, save_index
from .ingest import parse_corpus, source_files_for
from .hnsw import HnswParams
from .model import Document, EngineConfig, SentenceRecord
from .notebook import NotebookStore
from .pdc import cluster_titles, extract_title_occurrences, pdc_to_json
from .retrieve import (CursorContext, RetrievalResult, rerank,
                       sentence_context, spatial_retrieve)
from .store import CorpusStore


def embed_records(records: Sequence[SentenceRecord], provider) -> Dict[str, np.ndarray]:
    """Embed (deepest section title, text) for every record, keyed by id."""
    inputs = [EmbeddingInput(section_title=r.section_path[-1], text=r.text)
              for r in records]
    vectors = provider.embed_batch(inputs)
    return {r.sentence_id: v for r, v in zip(records, vectors)}


def make_provider(config: ServiceConfig):
    if config.provider == "local":
        return LocalHashProvider(dim=config.engine.embedding_dim)
    if config.provider == "remote":
        if not config.remote_base_url or not config.remote_model or config.remote_dim < 8:
            raise ConfigurationError(
                "remote provider needs remote.base_url, remote.model, and remote.dim")
        return RemoteProvider(RemoteConfig(
            base_url=config.remote_base_url, model=config.remote_model,
            dim=config.remote_dim, api_key_env=config.remote_api_key_env))
    raise ConfigurationError(f"unknown provider {config.provider!r}")


class Engine:
    """One corpus + one index + one provider, ready to answer queries."""

    def __init__(self, docs: Sequence[Document], provider, vector_index: VectorIndex,
                 engine_config: Optional[EngineConfig] = None,
                 notebook: Optional[NotebookStore] = None) -> None:
        self.docs = list(docs)
        self.store = CorpusStore(self.docs)
        self.provider = provider
        self.index = vector_index
        self.config = engine_config or EngineConfig()
        self.notebook = notebook or NotebookStore()
        self._pdc_json: Optional[dict] = None

    # -- retrieval ---------------------------------------------------------

    def retrieve(self, ctx: CursorContext, k: Optional[int] = None) -> RetrievalResult:
        return spatial_retrieve(ctx, self.index, self.provider, self.store,
                                k=k or self.config.k_results)

    def rerank(self, result: RetrievalResult, anchor_row: int) -> RetrievalResult:
        return rerank(result, anchor_row, self.index)

    def annotations(self, result: RetrievalResult, mode: str) -> dict:
        return annotations_to_json(result, mode, n_colors=self.config.n_colors)

    def tooltip(self, sentence_id: str):
        return sentence_context(sentence_id, self.store)

    # -- clustering --------------------------------------------------------

    def pdc_json(self) -> dict:
        if self._pdc_json is None:
            occ = extract_title_occurrences(self.docs, self.config.n_titles_clustered)
            result = cluster_titles(occ, alpha=self.config.pdc_alpha,
                                    cut=self.config.pdc_cut)
            self._pdc_json = pdc_to_json(result)
        return self._pdc_json

    # -- serialization helpers ----------------------------------------------

    def result_to_json(self, result: RetrievalResult) -> List[dict]:
        def sent(rec: Optional[SentenceRecord]) -> Optional[dict]:
            if rec is None:
                return None
            return {"sentence_id": rec.sentence_id, "text": rec.text,
                    "doc_id": rec.doc_id, "section_path": list(rec.section_path)}

        return [{"match": sent(r.match), "next": sent(r.next),
                 "display": sent(r.display_sentence), "distance": r.distance}
                for r in result.rows]


def build_engine(config: ServiceConfig) -> Engine:
    """Ingest, embed, and index per config; reuses a saved index when its
    path exists."""
    if not config.corpus_paths:
        raise ConfigurationError(
            "config lists no corpus paths; add corpus = [\"...\"] to the config file")
    docs = parse_corpus(source_files_for(config.corpus_paths))
    provider = make_provider(config)
    store = CorpusStore(docs)

    vector_index: Optional[VectorIndex] = None
    if config.index_path and Path(config.index_path).exists():
        vector_index = load_index(config.index_path)
        if vector_index.dim != provider.dim:
            raise ConfigurationError(
                f"index at {config.index_path} has dim {vector_index.dim}, "
                f"provider produces {provider.dim}")
        stale = [sid for sid in vector_index.ids if not store.has_sentence(sid)]
        if stale:
            raise ConfigurationError(
                f"index at {config.index_path} references {len(stale)} sentence ids "
                f"missing from the corpus (e.g. {stale[0]!r}); delete the index "
                "file to rebuild it from the current corpus")
    if vector_index is None:
        vectors = embed_records(list(store.records()), provider)
        vector_index = build_index(vectors, mode=config.index_mode,
                                   params=HnswParams())
        if config.index_path:
            save_index(vector_index, config.index_path)

    notebook = NotebookStore(journal_path=config.journal_path)
    return Engine(docs=docs, provider=provider, vector_index=vector_index,
                  engine_config=config.engine, notebook=notebook)
