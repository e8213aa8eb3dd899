"""corpusdesk: corpus-backed writing support engine.

Given a corpus of papers, computes an ordered distribution over
section-title clusters and retrieves contextually analogous sentences for a
writer's cursor position, with span annotations that surface recurring and
novel diction across the examples.
"""

from .embed import (EmbeddingInput, LocalHashProvider, RemoteConfig,
                    RemoteProvider, compose_embedding_text, cosine_distance,
                    local_embed)
from .engine import Engine, build_engine, embed_records
from .highlight import (ColorMap, GreyAnnotation, TokenSpan, build_color_map,
                        colorize, grey_out)
from .index import (Neighbor, VectorIndex, build_index, knn, load_index,
                    save_index)
from .ingest import (CorpusParseError, CorpusSourceFile, build_sentence_records,
                     document_to_markdown, parse_corpus, source_files_for)
from .model import (CitationRef, Document, EngineConfig, Section,
                    SentenceRecord, Violation, validate_corpus,
                    validate_document)
from .notebook import Bookmark, NotebookStore, UserNote
from .pdc import (PdcResult, TitleCluster, TitleOccurrence, cluster_name,
                  cluster_titles, extract_title_occurrences,
                  order_within_cluster, pdc_to_json)
from .retrieve import (CursorContext, RetrievalResult, RetrievedRow,
                       TooltipContext, apply_offset, rerank, sentence_context,
                       spatial_retrieve)
from .segment import DEFAULT_SEGMENTER, Segmenter, segment_paragraph
from .store import CorpusStore

__version__ = "0.1.0"
