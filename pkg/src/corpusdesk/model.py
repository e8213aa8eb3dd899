"""Shared domain types for corpus documents, sentences, and engine configuration.

Everything here is immutable value data; construction happens in `ingest`
and the types are safe to share across threads afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class CitationRef:
    marker: str
    authors: str = ""
    cited_title: str = ""


@dataclass(frozen=True)
class SentenceRecord:
    sentence_id: str
    text: str
    doc_id: str
    section_path: Tuple[str, ...]
    index_in_section: int
    prev_text: Optional[str] = None
    next_text: Optional[str] = None
    citations: Tuple[CitationRef, ...] = ()


@dataclass(frozen=True)
class Section:
    title: str
    level: int
    sentences: Tuple[SentenceRecord, ...] = ()
    subsections: Tuple["Section", ...] = ()


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    venue: str
    year: int
    url: Optional[str] = None
    sections: Tuple[Section, ...] = ()
    # marker -> (authors, cited_title); carried so round-tripping a document
    # through the interchange format keeps citation resolution intact
    bibliography: Dict[str, Tuple[str, str]] = field(default_factory=dict)


@dataclass(frozen=True)
class EngineConfig:
    k_results: int = 25
    n_titles_clustered: int = 1000
    n_colors: int = 20
    pdc_alpha: float = 0.7
    pdc_cut: float = 0.35
    embedding_dim: int = 256

    def __post_init__(self) -> None:
        if self.k_results < 1:
            raise ValueError("k_results must be >= 1")
        if self.n_colors < 1:
            raise ValueError("n_colors must be >= 1")
        if not (0.0 <= self.pdc_alpha <= 1.0):
            raise ValueError("pdc_alpha must be in [0, 1]")
        if not (0.0 <= self.pdc_cut <= 1.0):
            raise ValueError("pdc_cut must be in [0, 1]")
        if self.embedding_dim < 8:
            raise ValueError("embedding_dim must be >= 8")


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    detail: str = ""


def iter_sections(doc: Document):
    """Yield every section of `doc` in document (pre-) order."""
    stack = list(reversed(doc.sections))
    while stack:
        sec = stack.pop()
        yield sec
        stack.extend(reversed(sec.subsections))


def validate_document(doc: Document) -> list[Violation]:
    """Check every structural invariant of a Document.

    Violations are data, not exceptions: an empty list means the document
    is well formed.
    """
    violations: list[Violation] = []

    if not doc.doc_id:
        violations.append(Violation("Document.doc_id", "non-empty"))
    if not doc.sections:
        violations.append(Violation("Document.sections", "non-empty",
                                    f"document {doc.doc_id!r} has no sections"))

    seen_ids: set[str] = set()

    def walk(sec: Section, parent_level: int, path: Tuple[str, ...]) -> None:
        if not sec.title or sec.title != sec.title.strip():
            violations.append(Violation("Section.title", "non-empty, trimmed",
                                        f"title {sec.title!r}"))
        expected = parent_level + 1
        if sec.level != expected:
            violations.append(Violation(
                "Section.level", "level = parent level + 1",
                f"section {sec.title!r} has level {sec.level}, expected {expected}"))
        sec_path = path + (sec.title,)
        for i, sent in enumerate(sec.sentences):
            if not sent.text:
                violations.append(Violation("SentenceRecord.text", "non-empty",
                                            f"sentence {sent.sentence_id!r}"))
            if sent.sentence_id in seen_ids:
                violations.append(Violation("SentenceRecord.sentence_id", "unique",
                                            f"duplicate id {sent.sentence_id!r}"))
            seen_ids.add(sent.sentence_id)
            if sent.doc_id != doc.doc_id:
                violations.append(Violation("SentenceRecord.doc_id", "matches document",
                                            f"sentence {sent.sentence_id!r}"))
            if not sent.section_path:
                violations.append(Violation("SentenceRecord.section_path", "non-empty",
                                            f"sentence {sent.sentence_id!r}"))
            elif tuple(sent.section_path) != sec_path:
                violations.append(Violation(
                    "SentenceRecord.section_path", "matches containing sections",
                    f"sentence {sent.sentence_id!r}: {sent.section_path!r} != {sec_path!r}"))
            if sent.index_in_section != i:
                violations.append(Violation(
                    "SentenceRecord.index_in_section", "matches position",
                    f"sentence {sent.sentence_id!r} at {i} claims {sent.index_in_section}"))
            expected_prev = sec.sentences[i - 1].text if i > 0 else None
            if sent.prev_text != expected_prev:
                violations.append(Violation(
                    "SentenceRecord.prev_text", "equals text of sentence i-1 in the section",
                    f"sentence {sent.sentence_id!r}"))
            expected_next = sec.sentences[i + 1].text if i + 1 < len(sec.sentences) else None
            if sent.next_text != expected_next:
                violations.append(Violation(
                    "SentenceRecord.next_text", "equals text of sentence i+1 in the section",
                    f"sentence {sent.sentence_id!r}"))
            for cit in sent.citations:
                if cit.marker not in sent.text:
                    violations.append(Violation(
                        "CitationRef.marker", "substring of the owning sentence",
                        f"marker {cit.marker!r} not in sentence {sent.sentence_id!r}"))
        for sub in sec.subsections:
            walk(sub, sec.level, sec_path)

    for sec in doc.sections:
        walk(sec, 0, ())
    return violations


def validate_corpus(docs: list[Document]) -> list[Violation]:
    """Corpus-level checks (doc_id uniqueness) plus every per-document check."""
    violations: list[Violation] = []
    seen: set[str] = set()
    for doc in docs:
        if doc.doc_id in seen:
            violations.append(Violation("Document.doc_id", "unique within corpus",
                                        f"duplicate {doc.doc_id!r}"))
        seen.add(doc.doc_id)
        violations.extend(validate_document(doc))
    return violations
