"""Indexed view over an ingested corpus: id lookup and successor walking."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import NotFoundError
from .model import Document, Section, SentenceRecord


def _flatten_section(sec: Section) -> List[SentenceRecord]:
    out = list(sec.sentences)
    for sub in sec.subsections:
        out.extend(_flatten_section(sub))
    return out


class CorpusStore:
    """Immutable lookup structure over a list of Documents.

    Successor walking ("what they wrote next", offset retrieval) runs over
    the sentences of a top-level section flattened in document order, so it
    crosses subsection boundaries but never section boundaries.
    """

    def __init__(self, docs: Sequence[Document]) -> None:
        self.docs: Tuple[Document, ...] = tuple(docs)
        self._by_doc: Dict[str, Document] = {d.doc_id: d for d in self.docs}
        self._sentences: Dict[str, SentenceRecord] = {}
        # sentence_id -> (top-level run, position within it)
        self._runs: List[List[SentenceRecord]] = []
        self._run_of: Dict[str, Tuple[int, int]] = {}
        for doc in self.docs:
            for sec in doc.sections:
                run = _flatten_section(sec)
                run_idx = len(self._runs)
                self._runs.append(run)
                for pos, rec in enumerate(run):
                    self._sentences[rec.sentence_id] = rec
                    self._run_of[rec.sentence_id] = (run_idx, pos)

    def __len__(self) -> int:
        return len(self._sentences)

    def records(self) -> Iterable[SentenceRecord]:
        for run in self._runs:
            yield from run

    def document(self, doc_id: str) -> Document:
        doc = self._by_doc.get(doc_id)
        if doc is None:
            raise NotFoundError(f"unknown document {doc_id!r}")
        return doc

    def sentence(self, sentence_id: str) -> SentenceRecord:
        rec = self._sentences.get(sentence_id)
        if rec is None:
            raise NotFoundError(f"unknown sentence {sentence_id!r}")
        return rec

    def has_sentence(self, sentence_id: str) -> bool:
        return sentence_id in self._sentences

    def successor(self, rec: SentenceRecord, offset: int) -> Optional[SentenceRecord]:
        """The sentence `offset` positions after `rec` in its top-level
        section, or None if the section ends first."""
        if offset < 0:
            raise ValueError("offset must be >= 0")
        run_idx, pos = self._run_of[rec.sentence_id]
        run = self._runs[run_idx]
        if pos + offset >= len(run):
            return None
        return run[pos + offset]
