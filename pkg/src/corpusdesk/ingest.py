"""Corpus ingestion: interchange-format parsing and sentence record assembly.

Two source formats are supported:

* markdown-like: UTF-8 text, headings ``#{1,4} Title``, blank-line-separated
  paragraphs, an optional leading ``%% key: value`` metadata block (title,
  venue, year, url) and an optional trailing ``%% bibliography`` block with
  ``marker<TAB>authors<TAB>title`` lines.
* jsonl: one document object per line using the corpus-model field names.

Ingestion is deterministic: identical bytes yield identical documents and
sentence ids (``doc_id#sec_idx#sent_idx``, sections numbered in document
order).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple

from .model import CitationRef, Document, Section, SentenceRecord
from .segment import DEFAULT_SEGMENTER, Segmenter

_HEADING = re.compile(r"^(#{1,6})\s+(.*\S)\s*$")
_META = re.compile(r"^%%\s*(\w+)\s*:\s*(.*\S)\s*$")
_NUMERIC_CITATION = re.compile(r"\[\d+(?:,\s*\d+)*\]")
_AUTHOR_YEAR_CITATION = re.compile(r"\(([A-Z][^(),]*),\s*(\d{4})\)")


class CorpusParseError(Exception):
    """Recoverable parse failure; names the offending file and line."""

    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
        self.message = message


@dataclass(frozen=True)
class CorpusSourceFile:
    path: str
    format: str = "markdown-like"  # or "jsonl"


@dataclass
class _RawSection:
    title: str
    level: int
    sentences: List[str] = field(default_factory=list)
    children: List["_RawSection"] = field(default_factory=list)


def extract_citations(text: str, bibliography: Dict[str, Tuple[str, str]]) -> Tuple[CitationRef, ...]:
    """Find citation markers in `text` and resolve them against a bibliography."""
    found: List[Tuple[int, str]] = []
    for m in _NUMERIC_CITATION.finditer(text):
        found.append((m.start(), m.group(0)))
    for m in _AUTHOR_YEAR_CITATION.finditer(text):
        found.append((m.start(), m.group(0)))
    found.sort()
    refs = []
    for _, marker in found:
        authors, title = bibliography.get(marker, ("", ""))
        refs.append(CitationRef(marker=marker, authors=authors, cited_title=title))
    return tuple(refs)


def _build_section(raw: _RawSection, doc_id: str, path: Tuple[str, ...],
                   bibliography: Dict[str, Tuple[str, str]], counter: List[int]) -> Section:
    sec_idx = counter[0]
    counter[0] += 1
    sec_path = path + (raw.title,)
    records = []
    for i, text in enumerate(raw.sentences):
        records.append(SentenceRecord(
            sentence_id=f"{doc_id}#{sec_idx}#{i}",
            text=text,
            doc_id=doc_id,
            section_path=sec_path,
            index_in_section=i,
            prev_text=raw.sentences[i - 1] if i > 0 else None,
            next_text=raw.sentences[i + 1] if i + 1 < len(raw.sentences) else None,
            citations=extract_citations(text, bibliography),
        ))
    children = tuple(_build_section(c, doc_id, sec_path, bibliography, counter)
                     for c in raw.children)
    return Section(title=raw.title, level=raw.level,
                   sentences=tuple(records), subsections=children)


def _assemble_document(doc_id: str, meta: Dict[str, str], roots: List[_RawSection],
                       bibliography: Dict[str, Tuple[str, str]]) -> Document:
    counter = [0]
    sections = tuple(_build_section(r, doc_id, (), bibliography, counter) for r in roots)
    year_text = meta.get("year", "0")
    try:
        year = int(year_text)
    except ValueError:
        year = 0
    return Document(
        doc_id=doc_id,
        title=meta.get("title", doc_id),
        venue=meta.get("venue", ""),
        year=year,
        url=meta.get("url"),
        sections=sections,
        bibliography=dict(bibliography),
    )


def parse_markdown_text(text: str, doc_id: str, path: str = "<string>",
                        segmenter: Segmenter = DEFAULT_SEGMENTER) -> Document:
    meta: Dict[str, str] = {}
    bibliography: Dict[str, Tuple[str, str]] = {}
    roots: List[_RawSection] = []
    stack: List[_RawSection] = []
    paragraph: List[str] = []
    para_line = 0
    in_bibliography = False

    def flush_paragraph() -> None:
        if not paragraph:
            return
        if not stack:
            raise CorpusParseError(path, para_line, "content before first section heading")
        joined = " ".join(paragraph)
        stack[-1].sentences.extend(segmenter.segment(joined))
        paragraph.clear()

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if in_bibliography:
            if not stripped:
                continue
            parts = stripped.split("\t")
            if len(parts) != 3:
                raise CorpusParseError(path, lineno,
                                       "bibliography line must be marker<TAB>authors<TAB>title")
            bibliography[parts[0].strip()] = (parts[1].strip(), parts[2].strip())
            continue
        if stripped.lower() == "%% bibliography":
            flush_paragraph()
            in_bibliography = True
            continue
        m = _META.match(stripped)
        if m and not stack:
            meta[m.group(1).lower()] = m.group(2)
            continue
        m = _HEADING.match(line)
        if m:
            flush_paragraph()
            level = len(m.group(1))
            if level > 4:
                raise CorpusParseError(path, lineno, f"heading level {level} exceeds 4")
            parent_level = stack[-1].level if stack else 0
            while stack and stack[-1].level >= level:
                stack.pop()
                parent_level = stack[-1].level if stack else 0
            if level > parent_level + 1:
                raise CorpusParseError(
                    path, lineno,
                    f"heading level jumps from {parent_level} to {level}")
            sec = _RawSection(title=m.group(2).strip(), level=level)
            if stack:
                stack[-1].children.append(sec)
            else:
                roots.append(sec)
            stack.append(sec)
            continue
        if not stripped:
            flush_paragraph()
            continue
        if not paragraph:
            para_line = lineno
        paragraph.append(stripped)

    flush_paragraph()
    if not roots:
        raise CorpusParseError(path, 1, "no sections")
    return _assemble_document(doc_id, meta, roots, bibliography)


def _doc_from_json(obj: dict, path: str, lineno: int) -> Document:
    if "doc_id" not in obj or "sections" not in obj:
        raise CorpusParseError(path, lineno, "document object needs doc_id and sections")

    def raw_section(node: dict, level: int) -> _RawSection:
        sec = _RawSection(title=str(node.get("title", "")).strip(), level=level)
        for s in node.get("sentences", ()):
            text = s["text"] if isinstance(s, dict) else str(s)
            sec.sentences.append(text)
        for child in node.get("subsections", ()):
            sec.children.append(raw_section(child, level + 1))
        return sec

    roots = [raw_section(node, 1) for node in obj["sections"]]
    if not roots:
        raise CorpusParseError(path, lineno, "no sections")
    bibliography = {k: (v[0], v[1]) for k, v in obj.get("bibliography", {}).items()}
    meta = {
        "title": str(obj.get("title", obj["doc_id"])),
        "venue": str(obj.get("venue", "")),
        "year": str(obj.get("year", 0)),
    }
    if obj.get("url"):
        meta["url"] = str(obj["url"])
    return _assemble_document(str(obj["doc_id"]), meta, roots, bibliography)


def parse_corpus(files: List[CorpusSourceFile],
                 segmenter: Segmenter = DEFAULT_SEGMENTER) -> List[Document]:
    """Parse source files into Documents, one per markdown file and one per
    jsonl line, preserving input order."""
    docs: List[Document] = []
    for f in files:
        p = Path(f.path)
        try:
            text = p.read_text("utf-8")
        except OSError as exc:
            raise IOError(f"cannot read corpus file {f.path}: {exc}") from exc
        if f.format == "jsonl":
            for lineno, line in enumerate(text.splitlines(), start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusParseError(f.path, lineno, f"bad JSON: {exc}") from exc
                docs.append(_doc_from_json(obj, f.path, lineno))
        elif f.format == "markdown-like":
            docs.append(parse_markdown_text(text, doc_id=p.stem, path=f.path,
                                            segmenter=segmenter))
        else:
            raise ValueError(f"unknown corpus format {f.format!r}")
    return docs


def source_files_for(paths: List[str]) -> List[CorpusSourceFile]:
    """Map file paths to CorpusSourceFiles, inferring format from suffix."""
    out = []
    for p in paths:
        fmt = "jsonl" if p.endswith((".jsonl", ".ndjson", ".json")) else "markdown-like"
        out.append(CorpusSourceFile(path=p, format=fmt))
    return out


def build_sentence_records(doc: Document) -> List[SentenceRecord]:
    """Recompute the flat, fully-annotated sentence list for a document.

    For a document produced by `parse_corpus` this returns exactly the
    records already stored in its sections (the computation is
    deterministic); it also repairs documents loaded with partial metadata.
    """
    counter = [0]

    def rebuild(sec: Section) -> _RawSection:
        raw = _RawSection(title=sec.title, level=sec.level,
                          sentences=[s.text for s in sec.sentences])
        raw.children = [rebuild(sub) for sub in sec.subsections]
        return raw

    roots = [rebuild(sec) for sec in doc.sections]
    records: List[SentenceRecord] = []

    def collect(sec: Section) -> None:
        records.extend(sec.sentences)
        for sub in sec.subsections:
            collect(sub)

    rebuilt = tuple(_build_section(r, doc.doc_id, (), dict(doc.bibliography), counter)
                    for r in roots)
    for sec in rebuilt:
        collect(sec)
    return records


def document_to_markdown(doc: Document) -> str:
    """Serialize a document back to the markdown-like interchange format.

    Re-parsing the output yields a structurally equal document.
    """
    lines: List[str] = []
    lines.append(f"%% title: {doc.title}")
    if doc.venue:
        lines.append(f"%% venue: {doc.venue}")
    lines.append(f"%% year: {doc.year}")
    if doc.url:
        lines.append(f"%% url: {doc.url}")
    lines.append("")

    def emit(sec: Section) -> None:
        lines.append("#" * sec.level + " " + sec.title)
        lines.append("")
        if sec.sentences:
            # one sentence per paragraph keeps re-segmentation exact
            for s in sec.sentences:
                lines.append(s.text)
                lines.append("")
        for sub in sec.subsections:
            emit(sub)

    for sec in doc.sections:
        emit(sec)
    if doc.bibliography:
        lines.append("%% bibliography")
        for marker in sorted(doc.bibliography):
            authors, title = doc.bibliography[marker]
            lines.append(f"{marker}\t{authors}\t{title}")
        lines.append("")
    return "\n".join(lines)


def document_to_json(doc: Document) -> dict:
    """JSON-serializable form of a document using the model field names."""

    def sec_obj(sec: Section) -> dict:
        return {
            "title": sec.title,
            "level": sec.level,
            "sentences": [
                {
                    "sentence_id": s.sentence_id,
                    "text": s.text,
                    "doc_id": s.doc_id,
                    "section_path": list(s.section_path),
                    "index_in_section": s.index_in_section,
                    "prev_text": s.prev_text,
                    "next_text": s.next_text,
                    "citations": [
                        {"marker": c.marker, "authors": c.authors,
                         "cited_title": c.cited_title}
                        for c in s.citations
                    ],
                }
                for s in sec.sentences
            ],
            "subsections": [sec_obj(sub) for sub in sec.subsections],
        }

    return {
        "doc_id": doc.doc_id,
        "title": doc.title,
        "venue": doc.venue,
        "year": doc.year,
        "url": doc.url,
        "sections": [sec_obj(sec) for sec in doc.sections],
        "bibliography": {k: list(v) for k, v in sorted(doc.bibliography.items())},
    }


def write_corpus_jsonl(docs: List[Document], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(document_to_json(doc), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
