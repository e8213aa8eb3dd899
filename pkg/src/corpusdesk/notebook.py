"""Bookmarks and user notes with journal persistence and CSV export.

State lives in an append-only JSON-lines journal (one event per line:
{"op", "payload", "ts"}) replayed and compacted on load, so a crash can at
worst lose the final partial line. Bookmarks snapshot the sentence and its
provenance at creation time; re-ingesting a changed corpus never rewrites
an existing snapshot.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .errors import NotFoundError
from .retrieve import sentence_context
from .store import CorpusStore

CSV_HEADER = ["bookmark_id", "sentence_id", "paper_title", "paper_url",
              "section_path", "sentence_text", "note_text", "created_at",
              "note_updated_at"]


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _iso(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class Snapshot:
    sentence_text: str
    paper_title: str
    paper_url: str
    section_path: Tuple[str, ...]


@dataclass(frozen=True)
class Bookmark:
    bookmark_id: str
    sentence_id: str
    created_at: str  # ISO 8601 UTC
    snapshot: Snapshot


@dataclass(frozen=True)
class UserNote:
    note_id: str
    bookmark_id: str
    text: str
    updated_at: str


def _bookmark_id(sentence_id: str) -> str:
    return "bm-" + hashlib.sha1(sentence_id.encode("utf-8")).hexdigest()[:12]


class NotebookStore:
    """Journal-backed store. Writes are funneled through one lock; reads
    work on plain dict snapshots and may run concurrently."""

    def __init__(self, journal_path: Optional[str] = None,
                 clock: Callable[[], datetime] = _utc_now) -> None:
        self._clock = clock
        self._lock = threading.Lock()
        self._bookmarks: Dict[str, Bookmark] = {}
        self._notes: Dict[str, UserNote] = {}
        self._path = Path(journal_path) if journal_path else None
        if self._path and self._path.exists():
            self._replay(self._path.read_text("utf-8"))

    # -- journal ----------------------------------------------------------

    def _replay(self, text: str) -> None:
        lines = text.split("\n")
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                if i == len(lines) - 1 or not any(l.strip() for l in lines[i + 1:]):
                    break  # torn final write; everything before it is intact
                raise ValueError(f"corrupt journal line {i + 1}")
            self._apply(event)

    def _apply(self, event: dict) -> None:
        op = event.get("op")
        payload = event.get("payload", {})
        if op == "add_bookmark":
            bm = Bookmark(
                bookmark_id=payload["bookmark_id"],
                sentence_id=payload["sentence_id"],
                created_at=payload["created_at"],
                snapshot=Snapshot(
                    sentence_text=payload["snapshot"]["sentence_text"],
                    paper_title=payload["snapshot"]["paper_title"],
                    paper_url=payload["snapshot"]["paper_url"],
                    section_path=tuple(payload["snapshot"]["section_path"]),
                ))
            self._bookmarks.setdefault(bm.bookmark_id, bm)
        elif op == "remove_bookmark":
            bid = payload["bookmark_id"]
            self._bookmarks.pop(bid, None)
            self._notes.pop(bid, None)
        elif op == "upsert_note":
            bid = payload["bookmark_id"]
            if bid not in self._bookmarks:
                return
            text = payload["text"]
            if text:
                self._notes[bid] = UserNote(
                    note_id=payload["note_id"], bookmark_id=bid,
                    text=text, updated_at=payload["updated_at"])
            else:
                self._notes.pop(bid, None)
        else:
            raise ValueError(f"unknown journal op {op!r}")

    def _append(self, op: str, payload: dict) -> None:
        if not self._path:
            return
        event = {"op": op, "payload": payload, "ts": _iso(self._clock())}
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False, sort_keys=True))
            fh.write("\n")

    # -- operations --------------------------------------------------------

    def add_bookmark(self, sentence_id: str, corpus: CorpusStore) -> Bookmark:
        """Bookmark a sentence; idempotent per sentence id."""
        with self._lock:
            bid = _bookmark_id(sentence_id)
            existing = self._bookmarks.get(bid)
            if existing is not None:
                return existing
            ctx = sentence_context(sentence_id, corpus)  # raises NotFoundError
            rec = corpus.sentence(sentence_id)
            bm = Bookmark(
                bookmark_id=bid,
                sentence_id=sentence_id,
                created_at=_iso(self._clock()),
                snapshot=Snapshot(
                    sentence_text=rec.text,
                    paper_title=ctx.paper_title,
                    paper_url=ctx.paper_url or "",
                    section_path=ctx.section_path,
                ))
            self._bookmarks[bid] = bm
            self._append("add_bookmark", {
                "bookmark_id": bm.bookmark_id,
                "sentence_id": bm.sentence_id,
                "created_at": bm.created_at,
                "snapshot": {
                    "sentence_text": bm.snapshot.sentence_text,
                    "paper_title": bm.snapshot.paper_title,
                    "paper_url": bm.snapshot.paper_url,
                    "section_path": list(bm.snapshot.section_path),
                }})
            return bm

    def remove_bookmark(self, bookmark_id: str) -> None:
        """Remove a bookmark and cascade to its note."""
        with self._lock:
            if bookmark_id not in self._bookmarks:
                raise NotFoundError(f"unknown bookmark {bookmark_id!r}")
            del self._bookmarks[bookmark_id]
            self._notes.pop(bookmark_id, None)
            self._append("remove_bookmark", {"bookmark_id": bookmark_id})

    def upsert_note(self, bookmark_id: str, text: str) -> Optional[UserNote]:
        """Set the single note on a bookmark; empty text clears it."""
        with self._lock:
            if bookmark_id not in self._bookmarks:
                raise NotFoundError(f"unknown bookmark {bookmark_id!r}")
            note_id = "note-" + bookmark_id[3:]
            if not text:
                self._notes.pop(bookmark_id, None)
                self._append("upsert_note", {
                    "bookmark_id": bookmark_id, "note_id": note_id, "text": "",
                    "updated_at": _iso(self._clock())})
                return None
            note = UserNote(note_id=note_id, bookmark_id=bookmark_id,
                            text=text, updated_at=_iso(self._clock()))
            self._notes[bookmark_id] = note
            self._append("upsert_note", {
                "bookmark_id": bookmark_id, "note_id": note.note_id,
                "text": note.text, "updated_at": note.updated_at})
            return note

    def bookmarks(self) -> List[Bookmark]:
        out = list(self._bookmarks.values())
        out.sort(key=lambda b: (b.created_at, b.bookmark_id))
        return out

    def note_for(self, bookmark_id: str) -> Optional[UserNote]:
        return self._notes.get(bookmark_id)

    def export_csv(self) -> bytes:
        """RFC 4180 CSV (UTF-8, CRLF) of all bookmarks and their notes,
        ordered by creation time then bookmark id."""
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
        writer.writerow(CSV_HEADER)
        for bm in self.bookmarks():
            note = self._notes.get(bm.bookmark_id)
            writer.writerow([
                bm.bookmark_id,
                bm.sentence_id,
                bm.snapshot.paper_title,
                bm.snapshot.paper_url,
                " > ".join(bm.snapshot.section_path),
                bm.snapshot.sentence_text,
                note.text if note else "",
                bm.created_at,
                note.updated_at if note else "",
            ])
        return buf.getvalue().encode("utf-8")
