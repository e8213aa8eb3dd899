"""Rendering annotations for retrieved sentences.

Two modes, both emitted as character-offset span annotations so all styling
stays in the UI:

* color: the top-N most frequently occurring non-stopwords across both
  displayed columns each get a distinct color index, and every occurrence
  of those words is tagged.
* grey: any word occurrence whose word already appeared in an earlier
  sentence of the same displayed column is de-emphasized, making novel
  diction stand out. Stopwords are greyable; the stopword list only gates
  the color map.

Both are pure functions of the rows, their display order, and the frozen
stopword list; re-ranking therefore requires recomputing grey spans.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .retrieve import RetrievalResult, RetrievedRow
from .textutil import token_spans, tokenize

COLUMN_MATCH = "match"
COLUMN_NEXT = "next"


def _load_stopwords() -> frozenset:
    text = resources.files("corpusdesk.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines()
                     if line.strip() and not line.startswith("#"))


STOPWORDS = _load_stopwords()


@dataclass(frozen=True)
class TokenSpan:
    sentence_id: str
    start: int
    end: int
    token: str
    color_index: Optional[int] = None


@dataclass(frozen=True)
class ColorMap:
    ranked_words: Tuple[str, ...]

    def color_of(self, token: str) -> Optional[int]:
        try:
            return self.ranked_words.index(token)
        except ValueError:
            return None


@dataclass(frozen=True)
class GreyAnnotation:
    spans: Tuple[TokenSpan, ...]


def _column_sentences(rows: Sequence[RetrievedRow], column: str):
    for row in rows:
        if column == COLUMN_MATCH:
            yield row.display_sentence
        elif row.next is not None:
            yield row.next


def build_color_map(result: RetrievalResult, stopwords: frozenset = STOPWORDS,
                    n_colors: int = 20) -> ColorMap:
    """Rank the most frequent non-stopwords across both displayed columns.

    Every occurrence counts (not per-sentence presence); ties break
    lexicographically; color_index equals rank.
    """
    if not result.rows:
        raise ValueError("cannot build a color map over an empty result")
    counts: Counter = Counter()
    for column in (COLUMN_MATCH, COLUMN_NEXT):
        for sent in _column_sentences(result.rows, column):
            for token in tokenize(sent.text):
                if token not in stopwords:
                    counts[token] += 1
    ranked = sorted(counts, key=lambda t: (-counts[t], t))[:n_colors]
    return ColorMap(ranked_words=tuple(ranked))


def colorize(result: RetrievalResult, color_map: ColorMap) -> List[TokenSpan]:
    """A span for every occurrence of every mapped word, both columns."""
    rank: Dict[str, int] = {w: i for i, w in enumerate(color_map.ranked_words)}
    spans: List[TokenSpan] = []
    for column in (COLUMN_MATCH, COLUMN_NEXT):
        for sent in _column_sentences(result.rows, column):
            for start, end, token in token_spans(sent.text):
                idx = rank.get(token)
                if idx is not None:
                    spans.append(TokenSpan(sentence_id=sent.sentence_id,
                                           start=start, end=end, token=token,
                                           color_index=idx))
    return spans


def grey_out(result: RetrievalResult, column: str) -> GreyAnnotation:
    """Spans for word occurrences already seen in earlier sentences of the
    given column, in current display order."""
    if column not in (COLUMN_MATCH, COLUMN_NEXT):
        raise ValueError(f"unknown column {column!r}")
    spans: List[TokenSpan] = []
    seen: set = set()
    for sent in _column_sentences(result.rows, column):
        sent_tokens = []
        for start, end, token in token_spans(sent.text):
            sent_tokens.append(token)
            if token in seen:
                spans.append(TokenSpan(sentence_id=sent.sentence_id,
                                       start=start, end=end, token=token))
        seen.update(sent_tokens)
    return GreyAnnotation(spans=tuple(spans))


def annotations_to_json(result: RetrievalResult, mode: str,
                        stopwords: frozenset = STOPWORDS,
                        n_colors: int = 20) -> dict:
    """Annotation payload for one rendering mode, grouped by column.

    Each entry is {sentence_id, spans: [{start, end, kind, color_index?}]}
    in display order; offsets count Unicode code points.
    """
    if mode not in ("color", "grey", "plain"):
        raise ValueError(f"unknown rendering mode {mode!r}")
    per_column: Dict[str, List[dict]] = {COLUMN_MATCH: [], COLUMN_NEXT: []}
    if not result.rows:
        return per_column
    span_map: Dict[Tuple[str, str], List[dict]] = {}

    def entry_for(column: str, sentence_id: str) -> List[dict]:
        key = (column, sentence_id)
        if key not in span_map:
            obj = {"sentence_id": sentence_id, "spans": []}
            span_map[key] = obj["spans"]
            per_column[column].append(obj)
        return span_map[key]

    # every displayed sentence gets an entry even when unannotated
    for column in (COLUMN_MATCH, COLUMN_NEXT):
        for sent in _column_sentences(result.rows, column):
            entry_for(column, sent.sentence_id)

    if mode == "color":
        color_map = build_color_map(result, stopwords, n_colors)
        rank = {w: i for i, w in enumerate(color_map.ranked_words)}
        for column in (COLUMN_MATCH, COLUMN_NEXT):
            for sent in _column_sentences(result.rows, column):
                entry = entry_for(column, sent.sentence_id)
                for start, end, token in token_spans(sent.text):
                    idx = rank.get(token)
                    if idx is not None:
                        entry.append({"start": start, "end": end,
                                      "kind": "color", "color_index": idx})
    elif mode == "grey":
        for column in (COLUMN_MATCH, COLUMN_NEXT):
            for span in grey_out(result, column).spans:
                entry_for(column, span.sentence_id).append({
                    "start": span.start, "end": span.end, "kind": "grey"})
    return per_column
