"""Sentence segmentation behind a pluggable contract.

The default segmenter is rule based and fully deterministic: it splits on
`.`, `!`, `?` followed by whitespace and an uppercase letter or digit,
protecting a frozen table of abbreviations (see data/abbreviations.txt),
single-letter initials, and decimal numbers. Alternative segmenters (e.g.
model-backed ones) can be plugged in through `Segmenter`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Callable, List

_WS_RUN = re.compile(r"\s+")

# Candidate boundary: terminator (+ optional closing quote/bracket), then
# whitespace, then an uppercase letter, digit, or opening quote/bracket.
_BOUNDARY = re.compile(r'([.!?])(["\')\]]*)(\s+)(?=["\'(\[]*[A-Z0-9])')


@dataclass(frozen=True)
class Segmenter:
    """A named paragraph-to-sentences function.

    Implementations must preserve content: joining the output with single
    spaces and collapsing whitespace runs reconstructs the input's
    non-whitespace content in order, and no output sentence is empty.
    """

    name: str
    segment: Callable[[str], List[str]]


def _load_abbreviations() -> frozenset[str]:
    text = resources.files("corpusdesk.data").joinpath("abbreviations.txt").read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


PROTECTED_ABBREVIATIONS = _load_abbreviations()

_MAX_ABBREV_WORDS = max(len(a.split()) for a in PROTECTED_ABBREVIATIONS)


def _protected_ending(prefix: str) -> bool:
    """True if `prefix` (text up to and including a '.') must not split."""
    lowered = prefix.lower()
    words = lowered.split()
    if not words:
        return False
    for n in range(1, _MAX_ABBREV_WORDS + 1):
        if len(words) >= n and " ".join(words[-n:]) in PROTECTED_ABBREVIATIONS:
            return True
    return False


def rule_based_segment(text: str) -> List[str]:
    if not text or not text.strip():
        raise ValueError("cannot segment empty text")
    normalized = _WS_RUN.sub(" ", text).strip()
    sentences: List[str] = []
    start = 0
    for m in _BOUNDARY.finditer(normalized):
        end = m.end(2)  # boundary sits after terminator + closing quotes
        if m.group(1) == "." and _protected_ending(normalized[start:end]):
            continue
        piece = normalized[start:end].strip()
        if piece:
            sentences.append(piece)
        start = m.end(3)
    tail = normalized[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


DEFAULT_SEGMENTER = Segmenter(name="rule-based-v1", segment=rule_based_segment)


def segment_paragraph(text: str, seg: Segmenter = DEFAULT_SEGMENTER) -> List[str]:
    """Split one paragraph into sentences using the given segmenter."""
    if not text or not text.strip():
        raise ValueError("cannot segment empty text")
    return seg.segment(text)
