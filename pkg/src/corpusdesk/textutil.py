"""Tokenization shared by clustering, highlighting, and the local embedder."""

from __future__ import annotations

import re
from typing import List, Tuple

# alphanumeric runs (unicode letters and digits, underscore excluded)
_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> List[str]:
    """Lowercased alphanumeric tokens in order of appearance."""
    return [m.group(0).lower() for m in _TOKEN.finditer(text)]


def token_spans(text: str) -> List[Tuple[int, int, str]]:
    """(start, end, lowercased token) for every token, offsets in code points."""
    return [(m.start(), m.end(), m.group(0).lower()) for m in _TOKEN.finditer(text)]


def token_set(text: str) -> frozenset[str]:
    return frozenset(tokenize(text))
