"""Sentence embedding providers.

Vectors are produced from (section title, sentence text) pairs: the title is
prepended to the text and the concatenation is embedded, so a query built
from the writer's current section title lands near sentences from similarly
titled sections. The same composition is used at index time and query time.

The default provider is a deterministic hashed bag-of-words embedder so the
whole engine runs offline and golden tests are byte-stable. A JSON-over-HTTP
client for an external embedding service is provided behind the same
contract; remote providers are treated as non-deterministic.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, TransportError
from .textutil import tokenize

NORM_TOLERANCE = 1e-6

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF

# fixed seed for the local provider; changing it invalidates stored indexes
_HASH_SEED = 0x5143D96C0FFEE


@dataclass(frozen=True)
class EmbeddingInput:
    section_title: str
    text: str


def compose_embedding_text(inp: EmbeddingInput) -> str:
    """Title + newline + text; inner newlines in the title become spaces."""
    title = re.sub(r"[\r\n]+", " ", inp.section_title).strip()
    text = inp.text.strip()
    if not title or not text:
        raise ValueError("embedding input needs a non-empty title and text")
    return f"{title}\n{text}"


def _fnv1a64(data: bytes, seed: int) -> int:
    h = (_FNV_OFFSET ^ seed) & _MASK64
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def local_embed(text: str, dim: int) -> np.ndarray:
    """Hashed bag-of-words embedding, unit L2 norm, float32.

    Each token hashes to a bucket in [0, dim) with a +/- sign taken from the
    hash's top bit; counts accumulate and the result is normalized. Text with
    no tokens maps to the basis vector e_0.
    """
    if dim < 8:
        raise ValueError("embedding dim must be >= 8")
    if not text or not text.strip():
        raise ValueError("cannot embed empty text")
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokenize(text):
        h = _fnv1a64(token.encode("utf-8"), _HASH_SEED)
        bucket = h % dim
        sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
        acc[bucket] += sign
    norm = float(np.linalg.norm(acc))
    if norm == 0.0:
        acc[0] = 1.0
        norm = 1.0
    return (acc / norm).astype(np.float32)


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - dot(u, v) for unit vectors; the ranking metric everywhere."""
    return float(1.0 - np.dot(u.astype(np.float64), v.astype(np.float64)))


class LocalHashProvider:
    """Deterministic offline provider. Pure; safe for concurrent batches."""

    deterministic = True

    def __init__(self, dim: int = 256) -> None:
        if dim < 8:
            raise ValueError("embedding dim must be >= 8")
        self.name = f"local-hash-{dim}"
        self.dim = dim

    def embed_text(self, composed: str) -> np.ndarray:
        return local_embed(composed, self.dim)

    def embed_batch(self, inputs: Sequence[EmbeddingInput]) -> List[np.ndarray]:
        return [local_embed(compose_embedding_text(i), self.dim) for i in inputs]


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str
    model: str
    dim: int
    api_key_env: str = "CORPUSDESK_API_KEY"
    max_batch: int = 128
    max_retries: int = 4
    backoff_base: float = 0.25
    timeout: float = 30.0


class RemoteProvider:
    """JSON-over-HTTP embedding client.

    Request: ``{"model": ..., "inputs": [str, ...]}``
    Response: ``{"vectors": [[float, ...], ...]}``, one vector per input in
    order. Vectors are re-normalized on receipt. The credential is read from
    the environment variable named in the config and is never logged.
    """

    deterministic = False

    def __init__(self, config: RemoteConfig, transport=None,
                 sleep: Callable[[float], None] = time.sleep) -> None:
        import httpx

        self.config = config
        self.name = f"remote-{config.model}"
        self.dim = config.dim
        self._sleep = sleep
        key = os.environ.get(config.api_key_env, "")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        self._client = httpx.Client(base_url=config.base_url, headers=headers,
                                    timeout=config.timeout, transport=transport)

    def embed_text(self, composed: str) -> np.ndarray:
        return self._embed_strings([composed])[0]

    def embed_batch(self, inputs: Sequence[EmbeddingInput]) -> List[np.ndarray]:
        composed = [compose_embedding_text(i) for i in inputs]
        return self._embed_strings(composed)

    def _embed_strings(self, texts: List[str]) -> List[np.ndarray]:
        out: List[np.ndarray] = []
        for start in range(0, len(texts), self.config.max_batch):
            chunk = texts[start:start + self.config.max_batch]
            out.extend(self._post_chunk(chunk))
        return out

    def _post_chunk(self, chunk: List[str]) -> List[np.ndarray]:
        import httpx

        last_error: Optional[Exception] = None
        for attempt in range(self.config.max_retries + 1):
            if attempt:
                self._sleep(self.config.backoff_base * (2 ** (attempt - 1)))
            try:
                resp = self._client.post("/embed", json={
                    "model": self.config.model, "inputs": chunk})
                resp.raise_for_status()
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            vectors = resp.json().get("vectors")
            if vectors is None or len(vectors) != len(chunk):
                raise ConfigurationError(
                    f"provider returned {0 if vectors is None else len(vectors)} "
                    f"vectors for {len(chunk)} inputs")
            result = []
            for values in vectors:
                arr = np.asarray(values, dtype=np.float32)
                if arr.shape != (self.dim,):
                    raise ConfigurationError(
                        f"provider returned dim {arr.shape} but index expects {self.dim}")
                norm = float(np.linalg.norm(arr.astype(np.float64)))
                if norm == 0.0 or not np.isfinite(norm):
                    raise ConfigurationError("provider returned a non-finite or zero vector")
                result.append((arr / norm).astype(np.float32))
            return result
        raise TransportError(f"embedding request failed after "
                             f"{self.config.max_retries + 1} attempts: {last_error}")


def remote_embed_batch(inputs: Sequence[EmbeddingInput], endpoint: RemoteConfig,
                       transport=None) -> List[np.ndarray]:
    if not inputs:
        return []
    return RemoteProvider(endpoint, transport=transport).embed_batch(inputs)
