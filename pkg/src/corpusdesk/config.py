"""Engine configuration file loading (TOML key/value)."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .model import EngineConfig


@dataclass(frozen=True)
class ServiceConfig:
    corpus_paths: List[str]
    provider: str = "local"             # "local" | "remote"
    index_mode: str = "exact"           # "exact" | "approximate"
    index_path: Optional[str] = None    # load if present, else build and save
    journal_path: Optional[str] = None
    host: str = "127.0.0.1"
    port: int = 8000
    engine: EngineConfig = field(default_factory=EngineConfig)
    remote_base_url: str = ""
    remote_model: str = ""
    remote_dim: int = 0
    remote_api_key_env: str = "CORPUSDESK_API_KEY"


def load_config(path: str) -> ServiceConfig:
    raw = tomllib.loads(Path(path).read_text("utf-8"))
    engine_raw = raw.get("engine", {})
    engine = EngineConfig(
        k_results=int(engine_raw.get("k_results", 25)),
        n_titles_clustered=int(engine_raw.get("n_titles_clustered", 1000)),
        n_colors=int(engine_raw.get("n_colors", 20)),
        pdc_alpha=float(engine_raw.get("pdc_alpha", 0.7)),
        pdc_cut=float(engine_raw.get("pdc_cut", 0.35)),
        embedding_dim=int(engine_raw.get("embedding_dim", 256)),
    )
    remote = raw.get("remote", {})
    corpus = raw.get("corpus", [])
    if isinstance(corpus, str):
        corpus = [corpus]
    mode = str(raw.get("index_mode", "exact"))
    if mode == "approx":
        mode = "approximate"
    return ServiceConfig(
        corpus_paths=[str(p) for p in corpus],
        provider=str(raw.get("provider", "local")),
        index_mode=mode,
        index_path=raw.get("index_path"),
        journal_path=raw.get("journal"),
        host=str(raw.get("host", "127.0.0.1")),
        port=int(raw.get("port", 8000)),
        engine=engine,
        remote_base_url=str(remote.get("base_url", "")),
        remote_model=str(remote.get("model", "")),
        remote_dim=int(remote.get("dim", 0)),
        remote_api_key_env=str(remote.get("api_key_env", "CORPUSDESK_API_KEY")),
    )
