"""Operator CLI: ingest corpora, build indexes, run clustering and queries.

Commands print line-delimited JSON to stdout (or write files via --out) and
are deterministic for fixed inputs under the local provider. Exit codes:
0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .config import load_config
from .engine import Engine, embed_records, make_provider
from .errors import ConfigurationError, NotFoundError
from .embed import LocalHashProvider
from .highlight import annotations_to_json
from .hnsw import HnswParams
from .index import IndexFormatError, build_index, load_index, save_index
from .ingest import (CorpusParseError, parse_corpus, source_files_for,
                     write_corpus_jsonl)
from .model import EngineConfig
from .notebook import NotebookStore
from .pdc import cluster_titles, extract_title_occurrences, pdc_to_json
from .retrieve import CursorContext
from .store import CorpusStore

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_ERROR)


def _build_parser() -> _Parser:
    parser = _Parser(prog="corpusdesk")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_ingest = sub.add_parser("ingest", help="parse corpus files to normalized JSONL")
    p_ingest.add_argument("--corpus", nargs="+", required=True, metavar="PATH")
    p_ingest.add_argument("--out", required=True, metavar="PATH")

    p_index = sub.add_parser("index", help="embed a corpus and build a vector index")
    p_index.add_argument("--corpus", nargs="+", required=True, metavar="PATH")
    p_index.add_argument("--provider", choices=["local", "remote"], default="local")
    p_index.add_argument("--mode", choices=["exact", "approx"], default="exact")
    p_index.add_argument("--out", required=True, metavar="PATH")
    p_index.add_argument("--dim", type=int, default=256)
    p_index.add_argument("--config", metavar="PATH",
                         help="service config (required for --provider remote)")

    p_pdc = sub.add_parser("pdc", help="compute the ordered section-title clusters")
    p_pdc.add_argument("--corpus", nargs="+", required=True, metavar="PATH")
    p_pdc.add_argument("--n", type=int, default=1000,
                       help="max title occurrences to cluster")
    p_pdc.add_argument("--out", metavar="PATH")
    p_pdc.add_argument("--pretty", action="store_true")

    p_query = sub.add_parser("query", help="run an analogous retrieval")
    p_query.add_argument("--index", required=True, metavar="PATH")
    p_query.add_argument("--corpus", nargs="+", required=True, metavar="PATH")
    p_query.add_argument("--title", required=True, metavar="STR")
    p_query.add_argument("--text", required=True, metavar="STR")
    p_query.add_argument("--offset", type=int, default=0)
    p_query.add_argument("--k", type=int, default=25)
    p_query.add_argument("--render", choices=["color", "grey", "plain"],
                         default="plain")
    p_query.add_argument("--pretty", action="store_true")

    p_export = sub.add_parser("export-notes", help="export bookmarks and notes as CSV")
    p_export.add_argument("--store", required=True, metavar="PATH",
                          help="notebook journal file")
    p_export.add_argument("--out", metavar="PATH")

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--config", required=True, metavar="PATH")

    return parser


def _require_files(paths: List[str]) -> None:
    for p in paths:
        if not Path(p).exists():
            raise FileNotFoundError(f"no such file: {p}")


def cmd_ingest(args: argparse.Namespace) -> int:
    _require_files(args.corpus)
    docs = parse_corpus(source_files_for(args.corpus))
    write_corpus_jsonl(docs, args.out)
    print(json.dumps({"documents": len(docs), "out": args.out}))
    return 0


def _provider_from_args(args: argparse.Namespace):
    if args.provider == "local":
        return LocalHashProvider(dim=args.dim)
    if not args.config:
        raise ConfigurationError("--provider remote requires --config")
    cfg = load_config(args.config)
    return make_provider(cfg)


def cmd_index(args: argparse.Namespace) -> int:
    _require_files(args.corpus)
    docs = parse_corpus(source_files_for(args.corpus))
    store = CorpusStore(docs)
    provider = _provider_from_args(args)
    vectors = embed_records(list(store.records()), provider)
    mode = "approximate" if args.mode == "approx" else "exact"
    idx = build_index(vectors, mode=mode, params=HnswParams())
    save_index(idx, args.out)
    print(json.dumps({"entries": len(idx), "dim": idx.dim, "mode": idx.mode,
                      "out": args.out}))
    return 0


def cmd_pdc(args: argparse.Namespace) -> int:
    _require_files(args.corpus)
    docs = parse_corpus(source_files_for(args.corpus))
    occ = extract_title_occurrences(docs, args.n)
    result = cluster_titles(occ)
    payload = pdc_to_json(result)
    text = json.dumps(payload, indent=2 if args.pretty else None,
                      sort_keys=True, ensure_ascii=False)
    if args.out:
        Path(args.out).write_text(text + "\n", "utf-8")
    else:
        print(text)
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    _require_files([args.index] + args.corpus)
    docs = parse_corpus(source_files_for(args.corpus))
    idx = load_index(args.index)
    provider = LocalHashProvider(dim=idx.dim)
    engine = Engine(docs=docs, provider=provider, vector_index=idx,
                    engine_config=EngineConfig(
                        k_results=args.k,
                        embedding_dim=max(idx.dim, 8)))
    ctx = CursorContext(section_title=args.title, paragraph_text=args.text,
                        offset=args.offset)
    result = engine.retrieve(ctx, k=args.k)
    rows = engine.result_to_json(result)
    annotations = (annotations_to_json(result, args.render)
                   if args.render != "plain" and result.rows else None)
    if args.pretty:
        doc = {"rows": rows}
        if annotations is not None:
            doc["annotations"] = annotations
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for row in rows:
            print(json.dumps(row, sort_keys=True, ensure_ascii=False))
        if annotations is not None:
            print(json.dumps({"annotations": annotations}, sort_keys=True,
                             ensure_ascii=False))
    return 0


def cmd_export_notes(args: argparse.Namespace) -> int:
    _require_files([args.store])
    store = NotebookStore(journal_path=args.store)
    data = store.export_csv()
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    _require_files([args.config])
    from .server import serve

    serve(args.config)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "index": cmd_index,
        "pdc": cmd_pdc,
        "query": cmd_query,
        "export-notes": cmd_export_notes,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (CorpusParseError, IndexFormatError, ConfigurationError,
            NotFoundError, FileNotFoundError, IOError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
