"""End-to-end acceptance suite.

One test per release criterion; each prints a PASS/FAIL line so a plain
``pytest -s tests/test_acceptance.py`` doubles as the release checklist.
"""

import json
import random
import re
import time
from collections import Counter
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from corpusdesk.cli import main as cli_main
from corpusdesk.embed import (EmbeddingInput, LocalHashProvider,
                              compose_embedding_text, local_embed)
from corpusdesk.engine import Engine, build_engine, embed_records
from corpusdesk.highlight import (STOPWORDS, build_color_map, grey_out)
from corpusdesk.index import build_index, knn
from corpusdesk.ingest import parse_corpus, parse_markdown_text, source_files_for
from corpusdesk.model import SentenceRecord
from corpusdesk.notebook import NotebookStore
from corpusdesk.pdc import cluster_titles, extract_title_occurrences
from corpusdesk.retrieve import (CursorContext, RetrievalResult, RetrievedRow,
                                 rerank, spatial_retrieve)
from corpusdesk.server import create_app
from corpusdesk.store import CorpusStore
from corpusdesk.config import ServiceConfig

GOLDEN = Path(__file__).parent / "golden" / "bookmarks.csv"


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL", flush=True)
        raise
    print(f"ACCEPTANCE {name}: PASS", flush=True)


# -- synthetic corpora ---------------------------------------------------------

WORDS = ("system users study design tasks editor model writing corpus "
         "sentences sections titles participants results evaluation method "
         "interaction feedback analysis drafting revision norms community "
         "examples retrieval clusters patterns authors papers venue").split()

TITLES = ["Introduction", "Related Work", "Method", "System Design",
          "Implementation", "User Study", "Results", "Discussion", "Conclusion"]


def synthetic_sentences(count, seed):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        title = rng.choice(TITLES)
        words = [rng.choice(WORDS) for _ in range(rng.randint(5, 14))]
        text = " ".join(words).capitalize() + "."
        out.append((f"s{i:04d}", title, text))
    return out


def synthetic_vectors(count, seed, provider):
    rows = synthetic_sentences(count, seed)
    return {sid: local_embed(compose_embedding_text(EmbeddingInput(title, text)),
                             provider.dim)
            for sid, title, text in rows}


def brute_force_scan(vectors, query, k):
    q = np.asarray(query, dtype=np.float64)
    scored = sorted((1.0 - float(np.asarray(v, dtype=np.float64) @ q), sid)
                    for sid, v in vectors.items())
    return scored[:k]


def test_exact_knn_oracle_and_approximate_recall():
    with criterion("exact-knn-oracle-and-recall"):
        started = time.monotonic()
        provider = LocalHashProvider(dim=256)
        vectors = synthetic_vectors(1000, seed=20260101, provider=provider)
        exact = build_index(vectors, mode="exact")
        approx = build_index(vectors, mode="approximate")

        queries = []
        for sid, title, text in synthetic_sentences(50, seed=20260202):
            queries.append(local_embed(
                compose_embedding_text(EmbeddingInput(title, text)), provider.dim))

        recall_hits = 0
        for q in queries:
            expected = brute_force_scan(vectors, q, 25)
            got = knn(exact, q, k=25)
            assert [n.sentence_id for n in got] == [sid for _, sid in expected]
            approx_ids = {n.sentence_id for n in knn(approx, q, k=25)}
            recall_hits += len(approx_ids & {sid for _, sid in expected})
        recall = recall_hits / (50 * 25)
        assert recall >= 0.95, f"approximate recall@25 = {recall:.4f}"
        elapsed = time.monotonic() - started
        assert elapsed < 30.0, f"criterion took {elapsed:.1f}s"


def test_retrieval_defaults(corpus_store, corpus_index, provider, corpus_docs):
    with criterion("retrieval-defaults"):
        engine = Engine(docs=corpus_docs, provider=provider,
                        vector_index=corpus_index)
        assert engine.config.k_results == 25
        assert len(corpus_store) >= 25
        result = engine.retrieve(CursorContext(
            section_title="Introduction",
            paragraph_text="We present a corpus-backed writing tool."))
        assert len(result.rows) == 25
        dists = [r.distance for r in result.rows]
        assert dists == sorted(dists)


def test_offset_property_exhaustive(corpus_store, corpus_index, provider):
    with criterion("offset-property"):
        started = time.monotonic()
        for rec in corpus_store.records():
            for offset in (0, 1, 2, 3):
                ctx = CursorContext(section_title=rec.section_path[-1],
                                    paragraph_text=rec.text, offset=offset)
                result = spatial_retrieve(ctx, corpus_index, provider,
                                          corpus_store, k=25)
                for row in result.rows:
                    expected = corpus_store.successor(row.match, offset)
                    assert expected is not None, \
                        "row without an o-th successor must be dropped"
                    assert row.display_sentence == expected
        elapsed = time.monotonic() - started
        assert elapsed < 5.0, f"criterion took {elapsed:.1f}s"


def test_prepend_consistency_bitwise(corpus_store, corpus_index, provider):
    with criterion("prepend-consistency"):
        for rec in list(corpus_store.records())[:10]:
            pair = EmbeddingInput(section_title=rec.section_path[-1], text=rec.text)
            query_vec = provider.embed_batch([pair])[0]
            stored = corpus_index.vector(rec.sentence_id)
            assert query_vec.tobytes() == stored.tobytes()  # bitwise
            top = knn(corpus_index, query_vec, k=1)[0]
            assert top.sentence_id == rec.sentence_id
            assert abs(top.distance) <= 2e-6


def _check_pdc_invariants(result):
    means = [c.mean_position for c in result.clusters]
    assert means == sorted(means)
    assert sum(c.count for c in result.clusters) == result.total_titles
    for c in result.clusters:
        for m in c.members:
            assert c.underline_tokens <= m.tokens
        seen = set()
        for i, m in enumerate(c.members):
            toks = [t.lower() for t in re.findall(r"[^\W_]+", m.title)]
            assert len(c.grey_flags[i]) == len(toks)
            for j, tok in enumerate(toks):
                assert c.grey_flags[i][j] == (tok in seen)
            seen.update(toks)


def test_pdc_invariant_suite():
    with criterion("pdc-invariants"):
        started = time.monotonic()
        rng = random.Random(128128)
        pool = [t for t in TITLES if t != "Introduction"]
        docs = []
        for i in range(128):
            titles = ["Introduction"] + rng.sample(pool, rng.randint(3, 6))
            body = "\n\n".join(f"# {t}\n\nFiller for {t.lower()}." for t in titles)
            docs.append(parse_markdown_text(body, doc_id=f"p{i:03d}"))
        occ = extract_title_occurrences(docs, 1000)
        result = cluster_titles(occ)
        first = result.clusters[0]
        assert first.name == "Introduction"
        assert first.count == 128
        _check_pdc_invariants(result)

        word_pool = ["intro", "related", "work", "method", "study", "results",
                     "design", "user", "system", "analysis", "notes", "future"]
        for trial in range(200):
            trial_rng = random.Random(9000 + trial)
            docs = []
            for d in range(trial_rng.randint(2, 8)):
                titles = [" ".join(trial_rng.sample(word_pool,
                                                    trial_rng.randint(1, 3))).title()
                          for _ in range(trial_rng.randint(1, 6))]
                body = "\n\n".join(f"# {t}\n\nFiller text." for t in titles)
                docs.append(parse_markdown_text(body, doc_id=f"d{d}"))
            occ = extract_title_occurrences(docs, 1000)
            _check_pdc_invariants(cluster_titles(occ))
        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"criterion took {elapsed:.1f}s"


def _random_result(rng, n_rows, with_next=True):
    rows = []
    for i in range(n_rows):
        text = " ".join(rng.choice(WORDS) for _ in range(rng.randint(3, 10)))
        rec = SentenceRecord(sentence_id=f"m{i}", text=text, doc_id="d",
                             section_path=("S",), index_in_section=0)
        nxt = None
        if with_next and rng.random() < 0.8:
            nxt_text = " ".join(rng.choice(WORDS) for _ in range(rng.randint(3, 10)))
            nxt = SentenceRecord(sentence_id=f"n{i}", text=nxt_text, doc_id="d",
                                 section_path=("S",), index_in_section=1)
        rows.append(RetrievedRow(match=rec, next=nxt, distance=i * 0.01,
                                 display_sentence=rec))
    return RetrievalResult(rows=tuple(rows),
                           query_echo=CursorContext("S", "query"))


def test_highlight_oracles():
    with criterion("highlight-oracles"):
        rng = random.Random(31337)
        for _ in range(100):
            result = _random_result(rng, rng.randint(1, 12))

            counts = Counter()
            for row in result.rows:
                for sent in (row.display_sentence, row.next):
                    if sent is None:
                        continue
                    for tok in re.findall(r"[^\W_]+", sent.text.lower()):
                        if tok not in STOPWORDS:
                            counts[tok] += 1
            expected = sorted(counts, key=lambda t: (-counts[t], t))[:20]
            cmap = build_color_map(result, n_colors=20)
            assert list(cmap.ranked_words) == expected
            assert build_color_map(result, n_colors=20) == cmap  # deterministic

            grey = grey_out(result, "match")
            assert grey == grey_out(result, "match")
            greyed = {}
            for s in grey.spans:
                greyed.setdefault(s.sentence_id, set()).add(s.token)
            seen = set()
            for row in result.rows:
                toks = set(re.findall(r"[^\W_]+", row.display_sentence.text.lower()))
                assert greyed.get(row.display_sentence.sentence_id, set()) == \
                    (toks & seen)
                seen |= toks


def test_rerank_contract():
    with criterion("rerank-contract"):
        provider = LocalHashProvider(dim=128)
        base = synthetic_sentences(200, seed=555)
        vectors = {sid: local_embed(compose_embedding_text(
            EmbeddingInput(title, text)), 128) for sid, title, text in base}
        idx = build_index(vectors, mode="exact")
        recs = {sid: SentenceRecord(sentence_id=sid, text=text, doc_id="d",
                                    section_path=(title,), index_in_section=0)
                for sid, title, text in base}

        rng = random.Random(717)
        for _ in range(100):
            ids = rng.sample(sorted(recs), rng.randint(3, 20))
            rows = tuple(RetrievedRow(match=recs[i], next=None, distance=j * 0.01,
                                      display_sentence=recs[i])
                         for j, i in enumerate(ids))
            result = RetrievalResult(rows=rows, query_echo=CursorContext("S", "q"))
            anchor_pos = rng.randrange(len(rows))
            out = rerank(result, anchor_pos, idx)

            assert sorted(r.match.sentence_id for r in out.rows) == sorted(ids)
            assert out.rows[0] == rows[anchor_pos]
            av = np.asarray(vectors[rows[anchor_pos].match.sentence_id], np.float64)
            keys = [(1.0 - float(np.asarray(
                        vectors[r.display_sentence.sentence_id], np.float64) @ av),
                     r.display_sentence.sentence_id) for r in out.rows[1:]]
            assert keys == sorted(keys)

        # grey spans must be recomputed for the new order, not permuted
        texts = ["alpha beta", "alpha gamma", "gamma delta"]
        rows = tuple(RetrievedRow(
            match=SentenceRecord(sentence_id=f"m{i}", text=t, doc_id="d",
                                 section_path=("S",), index_in_section=0),
            next=None, distance=i * 0.1,
            display_sentence=SentenceRecord(sentence_id=f"m{i}", text=t, doc_id="d",
                                            section_path=("S",),
                                            index_in_section=0))
            for i, t in enumerate(texts))
        result = RetrievalResult(rows=rows, query_echo=CursorContext("S", "q"))
        permuted = RetrievalResult(rows=(rows[2], rows[0], rows[1]),
                                   query_echo=result.query_echo)
        recomputed = {(s.sentence_id, s.start)
                      for s in grey_out(permuted, "match").spans}
        naive_permutation = {(s.sentence_id, s.start)
                             for s in grey_out(result, "match").spans}
        assert recomputed != naive_permutation


def test_notebook_golden_and_crash_recovery(corpus_store, tmp_path):
    with criterion("notebook-golden-and-journal"):
        ticks = [datetime(2026, 1, 15, 9, m, 0, tzinfo=timezone.utc)
                 for m in range(10)]
        nb = NotebookStore(clock=lambda: ticks.pop(0))
        b1 = nb.add_bookmark("paper-alpha#6#0", corpus_store)
        b2 = nb.add_bookmark("paper-alpha#3#0", corpus_store)
        nb.add_bookmark("paper-gamma#4#2", corpus_store)
        nb.upsert_note(b1.bookmark_id, "Typical participant recruitment phrasing.")
        nb.upsert_note(b2.bookmark_id,
                       'He said "well, maybe" about this structure.')
        assert nb.export_csv() == GOLDEN.read_bytes()

        journal = tmp_path / "journal.jsonl"
        live = NotebookStore(str(journal))
        k1 = live.add_bookmark("paper-alpha#0#0", corpus_store)
        live.add_bookmark("paper-beta#0#0", corpus_store)
        live.upsert_note(k1.bookmark_id, "complete event")
        raw = journal.read_bytes()
        journal.write_bytes(raw[:-19])  # tear the final event mid-line
        recovered = NotebookStore(str(journal))
        assert len(recovered.bookmarks()) == 2
        assert recovered.note_for(k1.bookmark_id) is None


def test_service_end_to_end(tmp_path, capsys, corpus_paths):
    with criterion("service-end-to-end"):
        corpus_jsonl = str(tmp_path / "corpus.jsonl")
        index_path = str(tmp_path / "fixture.csix")
        assert cli_main(["ingest", "--corpus", *corpus_paths,
                         "--out", corpus_jsonl]) == 0
        assert cli_main(["index", "--corpus", corpus_jsonl,
                         "--mode", "exact", "--out", index_path]) == 0
        capsys.readouterr()

        config = ServiceConfig(corpus_paths=[corpus_jsonl], provider="local",
                               index_mode="exact", index_path=index_path,
                               journal_path=str(tmp_path / "journal.jsonl"))
        engine = build_engine(config)
        client = TestClient(create_app(engine))

        assert client.get("/health").json() == {"status": "ok"}
        assert client.get("/pdc").json() == engine.pdc_json()

        body = {"section_title": "Participants",
                "paragraph_text": "We recruited sixteen people.",
                "offset": 0, "mode": "color"}
        resp = client.post("/retrieve", json=body).json()
        direct = engine.retrieve(CursorContext(
            section_title=body["section_title"],
            paragraph_text=body["paragraph_text"]))
        assert resp["rows"] == engine.result_to_json(direct)
        assert resp["annotations"] == engine.annotations(direct, "color")


def test_service_latency_p95(tmp_path):
    with criterion("service-latency-p95"):
        rng = random.Random(8181)
        docs = []
        for d in range(50):  # 50 docs x 20 sentences = 1000 sentences
            parts = []
            for s in range(5):
                title = rng.choice(TITLES)
                sents = " ".join(
                    " ".join(rng.choice(WORDS)
                             for _ in range(rng.randint(6, 12))).capitalize() + "."
                    for _ in range(4))
                parts.append(f"# {title}\n\n{sents}")
            docs.append(parse_markdown_text("\n\n".join(parts), doc_id=f"syn{d:03d}"))
        provider = LocalHashProvider(dim=256)
        store = CorpusStore(docs)
        assert len(store) == 1000
        idx = build_index(embed_records(list(store.records()), provider))
        engine = Engine(docs=docs, provider=provider, vector_index=idx)
        client = TestClient(create_app(engine))

        def one_request(i):
            text = " ".join(rng.choice(WORDS) for _ in range(10))
            body = {"section_title": rng.choice(TITLES), "paragraph_text": text,
                    "offset": 0, "mode": "color"}
            t0 = time.perf_counter()
            resp = client.post("/retrieve", json=body)
            dt = time.perf_counter() - t0
            assert resp.status_code == 200
            return dt

        for i in range(3):  # warmup
            one_request(i)
        times = sorted(one_request(i) for i in range(50))
        p95 = times[int(0.95 * len(times)) - 1]
        assert p95 < 0.2, f"p95 retrieve latency {p95 * 1000:.1f} ms"
