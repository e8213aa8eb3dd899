import json

import pytest

from corpusdesk.cli import main
from corpusdesk.index import load_index
from corpusdesk.ingest import parse_corpus, source_files_for
from corpusdesk.pdc import cluster_titles, extract_title_occurrences, pdc_to_json
from corpusdesk.store import CorpusStore


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ingest_writes_jsonl(capsys, corpus_paths, tmp_path):
    out = str(tmp_path / "corpus.jsonl")
    code, stdout, _ = run(capsys, "ingest", "--corpus", *corpus_paths, "--out", out)
    assert code == 0
    assert json.loads(stdout)["documents"] == 3
    lines = [l for l in open(out, encoding="utf-8") if l.strip()]
    assert len(lines) == 3


def test_index_and_query_pipeline(capsys, corpus_paths, tmp_path, corpus_store):
    idx_path = str(tmp_path / "fixture.csix")
    code, stdout, _ = run(capsys, "index", "--corpus", *corpus_paths,
                          "--mode", "exact", "--out", idx_path)
    assert code == 0
    assert load_index(idx_path).mode == "exact"

    code, stdout, _ = run(capsys, "query", "--index", idx_path,
                          "--corpus", *corpus_paths,
                          "--title", "Participants",
                          "--text", "We recruited sixteen people.",
                          "--k", "25")
    assert code == 0
    rows = [json.loads(l) for l in stdout.splitlines() if l.strip()]
    assert len(rows) == 25
    dists = [r["distance"] for r in rows]
    assert dists == sorted(dists)


def test_query_offset_displays_second_successor(capsys, corpus_paths, tmp_path,
                                                corpus_store):
    idx_path = str(tmp_path / "fixture.csix")
    run(capsys, "index", "--corpus", *corpus_paths, "--out", idx_path)
    code, stdout, _ = run(capsys, "query", "--index", idx_path,
                          "--corpus", *corpus_paths,
                          "--title", "Method",
                          "--text", "We logged keystrokes from pairs.",
                          "--offset", "2", "--k", "10")
    assert code == 0
    rows = [json.loads(l) for l in stdout.splitlines() if l.strip()]
    assert rows
    for row in rows:
        match = corpus_store.sentence(row["match"]["sentence_id"])
        expected = corpus_store.successor(match, 2)
        assert row["display"]["sentence_id"] == expected.sentence_id


def test_query_render_color_appends_annotations(capsys, corpus_paths, tmp_path):
    idx_path = str(tmp_path / "fixture.csix")
    run(capsys, "index", "--corpus", *corpus_paths, "--out", idx_path)
    code, stdout, _ = run(capsys, "query", "--index", idx_path,
                          "--corpus", *corpus_paths,
                          "--title", "Introduction",
                          "--text", "We present a writing tool.",
                          "--k", "5", "--render", "color")
    assert code == 0
    lines = [json.loads(l) for l in stdout.splitlines() if l.strip()]
    assert "annotations" in lines[-1]
    assert len(lines) == 6  # 5 rows + annotations line


def test_cli_output_is_deterministic(capsys, corpus_paths, tmp_path):
    idx_path = str(tmp_path / "fixture.csix")
    run(capsys, "index", "--corpus", *corpus_paths, "--out", idx_path)
    args = ("query", "--index", idx_path, "--corpus", *corpus_paths,
            "--title", "Results", "--text", "Flow episodes clustered.",
            "--k", "10", "--render", "grey")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_pdc_matches_library_golden(capsys, corpus_paths, corpus_docs):
    code, stdout, _ = run(capsys, "pdc", "--corpus", *corpus_paths, "--n", "1000")
    assert code == 0
    expected = pdc_to_json(cluster_titles(
        extract_title_occurrences(list(corpus_docs), 1000)))
    assert json.loads(stdout) == expected


def test_export_notes_csv(capsys, corpus_store, corpus_paths, tmp_path):
    from datetime import datetime, timezone
    from corpusdesk.notebook import NotebookStore

    journal = str(tmp_path / "journal.jsonl")
    nb = NotebookStore(journal,
                       clock=lambda: datetime(2026, 2, 1, tzinfo=timezone.utc))
    bm = nb.add_bookmark("paper-alpha#0#0", corpus_store)
    nb.upsert_note(bm.bookmark_id, "exported note")
    out = str(tmp_path / "notes.csv")
    code, _, _ = run(capsys, "export-notes", "--store", journal, "--out", out)
    assert code == 0
    content = open(out, encoding="utf-8").read()
    assert "exported note" in content
    assert content.startswith("bookmark_id,")


def test_missing_file_exits_2_naming_path(capsys):
    code, _, err = run(capsys, "ingest", "--corpus", "/missing/nowhere.md",
                       "--out", "/tmp/x.jsonl")
    assert code == 2
    assert "/missing/nowhere.md" in err


def test_bad_flag_exits_1_with_usage(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["query", "--frobnicate"])
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_command_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["explode"])
    assert exc.value.code == 1
