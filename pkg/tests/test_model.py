from dataclasses import replace

from corpusdesk.ingest import build_sentence_records, parse_markdown_text
from corpusdesk.model import (Section, iter_sections, validate_corpus,
                              validate_document)

DOC_TEXT = """\
%% title: Two Section Paper
%% year: 2020

# First

One sentence here. Another sentence follows.

# Second

Closing remarks happen now.
"""


def make_doc():
    return parse_markdown_text(DOC_TEXT, doc_id="doc1")


def test_well_formed_document_has_no_violations():
    assert validate_document(make_doc()) == []


def test_empty_section_title_is_flagged():
    doc = make_doc()
    bad = replace(doc.sections[0], title="")
    doc = replace(doc, sections=(bad,) + doc.sections[1:])
    fields = [v.field for v in validate_document(doc)]
    assert "Section.title" in fields


def test_broken_next_linkage_is_flagged():
    doc = make_doc()
    first = doc.sections[0]
    # corrupt sentence 0's next_text, then re-walk the section to confirm
    # the checker sees exactly what a manual walk sees
    bad_sent = replace(first.sentences[0], next_text="not the actual successor")
    bad_sec = replace(first, sentences=(bad_sent,) + first.sentences[1:])
    doc = replace(doc, sections=(bad_sec,) + doc.sections[1:])
    violations = validate_document(doc)
    assert [v for v in violations if v.field == "SentenceRecord.next_text"]
    manual_mismatch = [
        s for sec in iter_sections(doc)
        for i, s in enumerate(sec.sentences)
        if s.next_text != (sec.sentences[i + 1].text if i + 1 < len(sec.sentences) else None)
    ]
    assert len(manual_mismatch) == 1


def test_sentence_multiset_matches_section_lists(corpus_docs):
    for doc in corpus_docs:
        flat = build_sentence_records(doc)
        from_sections = [s for sec in iter_sections(doc) for s in sec.sentences]
        assert sorted(r.sentence_id for r in flat) == \
            sorted(r.sentence_id for r in from_sections)
        assert len({r.sentence_id for r in flat}) == len(flat)


def test_prev_next_linkage_is_an_involution(corpus_docs):
    for doc in corpus_docs:
        for sec in iter_sections(doc):
            sents = sec.sentences
            for i, s in enumerate(sents):
                if s.prev_text is not None:
                    assert sents[i - 1].next_text == s.text
                if s.next_text is not None:
                    assert sents[i + 1].prev_text == s.text


def test_validate_corpus_flags_duplicate_doc_ids():
    doc = make_doc()
    violations = validate_corpus([doc, doc])
    assert any(v.rule == "unique within corpus" for v in violations)


def test_fixture_corpus_is_valid(corpus_docs):
    assert validate_corpus(list(corpus_docs)) == []
