import pytest

from corpusdesk.embed import LocalHashProvider
from corpusdesk.engine import Engine, embed_records
from corpusdesk.index import build_index
from corpusdesk.ingest import parse_corpus, source_files_for
from corpusdesk.store import CorpusStore
from pathlib import Path

FIXTURE_DIR = Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURE_DIR / "corpus"
GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def corpus_paths():
    return sorted(str(p) for p in CORPUS_DIR.glob("*.md"))


@pytest.fixture(scope="session")
def corpus_docs(corpus_paths):
    return parse_corpus(source_files_for(corpus_paths))


@pytest.fixture(scope="session")
def corpus_store(corpus_docs):
    return CorpusStore(corpus_docs)


@pytest.fixture(scope="session")
def provider():
    return LocalHashProvider(dim=256)


@pytest.fixture(scope="session")
def corpus_index(corpus_store, provider):
    vectors = embed_records(list(corpus_store.records()), provider)
    return build_index(vectors, mode="exact")


@pytest.fixture(scope="session")
def engine(corpus_docs, provider, corpus_index):
    return Engine(docs=corpus_docs, provider=provider, vector_index=corpus_index)
