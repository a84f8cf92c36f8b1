import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_corpus():
    from titlesmith.corpus import iter_documents

    return list(iter_documents(FIXTURES / "corpus.jsonl"))


@pytest.fixture(scope="session")
def dict_corpus():
    from titlesmith.corpus import iter_documents

    return list(iter_documents(FIXTURES / "dict_corpus.jsonl"))


@pytest.fixture(scope="session")
def growth_corpus():
    from titlesmith.corpus import iter_documents

    return list(iter_documents(FIXTURES / "growth_corpus.jsonl"))
