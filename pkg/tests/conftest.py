import pathlib

import pytest

from citimpact import load_corpus

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def demo_corpus_path():
    return FIXTURES / "demo_corpus.csv"


@pytest.fixture(scope="session")
def demo_corpus(demo_corpus_path):
    return load_corpus(demo_corpus_path)


# Mid-rule percentile values implied by the demo fixture's tie bands,
# repeated per class count (top class first: 3,3,1,3,6,7 and 0,5,1,10,14,35).
PI1_MIDS = [99.5] * 3 + [97.0] * 3 + [92.5] * 1 + [82.5] * 3 + [62.5] * 6 + [25.0] * 7
PI2_MIDS = [97.0] * 5 + [92.5] * 1 + [82.5] * 10 + [62.5] * 14 + [25.0] * 35


@pytest.fixture(scope="session")
def pi1_mids():
    return list(PI1_MIDS)


@pytest.fixture(scope="session")
def pi2_mids():
    return list(PI2_MIDS)
