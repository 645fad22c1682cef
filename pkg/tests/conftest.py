import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest

from nabella.session import Session

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


@pytest.fixture
def corpus_dir():
    return os.path.abspath(CORPUS)


@pytest.fixture
def stlc_session(corpus_dir):
    s = Session(base_dir=corpus_dir)
    s.execute('Specification "stlc.sig".')
    return s
