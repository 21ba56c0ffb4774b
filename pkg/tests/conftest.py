import pathlib

import pytest

from admmdec.code_graph import load_alist

CODES = pathlib.Path(__file__).resolve().parent.parent / "codes"

HAMMING_PATH = CODES / "hamming_7_4.alist"
TANNER_PATH = CODES / "tanner_155_64.alist"


@pytest.fixture(scope="session")
def hamming():
    return load_alist(HAMMING_PATH)


@pytest.fixture(scope="session")
def tanner():
    return load_alist(TANNER_PATH)
