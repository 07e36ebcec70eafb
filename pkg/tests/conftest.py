import numpy as np
import pytest

from stylobench.corpus import Corpus, Document, Token, parse_tag


def make_doc(author, title, items):
    """items: (form, lemma, tag) triples, or bare strings used for all three."""
    toks = []
    for it in items:
        if isinstance(it, str):
            it = (it, it, "interp" if not it.isalnum() else "subst:sg")
        toks.append(Token(it[0], it[1], parse_tag(it[2])))
    return Document(author, title, tuple(toks))


@pytest.fixture
def toy_corpus():
    return Corpus((
        make_doc("prus", "lalka", ["a", "b", "a", "."]),
        make_doc("prus", "faraon", ["a", "c", "b", "b"]),
        make_doc("orzeszkowa", "marta", ["c", "c", "a", "."]),
        make_doc("orzeszkowa", "nadniemnem", ["b", "a", "c", "."]),
    ))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record_acceptance(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
