import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from semdis.core import Vocabulary, build_network  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "data")


def pytest_addoption(parser):
    group = parser.getgroup("semdis")
    group.addoption("--fa-norms", default=None, help="free-association norms TSV (cue, target, frequency)")
    group.addoption("--fp-norms", default=None, help="feature-production norms TSV (concept, feature, frequency)")


@pytest.fixture
def data_dir():
    return DATA


def tokens(n):
    return [f"w{i:03d}" for i in range(n)]


def undirected_from_pairs(n, pairs, weights=None):
    vocab = Vocabulary(tokens(n))
    triples = []
    for k, (i, j) in enumerate(pairs):
        w = 1.0 if weights is None else weights[k]
        triples.append((vocab[i], vocab[j], w))
    return build_network(vocab, triples, directed=False)


def random_graph(rng, n, p):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return pairs


def random_substochastic(rng, n, dangling_frac=0.2, density=0.3):
    a = rng.random((n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(a, 0.0)
    dead = rng.random(n) < dangling_frac
    a[dead] = 0.0
    s = a.sum(axis=1, keepdims=True)
    return np.divide(a, s, out=np.zeros_like(a), where=s > 0)


def random_directed_network(rng, n, density=0.3):
    vocab = Vocabulary(tokens(n))
    triples = [
        (vocab[i], vocab[j], float(rng.integers(1, 20)))
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < density
    ]
    return build_network(vocab, triples, directed=True)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
