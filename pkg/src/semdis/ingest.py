"""Readers for free-association and feature-production norms."""

import math

import numpy as np
import scipy.sparse as sp

from .core import Vocabulary, build_network, normalize_token, read_triples
from .errors import DuplicateFeature, EmptyConcept, EmptyIntersection, MalformedLine
from .tsv import parse_weight, read_lines, split_record


def parse_fa(path, dup_policy="sum"):
    """Read free-association norms as a directed network.

    Each data line is ``cue<TAB>target<TAB>frequency``. The vocabulary is the
    union of cues and targets in first-appearance order, so targets that are
    never cues become dangling rows. Repeated cue/target pairs are summed by
    default because separate norm files report separate participants.
    """
    triples, header = read_triples(path, dup_policy=dup_policy)
    if header["nodes"]:
        vocab = Vocabulary(header["nodes"])
    elif triples:
        vocab = Vocabulary.from_iterable(t for s, d, _ in triples for t in (s, d))
    else:
        raise MalformedLine(f"no association lines in {path}")
    return build_network(vocab, triples, directed=True, dup_policy="error")


class FeatureMatrix:
    """Concept x feature production-frequency matrix.

    ``values`` is a CSR matrix with one row per concept and one column per
    feature label; every row has at least one positive entry.
    """

    __slots__ = ("vocab", "features", "values")

    def __init__(self, vocab, features, values):
        values = sp.csr_matrix(values, dtype=np.float64, copy=True)
        values.eliminate_zeros()
        values.sort_indices()
        if values.shape != (len(vocab), len(features)):
            raise ValueError("values shape does not match vocabulary and features")
        if values.nnz and values.data.min() <= 0:
            raise ValueError("feature values must be > 0")
        empty = np.flatnonzero(np.diff(values.indptr) == 0)
        if empty.size:
            raise EmptyConcept(f"concept {vocab[int(empty[0])]!r} has no features")
        values.data.flags.writeable = False
        self.vocab = vocab
        self.features = tuple(features)
        self.values = values

    def row(self, i):
        """Return ``(feature_indices, values)`` for concept ``i``."""
        lo, hi = self.values.indptr[i], self.values.indptr[i + 1]
        return self.values.indices[lo:hi], self.values.data[lo:hi]

    def norm(self, i):
        _, vals = self.row(i)
        return math.sqrt(math.fsum(v * v for v in vals))

    def __repr__(self):
        return f"FeatureMatrix(concepts={len(self.vocab)}, features={len(self.features)})"


def parse_fp(path):
    """Read feature-production norms, one ``concept<TAB>feature<TAB>frequency`` per line."""
    concepts, features, entries = {}, {}, {}
    for lineno, text in read_lines(path):
        if not text.strip() or text.startswith("#"):
            continue
        concept, feature, wtext = split_record(text, lineno)
        concept = normalize_token(concept)
        feature = feature.strip()
        if not concept or not feature:
            raise MalformedLine("empty concept or feature", line=lineno)
        w = parse_weight(wtext, lineno)
        ci = concepts.setdefault(concept, len(concepts))
        fi = features.setdefault(feature, len(features))
        if (ci, fi) in entries:
            raise DuplicateFeature(f"duplicate feature {feature!r} for {concept!r}", line=lineno)
        entries[(ci, fi)] = w
    if not entries:
        raise EmptyConcept(f"no feature lines in {path}")
    (rows, cols), vals = zip(*entries), list(entries.values())
    values = sp.coo_matrix((vals, (rows, cols)), shape=(len(concepts), len(features)))
    return FeatureMatrix(Vocabulary(concepts), list(features), values)


def intersect_vocabulary(a, b):
    """Tokens present in both vocabularies (after normalization)."""
    common = {normalize_token(t) for t in a} & {normalize_token(t) for t in b}
    if not common:
        raise EmptyIntersection("the two vocabularies share no tokens")
    return common


def ordered_intersection(a, b):
    """Common tokens in the order they appear in ``a``."""
    common = intersect_vocabulary(a, b)
    return [t for t in (normalize_token(x) for x in a) if t in common]
