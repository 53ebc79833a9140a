"""Empirical similarity network from feature-production norms."""

import math
from collections import defaultdict

import numpy as np

from .rim import SimilarityNetwork


def fp_cosine_matrix(fm):
    """Dense matrix of pairwise cosines between concept feature vectors.

    Dot products and norms use ``math.fsum`` over the shared features, so
    each cosine is computed from exactly rounded sums.
    """
    n = len(fm.vocab)
    rows = [dict(zip(idx.tolist(), vals.tolist())) for idx, vals in (fm.row(i) for i in range(n))]
    sq = [math.fsum(v * v for v in r.values()) for r in rows]
    by_feature = defaultdict(list)
    for i, r in enumerate(rows):
        for f in r:
            by_feature[f].append(i)
    shared = defaultdict(set)
    for members in by_feature.values():
        for a in members:
            shared[a].update(members)

    cos = np.zeros((n, n))
    for i in range(n):
        ri = rows[i]
        for j in shared[i]:
            if j <= i:
                continue
            rj = rows[j]
            small, big = (ri, rj) if len(ri) <= len(rj) else (rj, ri)
            dot = math.fsum(v * big[f] for f, v in small.items() if f in big)
            c = min(dot / math.sqrt(sq[i] * sq[j]), 1.0)
            cos[i, j] = cos[j, i] = c
    np.fill_diagonal(cos, 1.0)
    return cos


def fp_cosine_network(fm, threshold=0.0):
    """Undirected network linking concepts whose feature vectors overlap.

    An edge exists wherever the cosine is strictly above ``threshold``
    (default 0, i.e. any shared feature) and carries the cosine as weight.
    """
    cos = fp_cosine_matrix(fm)
    cos.flags.writeable = False
    return SimilarityNetwork(fm.vocab, cos, threshold=threshold)
