"""Vocabulary and weighted network types, plus the canonical network file format.

A :class:`WeightedNetwork` stores its weights in an immutable
``scipy.sparse.csr_matrix``. Undirected networks are stored with both
orientations, so the matrix is symmetric.
"""

import io
import math
import os

import numpy as np
import scipy.sparse as sp

from .errors import (
    DuplicateEdge,
    EmptyVocabulary,
    MalformedLine,
    NonPositiveWeight,
    SelfLoop,
    UnknownToken,
)
from .tsv import format_float, parse_weight, read_lines, split_record

NETWORK_MAGIC = "# semdis-network v1"

DUP_POLICIES = ("error", "sum")
SYMMETRIZE_RULES = ("max", "sum", "mean")


def normalize_token(token):
    """Lowercase, trim, and collapse internal whitespace to single spaces."""
    return " ".join(str(token).split()).lower()


class Vocabulary:
    """Ordered bijection between normalized word tokens and ``0..N-1``."""

    __slots__ = ("_tokens", "_index")

    def __init__(self, tokens):
        normalized = tuple(normalize_token(t) for t in tokens)
        if not normalized:
            raise EmptyVocabulary("vocabulary must contain at least one token")
        index = {}
        for i, tok in enumerate(normalized):
            if not tok:
                raise EmptyVocabulary("empty token after normalization")
            if tok in index:
                raise ValueError(f"duplicate token {tok!r}")
            index[tok] = i
        self._tokens = normalized
        self._index = index

    @classmethod
    def from_iterable(cls, tokens):
        """Build a vocabulary in first-appearance order, dropping repeats."""
        seen = {}
        for t in tokens:
            seen.setdefault(normalize_token(t), None)
        return cls(seen)

    @property
    def tokens(self):
        return self._tokens

    def index(self, token):
        try:
            return self._index[normalize_token(token)]
        except KeyError:
            raise UnknownToken(f"unknown token {token!r}") from None

    def __len__(self):
        return len(self._tokens)

    def __iter__(self):
        return iter(self._tokens)

    def __getitem__(self, i):
        return self._tokens[i]

    def __contains__(self, token):
        return normalize_token(token) in self._index

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._tokens == other._tokens

    def __hash__(self):
        return hash(self._tokens)

    def __repr__(self):
        head = ", ".join(self._tokens[:5])
        more = ", ..." if len(self) > 5 else ""
        return f"Vocabulary([{head}{more}], N={len(self)})"


def _freeze(matrix):
    for arr in (matrix.data, matrix.indices, matrix.indptr):
        arr.flags.writeable = False
    return matrix


class WeightedNetwork:
    """Sparse weighted graph over a :class:`Vocabulary`.

    Parameters
    ----------
    vocab : Vocabulary
    matrix : array_like or sparse matrix, shape (N, N)
        ``matrix[i, j]`` is the weight of arc ``i -> j``; zeros mean absent.
    directed : bool
    allow_self_loops : bool, optional
        Self-loops are rejected unless this is set.
    """

    __slots__ = ("vocab", "matrix", "directed", "allow_self_loops")

    def __init__(self, vocab, matrix, directed, allow_self_loops=False):
        n = len(vocab)
        m = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
        if m.shape != (n, n):
            raise ValueError(f"matrix shape {m.shape} does not match N={n}")
        m.eliminate_zeros()
        m.sum_duplicates()
        m.sort_indices()
        if m.nnz and not np.all(np.isfinite(m.data)):
            raise ValueError("weights must be finite")
        if m.nnz and m.data.min() <= 0:
            raise NonPositiveWeight("weights must be > 0")
        if not allow_self_loops and m.diagonal().any():
            raise SelfLoop("self-loops are not permitted")
        if not directed and (m != m.T).nnz:
            raise ValueError("undirected network requires a symmetric matrix")
        self.vocab = vocab
        self.matrix = _freeze(m)
        self.directed = bool(directed)
        self.allow_self_loops = bool(allow_self_loops)

    @property
    def n(self):
        return len(self.vocab)

    @property
    def edge_count(self):
        """Number of arcs (directed) or unordered edges (undirected)."""
        if self.directed:
            return self.matrix.nnz
        loops = int(np.count_nonzero(self.matrix.diagonal()))
        return (self.matrix.nnz - loops) // 2 + loops

    def weight(self, i, j):
        return float(self.matrix[i, j])

    def neighbors(self, i):
        """Return ``(indices, weights)`` of the out-neighbours of node ``i``."""
        lo, hi = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return self.matrix.indices[lo:hi], self.matrix.data[lo:hi]

    def edges(self):
        """Yield ``(i, j, w)``; undirected edges are yielded once with ``i <= j``."""
        m = self.matrix
        for i in range(self.n):
            lo, hi = m.indptr[i], m.indptr[i + 1]
            for j, w in zip(m.indices[lo:hi], m.data[lo:hi]):
                if self.directed or i <= j:
                    yield i, int(j), float(w)

    def token_edges(self):
        toks = self.vocab.tokens
        return [(toks[i], toks[j], w) for i, j, w in self.edges()]

    def to_dense(self):
        return self.matrix.toarray()

    def __eq__(self, other):
        if not isinstance(other, WeightedNetwork):
            return NotImplemented
        return (
            self.vocab == other.vocab
            and self.directed == other.directed
            and (self.matrix != other.matrix).nnz == 0
        )

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"WeightedNetwork(N={self.n}, edges={self.edge_count}, {kind})"


def _from_pairs(vocab, pairs, directed, allow_self_loops):
    n = len(vocab)
    if pairs:
        rows, cols = zip(*pairs)
        vals = list(pairs.values())
    else:
        rows, cols, vals = (), (), ()
    rows, cols = np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not directed:
        off = rows != cols
        rows, cols, vals = (
            np.concatenate([rows, cols[off]]),
            np.concatenate([cols, rows[off]]),
            np.concatenate([vals, vals[off]]),
        )
    m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n))
    return WeightedNetwork(vocab, m, directed, allow_self_loops=allow_self_loops)


def build_network(vocab, edge_triples, directed, dup_policy="error", allow_self_loops=False):
    """Build a network from ``(source, target, weight)`` token triples.

    For undirected networks ``(a, b)`` and ``(b, a)`` name the same edge, so
    supplying both counts as a duplicate.
    """
    if dup_policy not in DUP_POLICIES:
        raise ValueError(f"dup_policy must be one of {DUP_POLICIES}")
    pairs = {}
    for src, dst, w in edge_triples:
        i, j = vocab.index(src), vocab.index(dst)
        w = float(w)
        if not math.isfinite(w):
            raise ValueError(f"non-finite weight on {src!r} -> {dst!r}")
        if w <= 0:
            raise NonPositiveWeight(f"weight must be > 0 on {src!r} -> {dst!r}, got {w}")
        if i == j and not allow_self_loops:
            raise SelfLoop(f"self-loop on {src!r}")
        key = (i, j) if directed or i <= j else (j, i)
        if key in pairs:
            if dup_policy == "error":
                raise DuplicateEdge(f"duplicate edge {src!r} -> {dst!r}")
            pairs[key] += w
        else:
            pairs[key] = w
    return _from_pairs(vocab, pairs, directed, allow_self_loops)


def symmetrize(net, rule="max"):
    """Collapse a directed network into an undirected one.

    ``max`` and ``sum`` treat a missing direction as weight 0; ``mean``
    averages only the directions that are present.
    """
    if rule not in SYMMETRIZE_RULES:
        raise ValueError(f"rule must be one of {SYMMETRIZE_RULES}")
    if not net.directed:
        return net
    a = net.matrix
    at = a.T.tocsr()
    if rule == "max":
        m = a.maximum(at)
    elif rule == "sum":
        m = a + at
    else:
        total = a + at
        both = a.multiply(at) > 0
        m = total - 0.5 * total.multiply(both)
    return WeightedNetwork(net.vocab, m, directed=False, allow_self_loops=net.allow_self_loops)


def induced_subnetwork(net, keep):
    """Restrict ``net`` to the tokens in ``keep``, preserving vocabulary order."""
    wanted = set()
    for tok in keep:
        if tok not in net.vocab:
            raise UnknownToken(f"unknown token {tok!r}")
        wanted.add(normalize_token(tok))
    idx = [i for i, tok in enumerate(net.vocab) if tok in wanted]
    vocab = Vocabulary([net.vocab[i] for i in idx])
    m = net.matrix[idx][:, idx]
    return WeightedNetwork(vocab, m, net.directed, allow_self_loops=net.allow_self_loops)


# -- canonical file format -------------------------------------------------


def format_network(net):
    """Render ``net`` in the canonical TSV network format."""
    buf = io.StringIO()
    buf.write(NETWORK_MAGIC + "\n")
    buf.write(f"# directed={'true' if net.directed else 'false'}\n")
    for tok in net.vocab:
        buf.write(f"# node\t{tok}\n")
    toks = net.vocab.tokens
    for i, j, w in net.edges():
        buf.write(f"{toks[i]}\t{toks[j]}\t{format_float(w)}\n")
    return buf.getvalue()


def write_network(net, path):
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_network(net))


def read_triples(path, dup_policy="error"):
    """Read ``source<TAB>target<TAB>weight`` lines.

    Returns ``(triples, header)`` where ``header`` holds the ``directed`` flag
    and declared node list if the file carries canonical header comments.
    Duplicate pairs are detected here so errors can report a line number.
    """
    triples = {}
    header = {"directed": None, "nodes": []}
    for lineno, text in read_lines(path):
        if not text.strip():
            continue
        if text.startswith("#"):
            body = text[1:].strip()
            if body.startswith("directed="):
                flag = body.split("=", 1)[1].strip().lower()
                if flag not in ("true", "false"):
                    raise MalformedLine(f"bad directed flag {flag!r}", line=lineno)
                header["directed"] = flag == "true"
            elif body.startswith("node\t"):
                header["nodes"].append(text.split("\t", 1)[1])
            continue
        src, dst, wtext = split_record(text, lineno)
        src, dst = normalize_token(src), normalize_token(dst)
        if not src or not dst:
            raise MalformedLine("empty token", line=lineno)
        w = parse_weight(wtext, lineno)
        key = (src, dst)
        if key in triples:
            if dup_policy == "error":
                raise DuplicateEdge(f"duplicate pair {src!r} -> {dst!r}", line=lineno)
            triples[key] += w
        else:
            triples[key] = w
    return [(s, d, w) for (s, d), w in triples.items()], header


def read_network(path, directed=None, dup_policy="error"):
    """Parse a canonical network file.

    ``directed`` overrides the file's header; one of the two must be given.
    """
    triples, header = read_triples(path, dup_policy=dup_policy)
    if directed is None:
        directed = header["directed"]
    if directed is None:
        raise MalformedLine("missing '# directed=' header")
    if header["nodes"]:
        vocab = Vocabulary(header["nodes"])
    else:
        vocab = Vocabulary.from_iterable(t for s, d, _ in triples for t in (s, d))
    policy = dup_policy if directed else "error"
    if not directed:
        # both orientations of one undirected edge may appear in hand-written files
        merged = {}
        for s, d, w in triples:
            key = (s, d) if vocab.index(s) <= vocab.index(d) else (d, s)
            if key in merged and merged[key] != w:
                raise DuplicateEdge(f"conflicting weights for edge {s!r} -- {d!r}")
            merged[key] = w
        triples = [(s, d, w) for (s, d), w in merged.items()]
    return build_network(vocab, triples, directed, dup_policy=policy)
