"""Random Inheritance Model.

Random walks on a free-association network pass each word's canonical basis
vector on to the walker's start word. Averaged over many walks, the vector
of word ``i`` converges to row ``i`` of

    T = P + P^2 + ... + P^S

where ``P`` is the row-normalized association matrix. Pairwise cosines of
the rows of ``T`` give the synthetic feature-similarity network.

Both routes are implemented: :func:`power_sum` computes ``T`` in closed form
and :func:`mc_inheritance` simulates the walks directly.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .core import Vocabulary, WeightedNetwork
from .errors import DanglingNode, EmptyNetwork, InvalidRunCount

DANGLING_POLICIES = ("error", "drop", "keep_zero")
DEFAULT_STEPS = 4


@dataclass(frozen=True)
class TransitionMatrix:
    vocab: Vocabulary
    matrix: np.ndarray

    @property
    def n(self):
        return len(self.vocab)

    def dangling(self):
        return np.flatnonzero(~self.matrix.any(axis=1))


@dataclass(frozen=True)
class AccumulatedTransition:
    vocab: Vocabulary
    steps: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class SimilarityNetwork:
    """Dense cosine-similarity matrix and the undirected network it induces.

    The network keeps every off-diagonal entry strictly above ``threshold``.
    It is built lazily because at full-norm scale it can hold tens of
    millions of edges.
    """

    vocab: Vocabulary
    matrix: np.ndarray
    threshold: float = 0.0

    @cached_property
    def network(self):
        fs = np.where(self.matrix > self.threshold, self.matrix, 0.0)
        np.fill_diagonal(fs, 0.0)
        return WeightedNetwork(self.vocab, sp.csr_matrix(fs), directed=False)

    @property
    def n(self):
        return len(self.vocab)


def _readonly(a):
    a.flags.writeable = False
    return a


def row_normalize(net, dangling="keep_zero"):
    """Transition matrix ``P_ij = a_ij / sum_j a_ij``.

    Rows without outgoing weight are handled by ``dangling``:

    ``error``
        raise :class:`DanglingNode`.
    ``drop``
        remove such nodes and renormalize, repeating until no row is empty.
    ``keep_zero``
        keep the all-zero row (the chain becomes substochastic).
    """
    if dangling not in DANGLING_POLICIES:
        raise ValueError(f"dangling must be one of {DANGLING_POLICIES}")
    vocab = net.vocab
    a = net.to_dense()
    if not a.any():
        if dangling == "keep_zero":
            return TransitionMatrix(vocab, _readonly(np.zeros_like(a)))
        raise EmptyNetwork("network has no arcs")
    # keep/drop order is the vocabulary order, so layouts stay deterministic
    keep = np.arange(a.shape[0])
    while True:
        sums = a.sum(axis=1)
        empty = sums == 0
        if not empty.any() or dangling == "keep_zero":
            break
        if dangling == "error":
            names = ", ".join(vocab[int(i)] for i in np.flatnonzero(empty)[:5])
            raise DanglingNode(f"{int(empty.sum())} node(s) without out-arcs: {names}")
        keep = keep[~empty]
        a = a[~empty][:, ~empty]
        if a.size == 0:
            raise EmptyNetwork("every node was dropped as dangling")
    if keep.size != len(vocab):
        vocab = Vocabulary([vocab[int(i)] for i in keep])
    p = np.zeros_like(a)
    nz = sums > 0
    p[nz] = a[nz] / sums[nz, None]
    return TransitionMatrix(vocab, _readonly(p))


def _as_array(p):
    return p.matrix if isinstance(p, TransitionMatrix) else np.asarray(p, dtype=np.float64)


def power_sum(p, steps=DEFAULT_STEPS):
    """Accumulate ``P + P^2 + ... + P^steps`` by multiply-and-add."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    m = _as_array(p)
    term = m.copy()
    total = m.copy()
    for _ in range(steps - 1):
        term = term @ m
        total += term
    vocab = p.vocab if isinstance(p, TransitionMatrix) else None
    return AccumulatedTransition(vocab, steps, _readonly(total))


def cosine_matrix(t, include_identity=False):
    """Pairwise cosines of the rows of ``t``.

    Rows with zero norm have similarity 0 with everything, themselves
    included. The result is exactly symmetric, clipped to ``[0, 1]`` and has
    a unit diagonal on every nonzero row.
    """
    t = np.array(t, dtype=np.float64)
    if include_identity:
        t[np.diag_indices_from(t)] += 1.0
    norms = np.linalg.norm(t, axis=1)
    nz = norms > 0
    u = np.zeros_like(t)
    u[nz] = t[nz] / norms[nz, None]
    fs = u @ u.T
    upper = np.triu(fs, 1)
    fs = upper + upper.T
    np.clip(fs, 0.0, 1.0, out=fs)
    fs[np.diag_indices_from(fs)] = nz.astype(np.float64)
    return fs


def cosine_project(t, include_identity=False, threshold=0.0):
    """Project an accumulated transition onto a cosine-similarity network."""
    mat = t.matrix if isinstance(t, AccumulatedTransition) else t
    vocab = t.vocab if isinstance(t, AccumulatedTransition) else None
    if vocab is None:
        vocab = Vocabulary(str(i) for i in range(mat.shape[0]))
    fs = cosine_matrix(mat, include_identity=include_identity)
    return SimilarityNetwork(vocab, _readonly(fs), threshold=threshold)


def convergence_profile(p, max_steps, metric="max_abs", level="fs", include_identity=False, tol=1e-4):
    """Change between successive step counts, for ``S = 2..max_steps``.

    ``level="fs"`` measures the cosine matrix; ``level="t"`` measures the raw
    power sum, which grows without bound when ``P`` is strictly stochastic.
    ``metric="max_abs"`` reports the largest elementwise change and
    ``metric="hamming"`` the fraction of entries that moved by more than
    ``tol``.
    """
    if max_steps < 2:
        raise ValueError("max_steps must be >= 2")
    if metric not in ("max_abs", "hamming"):
        raise ValueError("metric must be 'max_abs' or 'hamming'")
    if level not in ("fs", "t"):
        raise ValueError("level must be 'fs' or 't'")
    m = _as_array(p)
    term = m.copy()
    total = m.copy()

    def view(x):
        return cosine_matrix(x, include_identity) if level == "fs" else x.copy()

    prev = view(total)
    out = []
    for s in range(2, max_steps + 1):
        term = term @ m
        total += term
        cur = view(total)
        diff = np.abs(cur - prev)
        if metric == "max_abs":
            delta = float(diff.max()) if diff.size else 0.0
        else:
            delta = float(np.count_nonzero(diff > tol)) / diff.size
        out.append((s, delta))
        prev = cur
    return out


def _cumulative_rows(p):
    cum = np.cumsum(p, axis=1)
    sums = cum[:, -1]
    for i in np.flatnonzero(np.abs(sums - 1.0) < 1e-9):
        # pin the last reachable state at exactly 1 so u < 1 never falls off the row
        last = np.flatnonzero(p[i])[-1]
        cum[i, last:] = 1.0
    return cum


def _walk_counts(cum, start, steps, runs, seed):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(start,))))
    n = cum.shape[0]
    counts = np.zeros(n, dtype=np.int64)
    pos = np.full(runs, start, dtype=np.int64)
    for _ in range(steps):
        if pos.size == 0:
            break
        u = rng.random(pos.size)
        nxt = np.empty_like(pos)
        order = np.argsort(pos, kind="stable")
        sorted_pos = pos[order]
        bounds = np.flatnonzero(np.diff(sorted_pos)) + 1
        for group in np.split(order, bounds):
            row = cum[pos[group[0]]]
            nxt[group] = np.searchsorted(row, u[group], side="right")
        alive = nxt < n
        pos = nxt[alive]
        counts += np.bincount(pos, minlength=n)
    return counts


def mc_inheritance(source, steps=DEFAULT_STEPS, runs=10_000, seed=0, threads=1, dangling="keep_zero"):
    """Monte Carlo estimate of the power sum by simulating inheritance walks.

    From every start node ``runs`` independent walks of ``steps`` steps are
    taken. Each visited node passes on its canonical basis vector, so the
    estimate for row ``i`` is the mean visit count of every node. Walks end
    early at dangling nodes.

    ``source`` is a network (normalized with ``dangling``) or a
    :class:`TransitionMatrix`. Each start node draws from its own substream
    of ``seed``, so the result does not depend on ``threads``.
    """
    if not isinstance(runs, (int, np.integer)) or runs < 1:
        raise InvalidRunCount(f"runs must be a positive integer, got {runs!r}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if isinstance(source, WeightedNetwork):
        source = row_normalize(source, dangling=dangling)
    p = _as_array(source)
    vocab = source.vocab if isinstance(source, TransitionMatrix) else None
    cum = _cumulative_rows(p)
    n = p.shape[0]

    def one(i):
        return _walk_counts(cum, i, steps, int(runs), seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, range(n)))
    else:
        rows = [one(i) for i in range(n)]
    est = np.vstack(rows).astype(np.float64) / runs if rows else np.zeros((0, 0))
    return AccumulatedTransition(vocab, steps, _readonly(est))


@dataclass(frozen=True)
class RimConfig:
    dangling: str = "keep_zero"
    include_identity: bool = False
    threshold: float = 0.0


def rim_pipeline(fa, steps=DEFAULT_STEPS, config=None):
    """Synthetic feature-similarity network from a directed association network."""
    config = config or RimConfig()
    p = row_normalize(fa, dangling=config.dangling)
    t = power_sum(p, steps)
    return cosine_project(t, include_identity=config.include_identity, threshold=config.threshold)


def restrict(sim, keep):
    """Sub-matrix of a similarity network over the tokens in ``keep``."""
    wanted = {sim.vocab.index(t) for t in keep}
    idx = np.array(sorted(wanted), dtype=np.int64)
    vocab = Vocabulary([sim.vocab[int(i)] for i in idx])
    return SimilarityNetwork(vocab, _readonly(sim.matrix[np.ix_(idx, idx)].copy()), sim.threshold)
