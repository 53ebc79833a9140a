"""Statistical descriptors of weighted networks.

All topological measures (clustering, path lengths, assortativity) work on
the binarized graph: any positive weight is an edge and self-loops are
ignored. Directed inputs are symmetrized with the ``max`` rule first.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from .core import symmetrize
from .errors import EmptyInput, NoEdges

# dense products are faster than sparse ones above this edge density
_DENSE_THRESHOLD = 0.05
_PATH_CHUNK = 256


def _undirected(net):
    return symmetrize(net, "max") if net.directed else net


def _binary_adjacency(net):
    a = _undirected(net).matrix.copy()
    a.setdiag(0)
    a.eliminate_zeros()
    a.data[:] = 1.0
    return a


def strength_and_degree(net):
    """Per-node degree ``k`` (int array) and strength ``s`` (float array).

    Strength is the sum of incident weights, accumulated with ``math.fsum``
    so the result does not depend on storage order.
    """
    m = _undirected(net).matrix
    n = net.n
    k = np.zeros(n, dtype=np.int64)
    s = np.zeros(n, dtype=np.float64)
    for i in range(n):
        lo, hi = m.indptr[i], m.indptr[i + 1]
        cols = m.indices[lo:hi]
        k[i] = np.count_nonzero(cols != i)
        s[i] = math.fsum(m.data[lo:hi])
    return k, s


def triangle_counts(adj):
    """Number of edges among the neighbours of each node (``E_i``)."""
    n = adj.shape[0]
    density = adj.nnz / max(n * n, 1)
    if density > _DENSE_THRESHOLD:
        a = adj.toarray()
        paths = (a @ a) * a
        return np.rint(paths.sum(axis=1) / 2.0).astype(np.int64)
    paths = (adj @ adj).multiply(adj)
    return np.rint(np.asarray(paths.sum(axis=1)).ravel() / 2.0).astype(np.int64)


def clustering(net):
    """Local clustering ``C_i = 2 E_i / (k_i (k_i - 1))`` and their mean.

    Nodes with fewer than two neighbours get ``C_i = 0`` and still count
    towards the average.
    """
    adj = _binary_adjacency(net)
    k = np.diff(adj.indptr).astype(np.float64)
    e = triangle_counts(adj).astype(np.float64)
    c = np.zeros(net.n)
    mask = k >= 2
    c[mask] = 2.0 * e[mask] / (k[mask] * (k[mask] - 1.0))
    return c, math.fsum(c) / net.n


def path_stats(net):
    """Average hop distance ``L``, diameter ``D`` and number of components.

    Distances are counted over ordered pairs ``i != j`` that can reach each
    other; unreachable pairs are left out of both ``L`` and ``D``.
    """
    adj = _binary_adjacency(net)
    if adj.nnz == 0:
        raise NoEdges("path statistics need at least one edge")
    ncomp, _ = csgraph.connected_components(adj, directed=False)
    total, pairs, diameter = 0, 0, 0
    for lo in range(0, net.n, _PATH_CHUNK):
        idx = np.arange(lo, min(lo + _PATH_CHUNK, net.n))
        dist = csgraph.shortest_path(adj, method="D", directed=False, unweighted=True, indices=idx)
        finite = np.isfinite(dist)
        finite[np.arange(idx.size), idx] = False
        hops = dist[finite].astype(np.int64)
        total += int(hops.sum())
        pairs += hops.size
        if hops.size:
            diameter = max(diameter, int(hops.max()))
    return total / pairs, diameter, int(ncomp)


def assortativity(net):
    """Degree assortativity: Pearson correlation of degrees at edge ends.

    Each undirected edge contributes both orientations. Returns ``None`` when
    the degree variance over edge ends is zero (regular graphs, for example).
    """
    adj = _binary_adjacency(net)
    if adj.nnz == 0:
        raise NoEdges("assortativity needs at least one edge")
    k = np.diff(adj.indptr).astype(np.float64)
    coo = adj.tocoo()
    x, y = k[coo.row], k[coo.col]
    xc, yc = x - x.mean(), y - y.mean()
    sxx, syy = math.fsum(xc * xc), math.fsum(yc * yc)
    if sxx == 0.0 or syy == 0.0:
        return None
    return math.fsum(xc * yc) / math.sqrt(sxx * syy)


def distribution_points(values, mode="survival"):
    """Cumulative distribution evaluated at each distinct value.

    ``survival`` gives the fraction of values ``>= x``; ``below`` gives the
    fraction ``< x``.
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    if v.size == 0:
        raise EmptyInput("distribution of an empty sample")
    if mode not in ("survival", "below"):
        raise ValueError("mode must be 'survival' or 'below'")
    xs = np.unique(v)
    below = np.searchsorted(v, xs, side="left")
    if mode == "below":
        frac = below / v.size
    else:
        frac = (v.size - below) / v.size
    return [(float(x), float(f)) for x, f in zip(xs, frac)]


TABLE_COLUMNS = ("N", "mean_strength", "L", "D", "C", "r")


@dataclass(frozen=True)
class DescriptorReport:
    n: int
    edge_count: int
    mean_degree: float
    mean_strength: float
    avg_path_length: float | None
    diameter: int | None
    avg_clustering: float
    assortativity: float | None
    component_count: int
    degree: np.ndarray = field(repr=False)
    strength: np.ndarray = field(repr=False)
    local_clustering: np.ndarray = field(repr=False)

    def table_row(self):
        return {
            "N": self.n,
            "mean_strength": self.mean_strength,
            "L": self.avg_path_length,
            "D": self.diameter,
            "C": self.avg_clustering,
            "r": self.assortativity,
        }

    def to_dict(self, per_node=False, tokens=None):
        out = dict(self.table_row())
        out.update(
            edges=self.edge_count,
            mean_degree=self.mean_degree,
            component_count=self.component_count,
        )
        if per_node:
            names = tokens if tokens is not None else range(self.n)
            out["per_node"] = [
                {"node": t, "k": int(k), "s": float(s), "C": float(c)}
                for t, k, s, c in zip(names, self.degree, self.strength, self.local_clustering)
            ]
        return out

    def to_json(self, per_node=False, tokens=None):
        return json.dumps(self.to_dict(per_node, tokens), indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        row = self.table_row()
        w.writerow(["NA" if row[c] is None else repr(row[c]) for c in TABLE_COLUMNS])
        return buf.getvalue()


def describe(net):
    """Compute every descriptor of ``net`` in one report."""
    k, s = strength_and_degree(net)
    c_i, c = clustering(net)
    n_edges = int(k.sum()) // 2
    if n_edges:
        length, diameter, ncomp = path_stats(net)
        r = assortativity(net)
    else:
        length = diameter = r = None
        ncomp = net.n
    return DescriptorReport(
        n=net.n,
        edge_count=n_edges,
        mean_degree=2.0 * n_edges / net.n,
        mean_strength=math.fsum(s) / net.n,
        avg_path_length=length,
        diameter=diameter,
        avg_clustering=c,
        assortativity=r,
        component_count=ncomp,
        degree=k,
        strength=s,
        local_clustering=c_i,
    )
