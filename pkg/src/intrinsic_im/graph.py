"""Directed influence graph with per-edge weights and per-node intrinsic
activation probabilities."""

from __future__ import annotations

import numpy as np

from .exceptions import MissingEdge, NegativeWeight, ValidationError, ZeroRow

ROW_SUM_TOL = 1e-9


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


class InfluenceGraph:
    """Immutable directed graph for IC / IC-Int diffusion.

    Edge ``(u, v)`` means *u can influence v*; its weight is the probability
    that an active ``u`` activates ``v`` (``w[v][u]`` in row-of-target
    notation). Nodes are dense integers ``0..n_nodes-1``; ``labels`` maps them
    to external names.

    Parameters
    ----------
    n_nodes : int
    src, dst : array-like of int
        Edge endpoints. Parallel edges are merged by summing their weights.
    weight : array-like of float
        Nonnegative edge weights. Raw (unnormalized) weights above 1 are
        allowed here; diffusion code checks for probabilities separately.
    alpha : float or array-like of float
        Intrinsic activation probability per node.
    labels : sequence of str, optional
        Defaults to ``str(i)``.
    """

    def __init__(self, n_nodes, src, dst, weight, alpha=0.0, labels=None):
        n_nodes = int(n_nodes)
        if n_nodes < 1:
            raise ValidationError("graph must have at least one node")
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        weight = np.asarray(weight, dtype=np.float64).reshape(-1)
        if not (src.size == dst.size == weight.size):
            raise ValidationError("src, dst and weight must have equal length")
        if src.size and (src.min() < 0 or dst.min() < 0
                         or src.max() >= n_nodes or dst.max() >= n_nodes):
            raise ValidationError("edge endpoint out of range")
        if np.any(src == dst):
            raise ValidationError("self-loops are not allowed")
        if not np.all(np.isfinite(weight)):
            raise ValidationError("edge weights must be finite")
        if np.any(weight < 0):
            raise NegativeWeight("edge weights must be nonnegative")

        alpha = np.broadcast_to(np.asarray(alpha, dtype=np.float64), (n_nodes,))
        if not np.all(np.isfinite(alpha)) or np.any(alpha < 0) or np.any(alpha > 1):
            raise ValidationError("alpha values must lie in [0, 1]")

        # merge parallel edges, canonical (src, dst) order
        key = src * n_nodes + dst
        uniq, inv = np.unique(key, return_inverse=True)
        merged = np.zeros(uniq.size, dtype=np.float64)
        np.add.at(merged, inv, weight)

        self._n = n_nodes
        self.src = _frozen(uniq // n_nodes, np.int64)
        self.dst = _frozen(uniq % n_nodes, np.int64)
        self.weight = _frozen(merged, np.float64)
        self.alpha = _frozen(alpha, np.float64)
        if labels is None:
            labels = [str(i) for i in range(n_nodes)]
        labels = [str(x) for x in labels]
        if len(labels) != n_nodes:
            raise ValidationError("labels must have one entry per node")
        if len(set(labels)) != n_nodes:
            raise ValidationError("node labels must be unique")
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

        self.out_ptr = _frozen(
            np.concatenate([[0], np.cumsum(np.bincount(self.src, minlength=n_nodes))]),
            np.int64,
        )
        order = np.argsort(self.dst, kind="stable")
        self.in_edges = _frozen(order, np.int64)
        self.in_ptr = _frozen(
            np.concatenate([[0], np.cumsum(np.bincount(self.dst, minlength=n_nodes))]),
            np.int64,
        )

    @classmethod
    def from_edges(cls, edges, alpha=0.0, n_nodes=None, labels=None):
        """Build from an iterable of ``(u, v, w)`` integer triples."""
        edges = list(edges)
        if n_nodes is None:
            n_nodes = 1 + max((max(u, v) for u, v, _ in edges), default=0)
        if edges:
            src, dst, w = zip(*edges)
        else:
            src = dst = w = ()
        return cls(n_nodes, src, dst, w, alpha=alpha, labels=labels)

    @property
    def n_nodes(self):
        return self._n

    @property
    def n_edges(self):
        return int(self.src.size)

    def __len__(self):
        return self._n

    def __repr__(self):
        return f"InfluenceGraph(n_nodes={self._n}, n_edges={self.n_edges})"

    def node_id(self, node):
        """Resolve a dense id or an external label to a dense id."""
        if isinstance(node, (int, np.integer)) and not isinstance(node, bool):
            if 0 <= node < self._n:
                return int(node)
            raise ValidationError(f"node id {node} out of range")
        try:
            return self._index[str(node)]
        except KeyError:
            raise ValidationError(f"unknown node {node!r}") from None

    def edge_index(self, u, v):
        u, v = self.node_id(u), self.node_id(v)
        lo, hi = self.out_ptr[u], self.out_ptr[u + 1]
        j = lo + np.searchsorted(self.dst[lo:hi], v)
        if j < hi and self.dst[j] == v:
            return int(j)
        raise MissingEdge(u, v)

    def out_degree(self):
        return np.diff(self.out_ptr)

    def in_degree(self):
        return np.diff(self.in_ptr)

    def in_weight_sums(self):
        return np.bincount(self.dst, weights=self.weight, minlength=self._n)

    def is_normalized(self, tol=ROW_SUM_TOL):
        """True when every node with in-edges has in-weights summing to 1."""
        sums = self.in_weight_sums()
        has_in = self.in_degree() > 0
        return bool(np.all(np.abs(sums[has_in] - 1.0) <= tol))

    def with_alpha(self, alpha):
        """Same topology and weights, new intrinsic activation probabilities."""
        return InfluenceGraph(self._n, self.src, self.dst, self.weight,
                              alpha=alpha, labels=self.labels)

    def with_weights(self, weight):
        return InfluenceGraph(self._n, self.src, self.dst, weight,
                              alpha=self.alpha, labels=self.labels)

    def weight_matrix(self):
        """Sparse ``W`` with ``W[v, u]`` = weight of edge ``u -> v``."""
        from scipy import sparse

        return sparse.csr_matrix(
            (self.weight, (self.dst, self.src)), shape=(self._n, self._n)
        )


def normalize_weighted_cascade(g):
    """Scale in-edge weights of every node to sum to one.

    Rows that already sum to one within ``ROW_SUM_TOL`` are left untouched,
    which makes the operation exactly idempotent. Nodes without in-edges keep
    an empty row.
    """
    if np.any(g.weight < 0):
        raise NegativeWeight("edge weights must be nonnegative")
    sums = g.in_weight_sums()
    has_in = g.in_degree() > 0
    zero = np.flatnonzero(has_in & (sums <= 0))
    if zero.size:
        raise ZeroRow(g.labels[zero[0]])
    done = np.abs(sums - 1.0) <= ROW_SUM_TOL
    scale = np.where(done | ~has_in, 1.0, sums)
    w = g.weight / scale[g.dst]
    return g.with_weights(w)


def effective_probabilities(g):
    """IC-Int edge probabilities ``(1 - alpha[dst]) * w`` for every edge."""
    return (1.0 - g.alpha[g.dst]) * g.weight


def effective_edge_probability(g, u, v):
    """Probability that active ``u`` activates ``v`` through influence."""
    j = g.edge_index(u, v)
    return float((1.0 - g.alpha[g.dst[j]]) * g.weight[j])


def dummy_transform(g):
    """Reduce IC-Int on ``g`` to plain IC on a graph with 2N nodes.

    Node ``i`` keeps its id; its dummy is ``i + N`` and owns a single edge
    ``i + N -> i`` with probability ``alpha[i]``. Original edges carry their
    effective probabilities. Alphas of the result are zero and are not used.
    """
    n = g.n_nodes
    idx = np.arange(n)
    src = np.concatenate([g.src, idx + n])
    dst = np.concatenate([g.dst, idx])
    w = np.concatenate([effective_probabilities(g), g.alpha])
    labels = list(g.labels) + [f"{lab}_D" for lab in g.labels]
    return InfluenceGraph(2 * n, src, dst, w, alpha=0.0, labels=labels)


def dummy_of(g, node):
    """Dense id of the dummy attached to ``node`` in ``dummy_transform(g)``."""
    return g.node_id(node) + g.n_nodes
