"""Graph builders: the 23-node organization tree, a power-law stand-in for
the large benchmark graphs, and small random graphs for exact oracles."""

import numpy as np

from .graph import InfluenceGraph, normalize_weighted_cascade

ORG_ALPHA_DIRECTOR = 0.95
ORG_ALPHA_OTHERS = 0.25


def org_tree(delta=0.0):
    """Director D, managers M1/M2 and ten employees under each manager.

    In-weights: D gets 0.5 from each manager; each manager gets 0.5 from D
    and 0.05 from each of its ten employees; employees get 1.0 from their
    manager. ``delta`` lowers alpha(D) and raises alpha(M1) by the same amount.
    """
    labels = ["D", "M1", "M2"] + [f"E{i}" for i in range(1, 21)]
    edges = [(0, 1, 0.5), (0, 2, 0.5), (1, 0, 0.5), (2, 0, 0.5)]
    for m, first in ((1, 3), (2, 13)):
        for e in range(first, first + 10):
            edges.append((m, e, 1.0))
            edges.append((e, m, 0.05))
    alpha = np.full(23, ORG_ALPHA_OTHERS)
    alpha[0] = ORG_ALPHA_DIRECTOR - delta
    alpha[1] = ORG_ALPHA_OTHERS + delta
    return InfluenceGraph.from_edges(edges, alpha=alpha, n_nodes=23, labels=labels)


def _pareto_weights(rng, n, exponent):
    # continuous Pareto(x_min=1) truncated at the natural cutoff n^(1/(γ-1))
    cutoff = n ** (1.0 / (exponent - 1.0))
    u = rng.random(n)
    a = 1.0 - cutoff ** (1.0 - exponent)
    return (1.0 - a * u) ** (-1.0 / (exponent - 1.0))


def power_law_graph(n_nodes=1000, mean_degree=11.0, exponent=2.0,
                    in_exponent=2.0, reciprocity=0.22, alpha=0.5,
                    random_state=0):
    """Directed follower-style graph with power-law out-degrees.

    Each node ``u`` draws an out-degree from a truncated power law (rescaled
    to ``mean_degree``) and picks that many distinct targets with
    probability proportional to a power-law in-degree propensity
    (``in_exponent=None`` picks targets uniformly). Each edge is then
    reciprocated with probability ``reciprocity``. Raw weights are U[0, 1],
    normalized to a weighted cascade.
    """
    rng = np.random.default_rng(random_state)
    raw = _pareto_weights(rng, n_nodes, exponent)
    deg = np.clip(np.rint(raw * mean_degree / raw.mean()), 1, n_nodes - 1)
    deg = deg.astype(np.int64)
    if in_exponent is None:
        pull = np.ones(n_nodes)
    else:
        pull = _pareto_weights(rng, n_nodes, in_exponent)
    edges = set()
    for u in range(n_nodes):
        p = pull.copy()
        p[u] = 0.0
        k = min(deg[u], int(np.count_nonzero(p)))
        for v in rng.choice(n_nodes, size=k, replace=False, p=p / p.sum()):
            edges.add((u, int(v)))
    for u, v in sorted(edges):
        if rng.random() < reciprocity:
            edges.add((v, u))
    src, dst = (np.array(x, dtype=np.int64) for x in zip(*sorted(edges)))
    w = rng.random(src.size)
    g = InfluenceGraph(n_nodes, src, dst, w, alpha=alpha)
    return normalize_weighted_cascade(g)


def random_graph(n_nodes, max_edges, rng, normalize=False, alpha=None):
    """Random simple digraph with at most ``max_edges`` edges.

    Weights and alphas are U[0, 1] unless ``alpha`` is given.
    """
    pairs = [(u, v) for u in range(n_nodes) for v in range(n_nodes) if u != v]
    m = int(rng.integers(0, min(max_edges, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=m, replace=False)
    src = np.array([pairs[i][0] for i in chosen], dtype=np.int64)
    dst = np.array([pairs[i][1] for i in chosen], dtype=np.int64)
    w = rng.random(m)
    if alpha is None:
        alpha = rng.random(n_nodes)
    g = InfluenceGraph(n_nodes, src, dst, w, alpha=alpha)
    return normalize_weighted_cascade(g) if normalize else g


def random_dag(n_nodes, n_edges, rng, max_weight=0.1, alpha_range=(0.1, 0.9)):
    """Random DAG on a random topological order with small raw IC weights."""
    order = rng.permutation(n_nodes)
    pairs = [(order[i], order[j]) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    chosen = rng.choice(len(pairs), size=min(n_edges, len(pairs)), replace=False)
    src = np.array([pairs[i][0] for i in chosen], dtype=np.int64)
    dst = np.array([pairs[i][1] for i in chosen], dtype=np.int64)
    w = rng.uniform(0.0, max_weight, size=src.size)
    alpha = rng.uniform(*alpha_range, size=n_nodes)
    return InfluenceGraph(n_nodes, src, dst, w, alpha=alpha)
