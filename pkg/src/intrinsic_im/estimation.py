"""Parameter estimation from interaction counts and snowball graph sampling.

Conventions follow the follower graph: an edge ``(u, v)`` means *v follows
u*, so ``u`` can influence ``v``. An interaction count ``gamma[(j, i)]`` is
the number of times ``i`` engaged with content of its followee ``j``;
``k[i]`` is the number of intrinsic posts by ``i``.

    alpha_i = k_i / (gamma_i + k_i),   w_ij = gamma[(j, i)] / gamma_i,
    gamma_i = sum_j gamma[(j, i)]
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ExhaustedProviderWarning, ValidationError
from .graph import InfluenceGraph, normalize_weighted_cascade
from .io import read_tsv
from .validation import check_probability

K_IN = 15
K_OUT = 11
MAX_ROUNDS = 20

FOLLOWER_HEADER = ("user", "follower")
INTERACTION_HEADER = ("followee", "follower", "count")
INTRINSIC_HEADER = ("user", "intrinsic_count")


def _count(value, what):
    try:
        c = int(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} {value!r} is not an integer") from None
    if c < 0:
        raise ValidationError(f"{what} must be nonnegative, got {c}")
    return c


@dataclass
class InteractionLog:
    """Intrinsic post counts per user and interaction counts per (followee, follower)."""

    intrinsic: dict = field(default_factory=dict)
    interactions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.intrinsic = {str(u): _count(c, "intrinsic count")
                          for u, c in self.intrinsic.items()}
        merged = defaultdict(int)
        for (j, i), c in self.interactions.items():
            if str(j) == str(i):
                raise ValidationError(f"self-interaction of {j!r}")
            merged[str(j), str(i)] += _count(c, "interaction count")
        self.interactions = dict(merged)

    @classmethod
    def from_tsv(cls, interaction_path=None, intrinsic_path=None):
        inter = defaultdict(int)
        if interaction_path is not None:
            for j, i, c in read_tsv(interaction_path, INTERACTION_HEADER):
                inter[j, i] += _count(c, f"{interaction_path}: count")
        intrinsic = {}
        if intrinsic_path is not None:
            for u, c in read_tsv(intrinsic_path, INTRINSIC_HEADER):
                intrinsic[u] = intrinsic.get(u, 0) + _count(
                    c, f"{intrinsic_path}: intrinsic_count")
        return cls(intrinsic, dict(inter))

    def users(self):
        seen = dict.fromkeys(self.intrinsic)
        for j, i in self.interactions:
            seen.setdefault(j)
            seen.setdefault(i)
        return list(seen)


@dataclass
class ParameterEstimate:
    alpha: dict
    weights: dict
    """``weights[(j, i)]`` is ``w_ij``, the weight of edge ``j -> i``."""
    no_activity: list


def estimate_parameters(log, default_alpha=0.5, users=None):
    """Intrinsic probabilities and normalized influence weights.

    Users with neither intrinsic posts nor interactions are listed in
    ``no_activity`` and get ``default_alpha`` with an empty weight row.
    """
    default_alpha = check_probability(default_alpha, "default_alpha")
    users = log.users() if users is None else [str(u) for u in users]
    gamma = defaultdict(int)
    for (j, i), c in log.interactions.items():
        gamma[i] += c
    alpha, no_activity = {}, []
    for u in users:
        k, g = log.intrinsic.get(u, 0), gamma.get(u, 0)
        if k + g == 0:
            alpha[u] = default_alpha
            no_activity.append(u)
        else:
            alpha[u] = k / (g + k)
    weights = {(j, i): c / gamma[i] for (j, i), c in log.interactions.items()
               if c > 0}
    return ParameterEstimate(alpha, weights, no_activity)


@dataclass
class InteractionGraphReport:
    dropped_pairs: int
    no_activity: list


def build_interaction_graph(nodes, edges, log, default_alpha=0.5):
    """Weighted IC-Int graph from a follower graph and an interaction log.

    Each follow edge ``(u, v)`` gets raw weight ``1 + gamma[(u, v)]``. The
    smoothed weights also form the ``gamma_i`` used for alpha, so alpha and
    the normalized weights derive from one table. Users without intrinsic
    counts and without any recorded interaction get ``default_alpha``.
    Interaction pairs that are not follow edges are dropped and counted.

    Returns
    -------
    graph : InfluenceGraph
    report : InteractionGraphReport
    """
    default_alpha = check_probability(default_alpha, "default_alpha")
    labels = [str(x) for x in nodes]
    index = {lab: i for i, lab in enumerate(labels)}
    edge_set = {(str(u), str(v)) for u, v in edges}
    for u, v in edge_set:
        if u not in index or v not in index:
            raise ValidationError(f"edge ({u!r}, {v!r}) uses an unknown node")
    ordered = sorted(edge_set, key=lambda e: (index[e[0]], index[e[1]]))
    dropped = sum(1 for pair, c in log.interactions.items()
                  if c > 0 and pair not in edge_set)
    raw = np.array([1.0 + log.interactions.get(e, 0) for e in ordered])
    src = np.array([index[u] for u, _ in ordered], dtype=np.int64)
    dst = np.array([index[v] for _, v in ordered], dtype=np.int64)
    gamma = np.bincount(dst, weights=raw, minlength=len(labels))
    touched = {i for (j, i), c in log.interactions.items()
               if c > 0 and (j, i) in edge_set}
    alpha = np.empty(len(labels))
    no_activity = []
    for i, u in enumerate(labels):
        k = log.intrinsic.get(u, 0)
        has_data = u in log.intrinsic or u in touched
        if not has_data or k + gamma[i] == 0:
            alpha[i] = default_alpha
            no_activity.append(u)
        else:
            alpha[i] = k / (gamma[i] + k)
    g = InfluenceGraph(len(labels), src, dst, raw, alpha=alpha, labels=labels)
    return normalize_weighted_cascade(g), InteractionGraphReport(dropped, no_activity)


class FollowerProvider:
    """Source of follower lists. Subclasses must be pure and repeatable."""

    def followers(self, user):
        raise NotImplementedError

    def universe(self):
        """All users the provider knows about, in a fixed order."""
        raise NotImplementedError


class OfflineFollowerProvider(FollowerProvider):
    """Follower lists held in memory, typically read from a TSV file."""

    def __init__(self, followers):
        self._followers = {}
        users = {}
        for u, fs in followers.items():
            u = str(u)
            users.setdefault(u)
            lst = self._followers.setdefault(u, [])
            for f in fs:
                f = str(f)
                if f != u and f not in lst:
                    lst.append(f)
                users.setdefault(f)
        self._universe = sorted(users)

    @classmethod
    def from_tsv(cls, path):
        followers = defaultdict(list)
        for u, f in read_tsv(path, FOLLOWER_HEADER):
            followers[u].append(f)
        return cls(followers)

    def followers(self, user):
        return tuple(self._followers.get(str(user), ()))

    def universe(self):
        return list(self._universe)


@dataclass
class SnowballGraph:
    nodes: list
    edges: list
    """``(u, v)``: v follows u."""
    rounds: int
    exhausted: bool


def prune_low_out_degree(nodes, edges, k_out):
    """Repeatedly drop nodes with fewer than ``k_out`` out-edges."""
    alive = set(nodes)
    out = defaultdict(set)
    into = defaultdict(set)
    for u, v in edges:
        out[u].add(v)
        into[v].add(u)
    queue = [u for u in nodes if len(out[u]) < k_out]
    while queue:
        u = queue.pop()
        if u not in alive:
            continue
        alive.discard(u)
        for v in out.pop(u, ()):
            into[v].discard(u)
        for w in into.pop(u, ()):
            out[w].discard(u)
            if w in alive and len(out[w]) < k_out:
                queue.append(w)
    kept_nodes = [u for u in nodes if u in alive]
    kept_edges = [(u, v) for u, v in edges if u in alive and v in alive]
    return kept_nodes, kept_edges


def snowball_sample(provider, seed, k_in=K_IN, k_out=K_OUT, n=1000,
                    max_rounds=MAX_ROUNDS, random_state=0):
    """Grow a follower graph from ``seed`` by frontier expansion.

    Each step expands up to ``k_in`` frontier users with the highest
    in-degree (ties by order of arrival): every follower ``v`` of an
    expanded ``u`` adds edge ``(u, v)`` and, if new, joins the graph and the
    frontier. An empty frontier gets one random unexpanded user. Once the
    graph has ``n`` nodes, it is completed with every follow relation among
    its nodes and users with out-degree below ``k_out`` are removed
    recursively; if that leaves fewer than ``n`` nodes expansion resumes,
    for at most ``max_rounds`` rounds.

    If the target cannot be met, the partial graph is returned with
    ``exhausted=True`` and an :class:`ExhaustedProviderWarning`.
    """
    if k_in < 1 or k_out < 0 or n < 1 or max_rounds < 1:
        raise ValidationError("need k_in >= 1, k_out >= 0, n >= 1, max_rounds >= 1")
    seed = str(seed)
    universe = provider.universe()
    if seed not in set(universe):
        raise ValidationError(f"seed user {seed!r} unknown to the provider")
    rng = np.random.default_rng(random_state)

    nodes = {seed: None}          # insertion-ordered node set
    edges = {}                    # insertion-ordered edge set
    in_deg = defaultdict(int)
    frontier = {seed: None}
    expanded = set()
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        stuck = False
        while len(nodes) < n:
            if not frontier:
                pool = [u for u in universe if u not in expanded]
                if not pool:
                    stuck = True
                    break
                u = pool[int(rng.integers(len(pool)))]
                if u not in nodes:
                    nodes[u] = None
                frontier[u] = None
            order = list(frontier)
            ranked = sorted(range(len(order)), key=lambda i: (-in_deg[order[i]], i))
            batch = [order[i] for i in ranked[:k_in]]
            for u in batch:
                del frontier[u]
                expanded.add(u)
                for v in provider.followers(u):
                    if v not in nodes:
                        nodes[v] = None
                        if v not in expanded:
                            frontier[v] = None
                    if (u, v) not in edges:
                        edges[u, v] = None
                        in_deg[v] += 1
        # every follow relation among the current nodes, not only those
        # discovered by expansion; unexpanded users would otherwise have
        # out-degree 0 and pruning would unravel the whole graph
        for u in list(nodes):
            for v in provider.followers(u):
                if v in nodes:
                    edges.setdefault((u, v))
        kept_nodes, kept_edges = prune_low_out_degree(list(nodes), list(edges), k_out)
        kept = set(kept_nodes)
        for u in list(nodes):
            if u not in kept:
                del nodes[u]
                frontier.pop(u, None)
                expanded.discard(u)
        edges = dict.fromkeys(kept_edges)
        in_deg = defaultdict(int)
        for _, v in edges:
            in_deg[v] += 1
        if len(nodes) >= n or stuck:
            break
    exhausted = len(nodes) < n
    if exhausted:
        warnings.warn(
            f"snowball sampling stopped at {len(nodes)} of {n} nodes after "
            f"{rounds} rounds", ExhaustedProviderWarning, stacklevel=2)
    return SnowballGraph(list(nodes), list(edges), rounds, exhausted)
