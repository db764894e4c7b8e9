"""Reproducible live-edge Monte Carlo samples.

Every uniform draw comes from a counter-based Philox stream keyed by
``(master_seed, sample_index, phase)``; entity ``j`` (edge or node) takes the
``j``-th value of that stream. A sample is therefore a pure function of the
seed and its index, independent of thread count or evaluation order.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError
from .graph import effective_probabilities
from .validation import check_graph, check_node_set, check_seed

EDGE_PHASE = 0
NODE_PHASE = 1


class Mode(str, enum.Enum):
    PLAIN_IC = "ic"
    IC_INT = "icint"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        aliases = {"ic": cls.PLAIN_IC, "plainic": cls.PLAIN_IC,
                   "icint": cls.IC_INT}
        try:
            return aliases[key]
        except KeyError:
            raise ValidationError(f"unknown mode {value!r}") from None


@dataclass(frozen=True)
class SamplerConfig:
    master_seed: int = 0
    n_samples: int = 1000
    mode: Mode = Mode.IC_INT

    def __post_init__(self):
        object.__setattr__(self, "master_seed", check_seed(self.master_seed))
        object.__setattr__(self, "mode", Mode.coerce(self.mode))
        if int(self.n_samples) < 1:
            raise ValidationError("n_samples must be >= 1")
        object.__setattr__(self, "n_samples", int(self.n_samples))


def uniform_stream(master_seed, sample_index, phase, size):
    """``size`` uniforms in [0, 1) for one (seed, sample, phase) stream."""
    bitgen = np.random.Philox(key=master_seed, counter=[0, phase, sample_index, 0])
    return np.random.Generator(bitgen).random(size)


class _StreamCursor:
    """Reposition one Philox generator onto successive streams.

    Equivalent to :func:`uniform_stream` but avoids building a generator per
    stream, which dominates sampling time for small graphs.
    """

    def __init__(self, master_seed):
        self._bitgen = np.random.Philox(key=master_seed)
        self._gen = np.random.Generator(self._bitgen)
        self._state = self._bitgen.state
        self._key = self._state["state"]["key"]

    def draw(self, sample_index, phase, size):
        state = dict(self._state)
        state["state"] = {"counter": np.array([0, phase, sample_index, 0], dtype=np.uint64),
                          "key": self._key}
        state["buffer_pos"] = 4  # empty buffer
        self._bitgen.state = state
        return self._gen.random(size)


def edge_probabilities(g, mode):
    if Mode.coerce(mode) is Mode.IC_INT:
        return effective_probabilities(g)
    return np.asarray(g.weight)


@dataclass(frozen=True, eq=False)
class LiveEdgeSample:
    """One Monte Carlo realization.

    ``edge_draws`` and ``intrinsic_draws`` are the raw uniforms, so the same
    sample can be re-thresholded against other alpha assignments.
    ``live_edges`` is the liveness mask for the mode it was generated under.
    """

    sample_index: int
    live_edges: np.ndarray
    intrinsic_draws: np.ndarray
    edge_draws: np.ndarray = field(repr=False)


def generate_sample(g, cfg, i):
    check_graph(g)
    if not 0 <= i < cfg.n_samples:
        raise ValidationError(f"sample index {i} outside [0, {cfg.n_samples})")
    ed = uniform_stream(cfg.master_seed, i, EDGE_PHASE, g.n_edges)
    nd = uniform_stream(cfg.master_seed, i, NODE_PHASE, g.n_nodes)
    live = ed < edge_probabilities(g, cfg.mode)
    return LiveEdgeSample(int(i), live, nd, ed)


def intrinsically_active(sample, candidate_set, g):
    """Members of ``candidate_set`` whose intrinsic draw falls below alpha."""
    ids = check_node_set(g, candidate_set)
    return {int(u) for u in ids if sample.intrinsic_draws[u] < g.alpha[u]}


def reachable_count(sample, g, sources, excluded=()):
    """Nodes outside ``excluded`` reachable from ``sources`` over live edges."""
    sources = check_node_set(g, sources)
    excluded = set(check_node_set(g, excluded).tolist())
    seen = np.zeros(g.n_nodes, dtype=bool)
    seen[sources] = True
    queue = deque(sources.tolist())
    live = sample.live_edges
    while queue:
        u = queue.popleft()
        for e in range(g.out_ptr[u], g.out_ptr[u + 1]):
            v = g.dst[e]
            if live[e] and not seen[v]:
                seen[v] = True
                queue.append(int(v))
    return int(seen.sum()) - len(excluded & set(np.flatnonzero(seen).tolist()))


def _compile(live, key, val, n_nodes):
    """Per-sample CSR over one global value array.

    ``ptr[i, u]:ptr[i, u + 1]`` indexes the live entries of sample ``i``
    whose ``key`` is ``u``; ``key`` must be sorted along the edge axis.
    """
    n = live.shape[0]
    sample, edge = np.nonzero(live)
    counts = np.bincount(sample * n_nodes + key[edge], minlength=n * n_nodes)
    starts = np.concatenate([[0], np.cumsum(counts)])
    rows = np.arange(n)[:, None] * n_nodes + np.arange(n_nodes + 1)[None, :]
    return starts[rows].astype(np.int64), val[edge].astype(np.int32)


class SampleSet:
    """All ``n_samples`` samples of a config, compiled to per-sample CSR.

    Holds forward and reverse live adjacency, the intrinsic-activation
    matrix and, per node, the list of samples in which it is intrinsically
    active. Built from the same streams as :func:`generate_sample`.
    """

    def __init__(self, g, cfg):
        check_graph(g)
        self.graph = g
        self.config = cfg
        n, N, E = cfg.n_samples, g.n_nodes, g.n_edges
        p = edge_probabilities(g, cfg.mode)
        ic_int = cfg.mode is Mode.IC_INT

        live = np.empty((n, E), dtype=bool)
        self.node_draws = np.empty((n, N), dtype=np.float64)
        cursor = _StreamCursor(cfg.master_seed)
        for i in range(n):
            live[i] = cursor.draw(i, EDGE_PHASE, E) < p
            self.node_draws[i] = cursor.draw(i, NODE_PHASE, N)
        # edges are stored in (src, dst) order, so row-major nonzero() of the
        # live matrix is already grouped by sample, then by source
        self.fw_ptr, self.fw_dst = _compile(live, g.src, g.dst, N)
        self.rv_ptr, self.rv_src = _compile(live[:, g.in_edges], g.dst[g.in_edges],
                                            g.src[g.in_edges], N)

        if ic_int:
            self.active = self.node_draws < g.alpha[None, :]
        else:
            self.active = np.ones((n, N), dtype=bool)
        # node -> samples in which it is intrinsically active
        act_t = self.active.T
        self.act_ptr = np.concatenate([[0], np.cumsum(act_t.sum(axis=1))]).astype(np.int64)
        self.act_samples = np.nonzero(act_t)[1].astype(np.int64)

    @property
    def n_samples(self):
        return self.config.n_samples

    @property
    def n_live_edges(self):
        return int(self.fw_dst.size)

    def samples_active(self, v):
        return self.act_samples[self.act_ptr[v]:self.act_ptr[v + 1]]
