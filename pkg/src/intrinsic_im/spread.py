"""Influence-spread objective under IC and IC-Int.

Two objectives are supported for IC-Int:

``"influenced"`` (default)
    Count nodes reached over live edges from an intrinsically active seed
    *other than themselves*. A seed that failed its intrinsic draw counts when
    influenced; an intrinsically active seed counts only when another active
    seed reaches it. This is a coverage function, hence monotone and
    submodular.
``"literal"``
    Count nodes reachable from the intrinsically active seeds ``Ŝ``, minus
    ``Ŝ`` itself. Submodular but not monotone.

Plain IC always activates every seed and counts reached nodes outside ``S``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import _kernels
from .exceptions import BudgetExceeded, ValidationError
from .graph import effective_probabilities
from .sampling import Mode, SampleSet
from .validation import check_graph, check_node_set

OBJECTIVES = {"literal": _kernels.LITERAL, "influenced": _kernels.INFLUENCED}
EXACT_BUDGET = 24
_CHUNK = 1 << 15


def _objective_code(objective, mode):
    if Mode.coerce(mode) is Mode.PLAIN_IC:
        return _kernels.LITERAL
    try:
        return OBJECTIVES[objective]
    except KeyError:
        raise ValidationError(f"unknown objective {objective!r}") from None


@dataclass(frozen=True)
class SpreadEstimate:
    mean: float
    n_samples: int
    std_error: float

    def as_dict(self):
        return {"mean": self.mean, "std_error": self.std_error,
                "n_samples": self.n_samples}


class SpreadState:
    """Incremental per-sample spread bookkeeping over a fixed sample set.

    Values are kept as integer activation counts per sample, so marginal
    gains summed over samples compare exactly.
    """

    def __init__(self, samples, objective="influenced"):
        self.samples = samples
        self.objective = _objective_code(objective, samples.config.mode)
        n, N = samples.n_samples, samples.graph.n_nodes
        self.reach = np.zeros((n, N), dtype=np.uint8)
        self.covered = np.zeros((n, N), dtype=np.uint8)
        self.anc = np.zeros((n, N), dtype=np.uint8)
        self.value = np.zeros(n, dtype=np.int64)
        self._visited = np.zeros((n, N), dtype=np.uint8)
        self._stack = np.zeros((n, N), dtype=np.int32)
        self.seeds = np.zeros(N, dtype=np.int64)
        self.n_seeds = 0
        self.n_evaluations = 0

    def _args(self):
        return (self.samples.fw_ptr, self.samples.fw_dst, self.reach,
                self.covered, self.anc, self._visited, self._stack)

    def gain(self, v):
        """Marginal gain of ``v`` summed over samples (integer)."""
        self.n_evaluations += 1
        return int(_kernels.candidate_gain(
            int(v), self.samples.samples_active(v), self.objective, *self._args()))

    def gains(self, candidates):
        candidates = np.asarray(candidates, dtype=np.int64)
        self.n_evaluations += candidates.size
        return _kernels.candidate_gains(
            candidates, self.samples.act_ptr, self.samples.act_samples,
            self.objective, *self._args())

    def add(self, v):
        v = int(v)
        ss = self.samples
        self.seeds[self.n_seeds] = v
        self.n_seeds += 1
        _kernels.commit_seed(
            v, ss.samples_active(v), self.objective, self.seeds, self.n_seeds,
            ss.active, ss.fw_ptr, ss.fw_dst, ss.rv_ptr, ss.rv_src, self.reach,
            self.covered, self.anc, self.value, self._visited, self._stack)

    @property
    def total(self):
        return int(self.value.sum())

    def estimate(self):
        n = self.value.size
        mean = self.total / n
        se = float(np.std(self.value, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return SpreadEstimate(mean, n, se)


def estimate_spread(g, seeds, cfg, objective="influenced", samples=None):
    """Monte Carlo spread of ``seeds`` under ``cfg.mode``."""
    check_graph(g)
    ids = check_node_set(g, seeds)
    if samples is None:
        samples = SampleSet(g, cfg)
    state = SpreadState(samples, objective)
    for v in ids:
        state.add(v)
    return state.estimate()


def estimate_spread_icint(g, seeds, cfg, objective="influenced"):
    return estimate_spread(g, seeds, replace(cfg, mode=Mode.IC_INT), objective)


def estimate_spread_ic(g, seeds, cfg):
    return estimate_spread(g, seeds, replace(cfg, mode=Mode.PLAIN_IC))


def one_hop_engagement(g, s):
    """Expected one-hop influenced activations when ``s`` acts intrinsically."""
    s = g.node_id(s)
    lo, hi = g.out_ptr[s], g.out_ptr[s + 1]
    r = g.dst[lo:hi]
    return float(g.alpha[s] * np.sum((1.0 - g.alpha[r]) * g.weight[lo:hi]))


# ---------------------------------------------------------------------------
# exact enumeration


def _relevant_edges(n_nodes, src, dst, p, sources):
    """Edges with p > 0 whose tail can be reached from ``sources``."""
    adj = [[] for _ in range(n_nodes)]
    for e in range(src.size):
        if p[e] > 0:
            adj[src[e]].append(e)
    seen = set(int(s) for s in sources)
    frontier = list(seen)
    edges = []
    while frontier:
        u = frontier.pop()
        for e in adj[u]:
            edges.append(e)
            v = int(dst[e])
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return sorted(edges)


def _check_budget(n_uncertain, n_seeds):
    if n_uncertain + n_seeds > EXACT_BUDGET:
        raise BudgetExceeded(
            f"exact enumeration needs 2^{n_uncertain + n_seeds} outcomes "
            f"(budget 2^{EXACT_BUDGET})")


def _reach_chunks(n_nodes, src, dst, p, sources):
    """Yield ``(prob, reach)`` over all live/dead outcomes of relevant edges.

    ``reach`` has shape ``(len(sources), chunk, n_nodes)``.
    """
    edges = _relevant_edges(n_nodes, src, dst, p, sources)
    unc = [e for e in edges if p[e] < 1.0]
    m = len(unc)
    pu = np.array([p[e] for e in unc])
    e_src = np.array([src[e] for e in edges], dtype=np.int64)
    e_dst = np.array([dst[e] for e in edges], dtype=np.int64)
    col = {e: j for j, e in enumerate(unc)}
    total = 1 << m
    for start in range(0, total, _CHUNK):
        o = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = ((o[:, None] >> np.arange(m)) & 1).astype(bool)
        prob = np.prod(np.where(bits, pu, 1.0 - pu), axis=1)
        live = np.ones((o.size, len(edges)), dtype=bool)
        for j, e in enumerate(edges):
            if e in col:
                live[:, j] = bits[:, col[e]]
        reach = np.zeros((len(sources), o.size, n_nodes), dtype=bool)
        for k, s in enumerate(sources):
            r = reach[k]
            r[:, s] = True
            changed = True
            while changed:
                changed = False
                for j in range(len(edges)):
                    new = r[:, e_src[j]] & live[:, j] & ~r[:, e_dst[j]]
                    if new.any():
                        r[:, e_dst[j]] |= new
                        changed = True
        yield prob, reach


def _count(reach, sources, active, objective):
    """Per-outcome counted nodes for an active subset of the sources."""
    idx = [k for k in range(len(sources)) if active[k]]
    if not idx:
        return np.zeros(reach.shape[1])
    if objective == _kernels.INFLUENCED:
        parts = []
        for k in idx:
            r = reach[k].copy()
            r[:, sources[k]] = False
            parts.append(r)
        return np.logical_or.reduce(parts).sum(axis=1)
    u = np.logical_or.reduce([reach[k] for k in idx])
    u[:, [sources[k] for k in idx]] = False
    return u.sum(axis=1)


def _dyadic(values):
    """Exact integer numerators of ``values`` and their complements over 2^K."""
    ratios = [float(x).as_integer_ratio() for x in values]
    K = max((b.bit_length() - 1 for _, b in ratios), default=0)
    num = [a << (K - (b.bit_length() - 1)) for a, b in ratios]
    return num, [(1 << K) - a for a in num], K


def _reach_exact(n_nodes, src, dst, p, sources):
    """Pure-Python outcome enumeration with exact dyadic probabilities.

    Yields ``(numerator, reach_masks)``; every numerator shares the
    denominator ``2**denominator_bits`` returned first.
    """
    edges = _relevant_edges(n_nodes, src, dst, p, sources)
    unc = [e for e in edges if p[e] < 1.0]
    on, off, K = _dyadic([p[e] for e in unc])
    yield K * len(unc)
    sure = [e for e in edges if p[e] >= 1.0]
    for states in itertools.product((0, 1), repeat=len(unc)):
        num = 1
        out = [0] * n_nodes
        for j, st in enumerate(states):
            num *= on[j] if st else off[j]
            if st:
                out[src[unc[j]]] |= 1 << int(dst[unc[j]])
        if num == 0:
            continue
        for e in sure:
            out[src[e]] |= 1 << int(dst[e])
        masks = []
        for s in sources:
            r = 1 << int(s)
            frontier = r
            while frontier:
                nxt = 0
                x = frontier
                while x:
                    low = x & -x
                    nxt |= out[low.bit_length() - 1]
                    x ^= low
                frontier = nxt & ~r
                r |= nxt
            masks.append(r)
        yield num, masks


def _count_mask(masks, sources, active, objective):
    acc = 0
    if objective == _kernels.INFLUENCED:
        for k, on in enumerate(active):
            if on:
                acc |= masks[k] & ~(1 << int(sources[k]))
        return bin(acc).count("1")
    excl = 0
    for k, on in enumerate(active):
        if on:
            acc |= masks[k]
            excl |= 1 << int(sources[k])
    return bin(acc & ~excl).count("1")


def exact_spread(g, seeds, mode=Mode.IC_INT, objective="influenced", exact=False):
    """Expected spread by enumerating every edge and intrinsic outcome.

    Only edges reachable from the seeds through positive-probability edges
    are enumerated; the number of uncertain edges plus ``|S|`` must not
    exceed ``EXACT_BUDGET``. With ``exact=True`` the result is a
    :class:`fractions.Fraction` computed without rounding from the float
    inputs.
    """
    check_graph(g)
    mode = Mode.coerce(mode)
    code = _objective_code(objective, mode)
    sources = check_node_set(g, seeds).tolist()
    if not sources:
        return Fraction(0) if exact else 0.0
    if mode is Mode.IC_INT:
        p = effective_probabilities(g)
        alphas = [float(g.alpha[s]) for s in sources]
        subsets = list(itertools.product((0, 1), repeat=len(sources)))
    else:
        p = np.asarray(g.weight)
        alphas = []
        subsets = [(1,) * len(sources)]
    n_unc = sum(1 for e in _relevant_edges(g.n_nodes, g.src, g.dst, p, sources)
                if p[e] < 1.0)
    _check_budget(n_unc, len(sources) if mode is Mode.IC_INT else 0)

    if exact:
        a_on, a_off, Ka = _dyadic(alphas)
        sub_num = []
        for sub in subsets:
            num = 1
            for k, a in enumerate(a_on):
                num *= a if sub[k] else a_off[k]
            sub_num.append(num)
        gen = _reach_exact(g.n_nodes, g.src, g.dst, p, sources)
        den_bits = next(gen) + Ka * len(alphas)
        total = 0
        for num, masks in gen:
            for sub, sn in zip(subsets, sub_num):
                if sn:
                    total += num * sn * _count_mask(masks, sources, sub, code)
        return Fraction(total, 1 << den_bits)

    sub_prob = [math.prod(a if on else 1.0 - a for a, on in zip(alphas, sub))
                for sub in subsets]
    total = 0.0
    for prob, reach in _reach_chunks(g.n_nodes, g.src, g.dst, p, sources):
        for sub, sp in zip(subsets, sub_prob):
            if sp > 0:
                total += sp * float(prob @ _count(reach, sources, sub, code))
    return total


def exact_spread_dummy(dg, dummy_seeds, n_original, objective="influenced",
                       exact=False):
    """Exact plain-IC spread on a dummy-transformed graph.

    Dummy nodes (ids ``>= n_original``) are the sources and are never
    counted. Node ``i`` whose own dummy edge fired plays the role of an
    intrinsically active seed: under ``"influenced"`` it counts only when
    another fired node reaches it, under ``"literal"`` it never counts.
    """
    check_graph(dg)
    code = OBJECTIVES[objective]
    sources = check_node_set(dg, dummy_seeds).tolist()
    if any(s < n_original for s in sources):
        raise ValidationError("dummy seeds must be dummy nodes")
    if not sources:
        return Fraction(0) if exact else 0.0
    owner = [s - n_original for s in sources]
    p = np.asarray(dg.weight)
    n_unc = sum(1 for e in _relevant_edges(dg.n_nodes, dg.src, dg.dst, p, sources)
                if p[e] < 1.0)
    _check_budget(n_unc, 0)
    keep = (1 << n_original) - 1

    if exact:
        gen = _reach_exact(dg.n_nodes, dg.src, dg.dst, p, sources)
        den_bits = next(gen)
        total = 0
        for num, masks in gen:
            fired = [bool(m >> i & 1) for m, i in zip(masks, owner)]
            total += num * _count_mask([m & keep for m in masks], owner, fired, code)
        return Fraction(total, 1 << den_bits)

    total = 0.0
    for prob, reach in _reach_chunks(dg.n_nodes, dg.src, dg.dst, p, sources):
        reach = reach[:, :, :n_original]
        fired = reach[np.arange(len(owner)), :, owner]  # (k, chunk)
        counts = np.zeros(prob.size)
        for pattern in {tuple(col) for col in fired.T}:
            rows = np.all(fired.T == pattern, axis=1)
            counts[rows] = _count(reach[:, rows], owner, pattern, code)
        total += float(prob @ counts)
    return total
