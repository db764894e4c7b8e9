"""Greedy hill-climbing seed selection under IC-Int (and plain IC).

One sample set is generated up front and reused for every step and every
candidate, so the objective being maximized is a deterministic sample
average. Ties go to the lowest node id.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _kernels
from ._parallel import thread_limit
from .sampling import Mode, SampleSet, SamplerConfig
from .spread import SpreadState, estimate_spread
from .validation import check_graph, check_k


@dataclass
class SeedTrace:
    seeds: list
    marginal_gain: list
    cumulative_spread: list
    std_error: list = field(default_factory=list)
    n_evaluations: int = 0

    def as_dict(self, labels=None):
        seeds = [labels[s] for s in self.seeds] if labels else list(self.seeds)
        return {
            "seeds": seeds,
            "marginal_gain": self.marginal_gain,
            "cumulative_spread": self.cumulative_spread,
            "std_error": self.std_error,
            "n_evaluations": self.n_evaluations,
        }


def _record(trace, state, v, gain_total):
    n = state.samples.n_samples
    if state.objective == _kernels.INFLUENCED:
        assert gain_total >= 0, "negative marginal gain on a fixed sample set"
    est = state.estimate()
    trace.seeds.append(int(v))
    trace.marginal_gain.append(gain_total / n)
    trace.cumulative_spread.append(est.mean)
    trace.std_error.append(est.std_error)


def _prepare(g, k, cfg, samples):
    check_graph(g)
    k = check_k(k, g.n_nodes)
    if samples is None:
        samples = SampleSet(g, cfg)
    return k, samples


def greedy(g, k, cfg, objective="influenced", lazy=False, samples=None):
    """Greedy seed selection under ``cfg.mode``.

    ``lazy=True`` uses stale marginal gains as upper bounds (valid because
    the sample-averaged objective is submodular) and returns the same trace
    as the eager loop.
    """
    k, samples = _prepare(g, k, cfg, samples)
    state = SpreadState(samples, objective)
    trace = SeedTrace([], [], [], [])
    N = g.n_nodes
    if not lazy:
        remaining = np.arange(N, dtype=np.int64)
        for _ in range(k):
            gains = state.gains(remaining)
            j = int(np.argmax(gains))  # first maximum = lowest id
            v = int(remaining[j])
            state.add(v)
            _record(trace, state, v, int(gains[j]))
            remaining = np.delete(remaining, j)
    else:
        gains = state.gains(np.arange(N, dtype=np.int64))
        heap = [(-int(gain), v, 0) for v, gain in enumerate(gains)]
        heapq.heapify(heap)
        for step in range(k):
            while True:
                neg, v, fresh_at = heapq.heappop(heap)
                if fresh_at == step:
                    break
                heapq.heappush(heap, (-state.gain(v), v, step))
            state.add(v)
            _record(trace, state, v, -neg)
    trace.n_evaluations = state.n_evaluations
    return trace


def greedy_icint(g, k, cfg, objective="influenced", samples=None):
    return greedy(g, k, replace(cfg, mode=Mode.IC_INT), objective, False, samples)


def lazy_greedy_icint(g, k, cfg, objective="influenced", samples=None):
    return greedy(g, k, replace(cfg, mode=Mode.IC_INT), objective, True, samples)


def single_node_spreads(g, cfg, objective="influenced", samples=None):
    """Monte Carlo spread of every singleton seed set, as integer totals and means."""
    check_graph(g)
    if samples is None:
        samples = SampleSet(g, cfg)
    state = SpreadState(samples, objective)
    totals = state.gains(np.arange(g.n_nodes, dtype=np.int64))
    return totals, totals / samples.n_samples


def top_k_by_single_spread(g, k, cfg, objective="influenced", samples=None):
    """Nodes ranked by their own spread, ties by ascending id."""
    k = check_k(k, g.n_nodes)
    totals, _ = single_node_spreads(g, replace(cfg, mode=Mode.IC_INT),
                                    objective, samples)
    order = np.lexsort((np.arange(g.n_nodes), -totals))
    return [int(v) for v in order[:k]]


class GreedyInfluenceMaximizer(BaseEstimator):
    """Select ``k`` influential seeds by Monte Carlo greedy hill climbing.

    Parameters
    ----------
    k : int, default=10
        Number of seeds.
    n_samples : int, default=1000
        Live-edge samples, generated once and shared by all evaluations.
    mode : {"icint", "ic"}, default="icint"
    objective : {"influenced", "literal"}, default="influenced"
        Which activations count toward the spread under IC-Int.
    lazy : bool, default=True
        Lazy (CELF-style) evaluation; same result as the eager loop.
    random_state : int, default=0
        Master seed of the counter-based sample streams.
    n_jobs : int, optional
        Threads for per-sample work. Results do not depend on it.

    Attributes
    ----------
    seeds_ : ndarray of shape (k,)
    marginal_gains_ : ndarray of shape (k,)
    spread_ : ndarray of shape (k,)
        Cumulative spread after each step.
    std_error_ : ndarray of shape (k,)
    n_evaluations_ : int
    trace_ : SeedTrace
    """

    def __init__(self, k=10, n_samples=1000, mode="icint", objective="influenced",
                 lazy=True, random_state=0, n_jobs=None):
        self.k = k
        self.n_samples = n_samples
        self.mode = mode
        self.objective = objective
        self.lazy = lazy
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _config(self):
        return SamplerConfig(self.random_state, self.n_samples, self.mode)

    def fit(self, g, y=None):
        with thread_limit(self.n_jobs):
            trace = greedy(g, self.k, self._config(), self.objective, self.lazy)
        self.trace_ = trace
        self.seeds_ = np.asarray(trace.seeds, dtype=np.int64)
        self.marginal_gains_ = np.asarray(trace.marginal_gain)
        self.spread_ = np.asarray(trace.cumulative_spread)
        self.std_error_ = np.asarray(trace.std_error)
        self.n_evaluations_ = trace.n_evaluations
        return self

    def fit_predict(self, g, y=None):
        return self.fit(g).seeds_

    def score(self, g, y=None):
        """Estimated spread of the fitted seed set on ``g``."""
        check_is_fitted(self, "seeds_")
        with thread_limit(self.n_jobs):
            return estimate_spread(g, self.seeds_, self._config(),
                                   self.objective).mean
