"""Numba kernels for per-sample marginal gains on live-edge samples.

Per-sample state (rows indexed by sample):

reach    nodes reachable from the active seeds, seeds included
covered  nodes counted by the INFLUENCED objective, i.e. reached from an
         active seed other than themselves
anc      nodes that can reach an active seed which is not yet covered

``visited``/``stack`` are scratch rows; each prange iteration owns exactly
one sample row, so no two threads touch the same scratch.
"""

import numpy as np
from numba import njit, prange

from . import _parallel  # noqa: F401  (threading-layer preference)

LITERAL = 0
INFLUENCED = 1


@njit(cache=True)
def _gain_literal(s, v, commit, fw_ptr, fw_dst, reach, visited, stack):
    # |R(v) \ reach| - 1; v moves from counted (if reached) to excluded
    if reach[s, v]:
        return -1
    visited[s, v] = 1
    stack[s, 0] = v
    top = 1
    i = 0
    while i < top:
        y = stack[s, i]
        i += 1
        for e in range(fw_ptr[s, y], fw_ptr[s, y + 1]):
            z = fw_dst[e]
            if visited[s, z] or reach[s, z]:
                continue
            visited[s, z] = 1
            stack[s, top] = z
            top += 1
    for j in range(top):
        z = stack[s, j]
        visited[s, z] = 0
        if commit:
            reach[s, z] = 1
    return top - 1


@njit(cache=True)
def _gain_influenced(s, v, commit, fw_ptr, fw_dst, reach, covered, anc,
                     visited, stack):
    visited[s, v] = 1
    stack[s, 0] = v
    top = 1
    i = 0
    count = 0
    while i < top:
        y = stack[s, i]
        i += 1
        # descendants of a reached node that cannot reach an uncovered
        # seed are all covered already
        if reach[s, y] and not anc[s, y]:
            continue
        for e in range(fw_ptr[s, y], fw_ptr[s, y + 1]):
            z = fw_dst[e]
            if visited[s, z]:
                continue
            visited[s, z] = 1
            stack[s, top] = z
            top += 1
            if not covered[s, z]:
                count += 1
    for j in range(top):
        z = stack[s, j]
        visited[s, z] = 0
        if commit:
            reach[s, z] = 1
            if z != v:
                covered[s, z] = 1
    return count


@njit(cache=True)
def _refresh_ancestors(s, seeds, n_seeds, active, rv_ptr, rv_src, covered,
                       anc, stack):
    anc[s, :] = 0
    top = 0
    for j in range(n_seeds):
        u = seeds[j]
        if active[s, u] and not covered[s, u] and not anc[s, u]:
            anc[s, u] = 1
            stack[s, top] = u
            top += 1
    i = 0
    while i < top:
        y = stack[s, i]
        i += 1
        for e in range(rv_ptr[s, y], rv_ptr[s, y + 1]):
            z = rv_src[e]
            if not anc[s, z]:
                anc[s, z] = 1
                stack[s, top] = z
                top += 1


@njit(parallel=True, cache=True)
def candidate_gain(v, samples, objective, fw_ptr, fw_dst, reach, covered, anc,
                   visited, stack):
    """Total (integer) marginal gain of ``v`` summed over ``samples``."""
    total = 0
    for t in prange(samples.size):
        s = samples[t]
        if objective == LITERAL:
            total += _gain_literal(s, v, False, fw_ptr, fw_dst, reach,
                                   visited, stack)
        else:
            total += _gain_influenced(s, v, False, fw_ptr, fw_dst, reach,
                                      covered, anc, visited, stack)
    return total


@njit(cache=True)
def candidate_gains(cands, act_ptr, act_samples, objective, fw_ptr, fw_dst,
                    reach, covered, anc, visited, stack):
    out = np.zeros(cands.size, dtype=np.int64)
    for c in range(cands.size):
        v = cands[c]
        samples = act_samples[act_ptr[v]:act_ptr[v + 1]]
        out[c] = candidate_gain(v, samples, objective, fw_ptr, fw_dst, reach,
                                covered, anc, visited, stack)
    return out


@njit(parallel=True, cache=True)
def commit_seed(v, samples, objective, seeds, n_seeds, active, fw_ptr, fw_dst,
                rv_ptr, rv_src, reach, covered, anc, value, visited, stack):
    """Add ``v`` (already appended to ``seeds``) to every sample's state."""
    for t in prange(samples.size):
        s = samples[t]
        if objective == LITERAL:
            value[s] += _gain_literal(s, v, True, fw_ptr, fw_dst, reach,
                                      visited, stack)
        else:
            value[s] += _gain_influenced(s, v, True, fw_ptr, fw_dst, reach,
                                         covered, anc, visited, stack)
            _refresh_ancestors(s, seeds, n_seeds, active, rv_ptr, rv_src,
                               covered, anc, stack)
