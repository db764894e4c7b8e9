"""Input validation helpers shared by the estimators and functional API."""

import numbers

import numpy as np

from .exceptions import InvalidK, ValidationError
from .graph import InfluenceGraph

MAX_SEED = 2**64


def check_graph(g, probabilities=True):
    """Ensure ``g`` is an :class:`InfluenceGraph` usable for diffusion.

    With ``probabilities=True`` every edge weight must lie in ``[0, 1]``.
    """
    if not isinstance(g, InfluenceGraph):
        raise ValidationError(f"expected InfluenceGraph, got {type(g).__name__}")
    if probabilities and g.n_edges and g.weight.max() > 1.0:
        raise ValidationError(
            "edge weights exceed 1; normalize the graph before running diffusion"
        )
    return g


def check_node_set(g, nodes):
    """Resolve ids or labels to a sorted array of distinct dense ids."""
    if nodes is None:
        return np.empty(0, dtype=np.int64)
    if isinstance(nodes, (str, numbers.Integral)):
        nodes = [nodes]
    ids = sorted({g.node_id(x) for x in nodes})
    return np.asarray(ids, dtype=np.int64)


def check_k(k, n_nodes):
    if not isinstance(k, numbers.Integral) or isinstance(k, bool):
        raise InvalidK(f"k must be an integer, got {k!r}")
    if not 1 <= k <= n_nodes:
        raise InvalidK(f"k must be in [1, {n_nodes}], got {k}")
    return int(k)


def check_seed(seed):
    if seed is None:
        return 0
    if not isinstance(seed, numbers.Integral) or isinstance(seed, bool):
        raise ValidationError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < MAX_SEED:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    return int(seed)


def check_probability(value, name):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {value}")
    return value
