"""Set and ranking similarity for comparing top-k influencer lists."""

import numpy as np

from .exceptions import EmptyList, InvalidP, ValidationError

DEFAULT_P = 0.9


def jaccard(a, b):
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def _ranked(x, name):
    x = list(x)
    if len(set(x)) != len(x):
        raise ValidationError(f"ranked list {name} contains duplicates")
    return x


def rbo(a, b, p=DEFAULT_P):
    """Extrapolated rank-biased overlap at depth ``min(len(a), len(b))``.

    ``(X_k / k) p^k + (1 - p) / p * sum_{d<=k} (X_d / d) p^d`` where ``X_d``
    is the overlap of the two depth-``d`` prefixes.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidP(f"persistence p must lie in (0, 1), got {p}")
    a, b = _ranked(a, "a"), _ranked(b, "b")
    k = min(len(a), len(b))
    if k == 0:
        raise EmptyList("rbo needs two non-empty rankings")
    seen_a, seen_b = set(), set()
    overlap = np.zeros(k)
    x = 0
    for d in range(k):
        u, v = a[d], b[d]
        if u == v:
            x += 1
        else:
            x += (u in seen_b) + (v in seen_a)
        seen_a.add(u)
        seen_b.add(v)
        overlap[d] = x
    depth = np.arange(1, k + 1)
    weights = p ** depth
    agreement = overlap / depth
    return float(agreement[-1] * p**k + (1 - p) / p * np.sum(agreement * weights))


def compare_rankings(a, b, depths, p=DEFAULT_P):
    """Jaccard and RBO of the depth-``k`` prefixes for each ``k`` in ``depths``."""
    a, b = list(a), list(b)
    rows = []
    for k in depths:
        k = int(k)
        if k < 1:
            raise ValidationError(f"depth must be >= 1, got {k}")
        if k > min(len(a), len(b)):
            raise ValidationError(
                f"depth {k} exceeds ranking lengths {len(a)} and {len(b)}")
        rows.append({"k": k, "jaccard": jaccard(a[:k], b[:k]),
                     "rbo": rbo(a[:k], b[:k], p)})
    return rows
