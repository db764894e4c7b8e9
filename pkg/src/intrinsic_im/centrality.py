"""Activation centrality from the linearized activation system.

With ``A = (I - alpha) W`` the linearized activation probabilities solve
``p = alpha 1 + A p``. Writing ``G = (I - A)^{-1} diag(alpha)``, column ``i``
of ``G`` holds the expected activation of every node caused by node ``i``
acting intrinsically, and the activation centrality is

    C_A(i) = sum_{j != i} G[j, i]

Columns are solved by Neumann iteration ``x <- alpha_i e_i + A x`` in blocks,
so the dense inverse is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import NotConverged, ValidationError
from .validation import check_graph, check_k

DEFAULT_TOL = 1e-10
MIN_ITER = 1000
BLOCK_SIZE = 256


@dataclass
class CentralityVector:
    c_a: np.ndarray
    converged: bool
    iterations: int
    residual: float


@dataclass
class ActivationProbabilities:
    p: np.ndarray
    clamped: bool = False
    iterations: int = 0
    residual: float = 0.0


def default_max_iter(alpha, tol=DEFAULT_TOL):
    """Contraction-based iteration budget, never below ``MIN_ITER``."""
    a_min = float(np.min(alpha)) if np.size(alpha) else 0.0
    if a_min <= 0.0 or tol >= 1.0:
        return MIN_ITER
    if a_min >= 1.0:
        return MIN_ITER
    need = math.ceil(math.log(tol) / math.log1p(-a_min))
    return max(MIN_ITER, 10 * need)


def propagation_matrix(g):
    """Sparse ``(I - alpha) W`` in CSR form."""
    W = g.weight_matrix()
    return sparse.diags(1.0 - g.alpha).dot(W).tocsr()


def _check(g, tol, max_iter):
    check_graph(g)
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    if max_iter is None:
        max_iter = default_max_iter(g.alpha, tol)
    if int(max_iter) < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    return float(tol), int(max_iter)


def solve_linear_system(g, tol=DEFAULT_TOL, max_iter=None, block_size=BLOCK_SIZE):
    """Activation centrality and linearized activation probabilities.

    Returns
    -------
    centrality : CentralityVector
        ``c_a[i]`` is the off-diagonal sum of column ``i`` of ``G``.
        ``residual`` is the largest ``||x - (alpha_i e_i + A x)||_inf`` over
        all returned columns.
    probabilities : ActivationProbabilities
        Row sums ``G 1``.

    Raises
    ------
    NotConverged
        If some column is still above ``tol`` after ``max_iter`` sweeps, which
        happens when ``A`` has spectral radius near 1 (e.g. a cycle of
        nodes with alpha = 0).
    """
    tol, max_iter = _check(g, tol, max_iter)
    n = g.n_nodes
    A = propagation_matrix(g)
    alpha = g.alpha
    c_a = np.zeros(n)
    p = np.zeros(n)
    worst = 0.0
    iters = 0
    for start in range(0, n, block_size):
        cols = np.arange(start, min(start + block_size, n))
        rhs = np.zeros((n, cols.size))
        rhs[cols, np.arange(cols.size)] = alpha[cols]
        x = rhs.copy()
        for it in range(1, max_iter + 1):
            nxt = rhs + A @ x
            step = np.max(np.abs(nxt - x)) if x.size else 0.0
            x = nxt
            if step < tol:
                break
        resid = np.max(np.abs(rhs + A @ x - x)) if x.size else 0.0
        iters = max(iters, it)
        if resid >= tol:
            raise NotConverged(float(resid), it)
        worst = max(worst, float(resid))
        c_a[cols] = x.sum(axis=0) - x[cols, np.arange(cols.size)]
        p += x.sum(axis=1)
    return (CentralityVector(c_a, True, iters, worst),
            ActivationProbabilities(p, False, iters, worst))


def solve_nonlinear_fixed_point(g, tol=DEFAULT_TOL, max_iter=None):
    """Fixed point of the full activation equation.

    ``p_i = alpha_i + 1 - prod_j (1 - (1 - alpha_i) w_ij p_j)`` iterated from
    ``p = alpha``. The right side can exceed 1, so each iterate is clipped to
    ``[0, 1]``; ``clamped`` reports whether that ever changed a value.
    """
    tol, max_iter = _check(g, tol, max_iter)
    alpha = g.alpha
    coef = (1.0 - alpha[g.dst]) * g.weight
    p = alpha.copy()
    clamped = False
    resid = np.inf
    for it in range(1, max_iter + 1):
        with np.errstate(divide="ignore"):
            log_miss = np.log1p(-np.minimum(coef * p[g.src], 1.0))
        miss = np.exp(np.bincount(g.dst, weights=log_miss, minlength=g.n_nodes))
        raw = alpha + 1.0 - miss
        nxt = np.clip(raw, 0.0, 1.0)
        clamped |= bool(np.any(nxt != raw))
        resid = float(np.max(np.abs(nxt - p)))
        p = nxt
        if resid < tol:
            return ActivationProbabilities(p, clamped, it, resid)
    raise NotConverged(resid, max_iter)


def rank_scores(scores, k):
    """Indices of the ``k`` largest scores, ties by ascending index."""
    scores = np.asarray(scores)
    order = np.lexsort((np.arange(scores.size), -scores))
    return [int(v) for v in order[:k]]


def rank_by_centrality(g, k, tol=DEFAULT_TOL, max_iter=None):
    k = check_k(k, g.n_nodes)
    cv, _ = solve_linear_system(g, tol, max_iter)
    return rank_scores(cv.c_a, k)


class ActivationCentrality(TransformerMixin, BaseEstimator):
    """Activation centrality of every node of an :class:`InfluenceGraph`.

    Parameters
    ----------
    k : int, default=10
        Length of ``ranking_``.
    tol : float, default=1e-10
    max_iter : int, optional
        Defaults to a budget derived from the smallest alpha.
    block_size : int, default=256
        Columns solved together.

    Attributes
    ----------
    scores_ : ndarray of shape (n_nodes,)
    activation_probabilities_ : ndarray of shape (n_nodes,)
    ranking_ : list of int
    n_iter_ : int
    residual_ : float
    """

    def __init__(self, k=10, tol=DEFAULT_TOL, max_iter=None, block_size=BLOCK_SIZE):
        self.k = k
        self.tol = tol
        self.max_iter = max_iter
        self.block_size = block_size

    def fit(self, g, y=None):
        cv, probs = solve_linear_system(g, self.tol, self.max_iter, self.block_size)
        self.scores_ = cv.c_a
        self.activation_probabilities_ = probs.p
        self.ranking_ = rank_scores(cv.c_a, check_k(self.k, g.n_nodes))
        self.n_iter_ = cv.iterations
        self.residual_ = cv.residual
        return self

    def transform(self, g):
        """Scores of ``g`` as a column, shape (n_nodes, 1)."""
        check_is_fitted(self, "scores_")
        cv, _ = solve_linear_system(g, self.tol, self.max_iter, self.block_size)
        return cv.c_a.reshape(-1, 1)

    def fit_transform(self, g, y=None):
        return self.fit(g).scores_.reshape(-1, 1)
