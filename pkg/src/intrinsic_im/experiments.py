"""Experiment drivers: org-tree sweep, alpha-policy curves, IC vs IC-Int.

Per-run randomness comes from ``numpy.random.SeedSequence`` keyed by the
master seed and the run index, so every run is reproducible on its own and
independent of how runs are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .generators import org_tree
from .greedy import greedy
from .sampling import Mode, SampleSet, SamplerConfig
from .spread import SpreadState
from .validation import check_graph, check_k, check_seed

ORG_DELTAS = tuple(round(0.05 * i, 2) for i in range(10))
ORG_SAMPLES = 3200

# spawn-key tags
_SAMPLES, _ALPHA = 0, 1


def _run_seed(seed, *key):
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


def _run_rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(check_seed(seed), spawn_key=key))


@dataclass(frozen=True)
class AlphaPolicy:
    """How intrinsic activation probabilities are assigned to nodes.

    ``kind`` is ``"fixed"`` (every node gets ``lo``), ``"uniform"`` (i.i.d.
    U[lo, hi]) or ``"outdegree"`` (out-degree divided by the maximum
    out-degree).
    """

    kind: str
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform", "outdegree"):
            raise ValidationError(f"unknown alpha policy {self.kind!r}")
        if not (0.0 <= self.lo <= 1.0 and 0.0 <= self.hi <= 1.0):
            raise ValidationError("alpha policy bounds must lie in [0, 1]")
        if self.kind == "uniform" and self.lo > self.hi:
            raise ValidationError("uniform alpha policy needs lo <= hi")

    @classmethod
    def parse(cls, text):
        """``fixed:A``, ``uniform:LO:HI`` or ``outdegree``."""
        parts = str(text).strip().split(":")
        try:
            if parts[0] == "fixed" and len(parts) == 2:
                return cls("fixed", float(parts[1]), float(parts[1]))
            if parts[0] == "uniform" and len(parts) == 3:
                return cls("uniform", float(parts[1]), float(parts[2]))
        except ValueError:
            pass
        else:
            if parts == ["outdegree"]:
                return cls("outdegree")
        raise ValidationError(
            f"bad alpha policy {text!r}; use fixed:A, uniform:LO:HI or outdegree")

    @property
    def name(self):
        if self.kind == "fixed":
            return f"fixed:{self.lo:g}"
        if self.kind == "uniform":
            return f"uniform:{self.lo:g}:{self.hi:g}"
        return "outdegree"

    @property
    def random(self):
        return self.kind == "uniform"

    def sample(self, g, rng):
        n = g.n_nodes
        if self.kind == "fixed":
            return np.full(n, self.lo)
        if self.kind == "uniform":
            return rng.uniform(self.lo, self.hi, size=n)
        deg = g.out_degree().astype(float)
        top = deg.max()
        return deg / top if top > 0 else np.zeros(n)


DEFAULT_POLICIES = ("uniform:0:0.2", "uniform:0.4:0.6", "uniform:0.8:1", "outdegree")


def run_orgtree_sweep(deltas=ORG_DELTAS, n_samples=ORG_SAMPLES, seed=0):
    """Single-node spreads of D and M1 as intrinsic probability moves from D to M1."""
    rows = []
    for delta in deltas:
        delta = float(delta)
        if not 0.0 <= delta <= 0.75:
            raise ValidationError(f"delta must lie in [0, 0.75], got {delta}")
        g = org_tree(delta)
        samples = SampleSet(g, SamplerConfig(seed, n_samples, Mode.IC_INT))
        row = {"delta": delta}
        for name in ("D", "M1"):
            state = SpreadState(samples)
            state.add(g.node_id(name))
            est = state.estimate()
            row[f"sigma_{name}"] = est.mean
            row[f"se_{name}"] = est.std_error
        rows.append(row)
    return rows


@dataclass
class CurveSet:
    """Greedy curves of one configuration over several runs."""

    name: str
    spread: np.ndarray
    std_error: np.ndarray
    seeds: np.ndarray

    @property
    def mean(self):
        return self.spread.mean(axis=0)

    @property
    def std(self):
        if self.spread.shape[0] < 2:
            return np.zeros(self.spread.shape[1])
        return self.spread.std(axis=0, ddof=1)

    def as_dict(self):
        return {"name": self.name, "mean": self.mean.tolist(),
                "std": self.std.tolist(), "spread": self.spread.tolist(),
                "std_error": self.std_error.tolist(), "seeds": self.seeds.tolist()}


def _curves(name, traces):
    return CurveSet(
        name,
        np.array([t.cumulative_spread for t in traces]),
        np.array([t.std_error for t in traces]),
        np.array([t.seeds for t in traces], dtype=np.int64),
    )


def run_alpha_experiment(g, policies=DEFAULT_POLICIES, n_runs=30, k=30,
                         n_samples=1000, seed=0, objective="influenced"):
    """Mean IC-Int greedy curves per alpha policy.

    Run ``r`` of every policy uses the same live-edge uniforms, so policies
    are compared on common random numbers; alpha draws differ per policy.
    """
    check_graph(g)
    k = check_k(k, g.n_nodes)
    if n_runs < 1:
        raise ValidationError("n_runs must be >= 1")
    policies = [p if isinstance(p, AlphaPolicy) else AlphaPolicy.parse(p)
                for p in policies]
    out = []
    for pi, policy in enumerate(policies):
        traces = []
        for r in range(n_runs):
            alpha = policy.sample(g, _run_rng(seed, _ALPHA, pi, r))
            cfg = SamplerConfig(_run_seed(seed, _SAMPLES, r), n_samples, Mode.IC_INT)
            traces.append(greedy(g.with_alpha(alpha), k, cfg, objective, lazy=True))
        out.append(_curves(policy.name, traces))
    return out


@dataclass
class ICComparison:
    ic: CurveSet
    icint: CurveSet
    overlap: np.ndarray
    """Percentage of the IC seed set recovered by each IC-Int run."""

    def as_dict(self):
        return {"ic": self.ic.as_dict(), "icint": self.icint.as_dict(),
                "overlap_percent": self.overlap.tolist()}


def run_ic_vs_icint(g, k=50, n_runs=50, n_samples=1000, seed=0,
                    policy="uniform:0:1", objective="influenced"):
    """Plain-IC greedy curve against IC-Int curves under random alphas."""
    check_graph(g)
    k = check_k(k, g.n_nodes)
    if n_runs < 1:
        raise ValidationError("n_runs must be >= 1")
    policy = policy if isinstance(policy, AlphaPolicy) else AlphaPolicy.parse(policy)
    ic_cfg = SamplerConfig(_run_seed(seed, _SAMPLES, 0), n_samples, Mode.PLAIN_IC)
    ic = _curves("ic", [greedy(g, k, ic_cfg, lazy=True)])
    traces = []
    for r in range(n_runs):
        alpha = policy.sample(g, _run_rng(seed, _ALPHA, 0, r))
        cfg = SamplerConfig(_run_seed(seed, _SAMPLES, r), n_samples, Mode.IC_INT)
        traces.append(greedy(g.with_alpha(alpha), k, cfg, objective, lazy=True))
    icint = _curves(policy.name, traces)
    ic_set = set(ic.seeds[0].tolist())
    overlap = np.array([100.0 * len(ic_set & set(s.tolist())) / k for s in icint.seeds])
    return ICComparison(ic, icint, overlap)
