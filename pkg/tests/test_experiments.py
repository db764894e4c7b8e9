import numpy as np
import pytest

from intrinsic_im.exceptions import ValidationError
from intrinsic_im.experiments import (
    AlphaPolicy,
    run_alpha_experiment,
    run_ic_vs_icint,
    run_orgtree_sweep,
)
from intrinsic_im.generators import power_law_graph
from intrinsic_im.graph import InfluenceGraph


def test_policy_parse():
    assert AlphaPolicy.parse("fixed:0.3") == AlphaPolicy("fixed", 0.3, 0.3)
    assert AlphaPolicy.parse("uniform:0:0.2").name == "uniform:0:0.2"
    assert AlphaPolicy.parse("outdegree").kind == "outdegree"
    for bad in ("fixed", "uniform:0.5:0.1", "fixed:2", "foo", "uniform:a:b"):
        with pytest.raises(ValidationError):
            AlphaPolicy.parse(bad)


def test_outdegree_policy():
    g = InfluenceGraph.from_edges([(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
    a = AlphaPolicy.parse("outdegree").sample(g, np.random.default_rng(0))
    assert a.tolist() == [1.0, 0.5, 0.0]


def test_fixed_zero_gives_zero_curve():
    g = power_law_graph(60, random_state=1)
    (cs,) = run_alpha_experiment(g, ["fixed:0"], n_runs=2, k=3, n_samples=50)
    assert not cs.spread.any()
    assert cs.spread.shape == (2, 3)


def test_alpha_experiment_reproducible():
    g = power_law_graph(80, random_state=2)
    a = run_alpha_experiment(g, ["uniform:0:1"], n_runs=2, k=4, n_samples=60, seed=5)
    b = run_alpha_experiment(g, ["uniform:0:1"], n_runs=2, k=4, n_samples=60, seed=5)
    assert a[0].as_dict() == b[0].as_dict()


def test_orgtree_delta_zero():
    (row,) = run_orgtree_sweep([0.0], n_samples=800)
    assert row["sigma_D"] > row["sigma_M1"]
    with pytest.raises(ValidationError):
        run_orgtree_sweep([0.8], n_samples=10)


def test_ic_vs_icint_overlap_range():
    g = power_law_graph(100, random_state=3)
    res = run_ic_vs_icint(g, k=5, n_runs=3, n_samples=100)
    assert res.overlap.shape == (3,)
    assert np.all((res.overlap >= 0) & (res.overlap <= 100))
    assert res.ic.spread.shape == (1, 5)


def test_ic_vs_icint_star_full_overlap():
    g = InfluenceGraph.from_edges([(0, i, 1.0) for i in range(1, 8)])
    res = run_ic_vs_icint(g, k=1, n_runs=4, n_samples=100, policy="fixed:1")
    assert res.overlap.tolist() == [100.0] * 4
