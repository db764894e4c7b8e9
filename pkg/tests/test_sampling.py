import numpy as np
import pytest

from intrinsic_im._parallel import thread_limit
from intrinsic_im.exceptions import ValidationError
from intrinsic_im.generators import org_tree, power_law_graph
from intrinsic_im.graph import InfluenceGraph
from intrinsic_im.sampling import (
    Mode,
    SampleSet,
    SamplerConfig,
    generate_sample,
    intrinsically_active,
    reachable_count,
    uniform_stream,
)


def _binomial_band(n, p, z=3.0):
    mu, sd = n * p, np.sqrt(n * p * (1 - p))
    return mu - z * sd, mu + z * sd


def test_zero_probability_edges_never_live():
    g = InfluenceGraph.from_edges([(0, 1, 0.0), (1, 2, 0.0)], alpha=0.3)
    cfg = SamplerConfig(1, 200, "ic")
    assert not any(generate_sample(g, cfg, i).live_edges.any() for i in range(200))


def test_certain_edges_always_live():
    g = InfluenceGraph.from_edges([(0, 1, 1.0), (1, 2, 1.0)])
    cfg = SamplerConfig(1, 200, "ic")
    assert all(generate_sample(g, cfg, i).live_edges.all() for i in range(200))


def test_edge_frequency_binomial():
    g = InfluenceGraph.from_edges([(0, 1, 0.8)])
    cfg = SamplerConfig(2024, 10000, Mode.PLAIN_IC)
    ss = SampleSet(g, cfg)
    hits = int(np.sum(np.diff(ss.fw_ptr[:, :2], axis=1)))
    assert 0.78 * 10000 <= hits <= 0.82 * 10000


def test_icint_edge_probability_uses_target_alpha():
    g = InfluenceGraph.from_edges([(0, 1, 0.5)], alpha=[0.0, 0.5])
    ss = SampleSet(g, SamplerConfig(5, 20000, Mode.IC_INT))
    lo, hi = _binomial_band(20000, 0.25)
    assert lo <= ss.n_live_edges <= hi


def test_reachable_count_examples():
    g = InfluenceGraph.from_edges([(0, 1, 1.0), (1, 2, 1.0)])
    s = generate_sample(g, SamplerConfig(0, 1, "ic"), 0)
    assert reachable_count(s, g, [], []) == 0
    assert reachable_count(s, g, [0], [0]) == 2


def test_reachable_count_org_tree_all_live():
    g = org_tree()
    s = generate_sample(g, SamplerConfig(0, 1, "ic"), 0)
    s = type(s)(0, np.ones(g.n_edges, bool), s.intrinsic_draws, s.edge_draws)
    assert reachable_count(s, g, ["D"], ["D"]) == 22


def test_excluded_sources_not_counted_even_if_reachable():
    g = InfluenceGraph.from_edges([(0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)])
    s = generate_sample(g, SamplerConfig(0, 1, "ic"), 0)
    assert reachable_count(s, g, [0, 1], [0, 1]) == 1


@pytest.mark.parametrize("alpha, expected", [(1.0, {0, 1, 2}), (0.0, set())])
def test_intrinsically_active_degenerate(alpha, expected):
    g = InfluenceGraph(3, [], [], [], alpha=alpha)
    s = generate_sample(g, SamplerConfig(9, 3), 2)
    assert intrinsically_active(s, [0, 1, 2], g) == expected


def test_intrinsic_activation_count_alpha_095():
    g = org_tree()
    ss = SampleSet(g, SamplerConfig(77, 3200))
    hits = int(ss.active[:, g.node_id("D")].sum())
    assert 2944 <= hits <= 3136


def test_intrinsic_draw_reused_across_candidate_sets():
    g = org_tree()
    s = generate_sample(g, SamplerConfig(3, 10), 4)
    big = intrinsically_active(s, range(g.n_nodes), g)
    small = intrinsically_active(s, [0, 1, 2], g)
    assert small == big & {0, 1, 2}


def test_streams_are_counter_based_and_prefix_stable():
    a = uniform_stream(11, 5, 0, 100)
    assert np.array_equal(uniform_stream(11, 5, 0, 40), a[:40])
    assert not np.array_equal(uniform_stream(11, 6, 0, 100), a)
    assert not np.array_equal(uniform_stream(11, 5, 1, 100), a)
    assert not np.array_equal(uniform_stream(12, 5, 0, 100), a)


def test_sample_set_matches_generate_sample():
    g = power_law_graph(150, random_state=4)
    cfg = SamplerConfig(8, 25)
    ss = SampleSet(g, cfg)
    for i in range(cfg.n_samples):
        s = generate_sample(g, cfg, i)
        assert np.array_equal(ss.node_draws[i], s.intrinsic_draws)
        live = np.flatnonzero(s.live_edges)
        for u in range(g.n_nodes):
            fw = ss.fw_dst[ss.fw_ptr[i, u]:ss.fw_ptr[i, u + 1]]
            assert sorted(fw.tolist()) == sorted(g.dst[live[g.src[live] == u]].tolist())
            rv = ss.rv_src[ss.rv_ptr[i, u]:ss.rv_ptr[i, u + 1]]
            assert sorted(rv.tolist()) == sorted(g.src[live[g.dst[live] == u]].tolist())


def test_sample_set_deterministic_under_thread_counts():
    g = power_law_graph(200, random_state=1)
    cfg = SamplerConfig(123, 50)
    with thread_limit(1):
        a = SampleSet(g, cfg)
    with thread_limit(-1):
        b = SampleSet(g, cfg)
    assert np.array_equal(a.fw_dst, b.fw_dst)
    assert np.array_equal(a.node_draws, b.node_draws)


def test_one_sample_serves_many_alphas():
    g = org_tree()
    cfg = SamplerConfig(5, 4)
    s1 = generate_sample(g, cfg, 2)
    s2 = generate_sample(g.with_alpha(0.9), cfg, 2)
    assert np.array_equal(s1.intrinsic_draws, s2.intrinsic_draws)
    assert np.array_equal(s1.edge_draws, s2.edge_draws)


def test_config_validation():
    with pytest.raises(ValidationError):
        SamplerConfig(0, 0)
    with pytest.raises(ValidationError):
        SamplerConfig(-1, 10)
    with pytest.raises(ValidationError):
        SamplerConfig(0, 10, "sir")
    with pytest.raises(ValidationError):
        generate_sample(org_tree(), SamplerConfig(0, 3), 3)
