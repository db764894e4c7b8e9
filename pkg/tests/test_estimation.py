
import numpy as np
import pytest
from hypothesis import given, strategies as st

from intrinsic_im.estimation import (
    K_IN,
    K_OUT,
    InteractionLog,
    OfflineFollowerProvider,
    build_interaction_graph,
    estimate_parameters,
    prune_low_out_degree,
    snowball_sample,
)
from intrinsic_im.exceptions import ExhaustedProviderWarning, ValidationError


def test_estimate_mixed_user():
    log = InteractionLog({"i": 5}, {("j1", "i"): 3, ("j2", "i"): 2})
    est = estimate_parameters(log)
    assert est.alpha["i"] == pytest.approx(0.5)
    assert est.weights[("j1", "i")] == pytest.approx(0.6)
    assert est.weights[("j2", "i")] == pytest.approx(0.4)


def test_estimate_pure_spreader_and_creator():
    log = InteractionLog({"s": 0, "c": 7}, {("j", "s"): 4})
    est = estimate_parameters(log)
    assert est.alpha["s"] == 0.0
    assert est.alpha["c"] == 1.0
    assert not any(i == "c" for _, i in est.weights)


def test_estimate_no_activity_gets_default():
    est = estimate_parameters(InteractionLog({"q": 0}), default_alpha=0.3)
    assert est.alpha["q"] == 0.3 and est.no_activity == ["q"]


def test_weight_rows_sum_to_one():
    rng = np.random.default_rng(1)
    inter = {(f"u{j}", f"u{i}"): int(rng.integers(0, 5))
             for j in range(6) for i in range(6) if i != j}
    est = estimate_parameters(InteractionLog({}, inter))
    rows = {}
    for (_, i), w in est.weights.items():
        rows[i] = rows.get(i, 0.0) + w
    assert all(abs(s - 1.0) < 1e-12 for s in rows.values())


def test_negative_counts_rejected():
    with pytest.raises(ValidationError):
        InteractionLog({"a": -1})
    with pytest.raises(ValidationError):
        InteractionLog({}, {("a", "a"): 1})


@given(st.integers(0, 50), st.integers(1, 50), st.integers(1, 20))
def test_alpha_monotone_in_counts(k, gamma, step):
    def alpha(k, g):
        return estimate_parameters(InteractionLog({"i": k}, {("j", "i"): g})).alpha["i"]
    assert alpha(k + step, gamma) > alpha(k, gamma)
    if k > 0:
        assert alpha(k, gamma + step) < alpha(k, gamma)


def test_build_graph_zero_interactions_raw_one():
    g, report = build_interaction_graph(["a", "b", "c"], [("a", "c"), ("b", "c")],
                                        InteractionLog())
    assert g.weight.tolist() == [0.5, 0.5]
    assert report.dropped_pairs == 0
    assert set(report.no_activity) == {"a", "b", "c"}


def test_build_graph_smoothing_example():
    log = InteractionLog({"c": 5}, {("a", "c"): 3, ("b", "c"): 0})
    g, _ = build_interaction_graph(["a", "b", "c"], [("a", "c"), ("b", "c")], log)
    w = {(g.labels[u], g.labels[v]): x for u, v, x in zip(g.src, g.dst, g.weight)}
    assert w[("a", "c")] == pytest.approx(0.8)
    assert w[("b", "c")] == pytest.approx(0.2)
    # smoothed gamma_c = 4 + 1
    assert g.alpha[g.node_id("c")] == pytest.approx(0.5)


def test_build_graph_empty_log_uniform_rows():
    edges = [("a", "d"), ("b", "d"), ("c", "d"), ("a", "b")]
    g, _ = build_interaction_graph(list("abcd"), edges, InteractionLog(), 0.2)
    assert g.is_normalized()
    d = g.node_id("d")
    assert np.allclose(g.weight[g.dst == d], 1 / 3)
    assert np.all(g.alpha == 0.2)


def test_build_graph_drops_unknown_pairs():
    log = InteractionLog({}, {("b", "a"): 2, ("a", "b"): 1})
    g, report = build_interaction_graph(["a", "b"], [("a", "b")], log)
    assert report.dropped_pairs == 1
    assert g.n_edges == 1


def test_build_graph_unknown_node():
    with pytest.raises(ValidationError):
        build_interaction_graph(["a"], [("a", "z")], InteractionLog())


def test_prune_six_node_fixture():
    core = [("a", "b"), ("a", "c"), ("b", "c"), ("b", "a"), ("c", "a"), ("c", "b")]
    tail = [("d", "e"), ("e", "d"), ("e", "a"), ("f", "a"), ("f", "e")]
    nodes, edges = prune_low_out_degree(list("abcdef"), core + tail, 2)
    assert nodes == ["a", "b", "c"]
    assert sorted(edges) == sorted(core)


def _provider(n_users, n_follows, seed):
    rng = np.random.default_rng(seed)
    users = [f"u{i:03d}" for i in range(n_users)]
    fol = {u: [] for u in users}
    for _ in range(n_follows):
        a, b = rng.choice(n_users, 2, replace=False)
        fol[users[a]].append(users[b])
    return OfflineFollowerProvider(fol)


def test_defaults():
    assert (K_IN, K_OUT) == (15, 11)


def test_no_pruning_when_dense():
    users = [str(i) for i in range(20)]
    p = OfflineFollowerProvider({u: [v for v in users if v != u] for u in users})
    sg = snowball_sample(p, "0", k_in=3, k_out=2, n=10)
    assert len(sg.nodes) >= 10 and not sg.exhausted
    assert sg.rounds == 1


def test_pruning_invariant_and_determinism():
    p = _provider(300, 15000, 0)
    a = snowball_sample(p, "u000", k_in=15, k_out=11, n=150, random_state=4)
    b = snowball_sample(p, "u000", k_in=15, k_out=11, n=150, random_state=4)
    assert a == b
    out = {u: 0 for u in a.nodes}
    for u, v in a.edges:
        assert u in out and v in out
        out[u] += 1
    assert min(out.values()) >= 11
    assert len(a.nodes) >= 150


def test_exhausted_provider_warns():
    p = OfflineFollowerProvider({"a": ["b"], "b": ["a", "c"]})
    with pytest.warns(ExhaustedProviderWarning):
        sg = snowball_sample(p, "a", k_out=0, n=10, max_rounds=3)
    assert sg.exhausted and set(sg.nodes) == {"a", "b", "c"}


def test_snowball_bad_args():
    p = OfflineFollowerProvider({"a": ["b"]})
    with pytest.raises(ValidationError):
        snowball_sample(p, "a", k_in=0)
    with pytest.raises(ValidationError):
        snowball_sample(p, "zzz")


def test_tsv_loading(tmp_path):
    (tmp_path / "f.tsv").write_text("user\tfollower\na\tb\na\tc\nb\tc\n")
    (tmp_path / "i.tsv").write_text("followee\tfollower\tcount\na\tc\t2\na\tc\t1\n")
    (tmp_path / "k.tsv").write_text("user\tintrinsic_count\nc\t4\n")
    p = OfflineFollowerProvider.from_tsv(tmp_path / "f.tsv")
    assert p.followers("a") == ("b", "c") and p.universe() == ["a", "b", "c"]
    log = InteractionLog.from_tsv(tmp_path / "i.tsv", tmp_path / "k.tsv")
    assert log.interactions == {("a", "c"): 3} and log.intrinsic == {"c": 4}
    (tmp_path / "bad.tsv").write_text("u\tf\n")
    with pytest.raises(ValidationError):
        OfflineFollowerProvider.from_tsv(tmp_path / "bad.tsv")
