import pytest
from hypothesis import given, strategies as st

from intrinsic_im.exceptions import EmptyList, InvalidP, ValidationError
from intrinsic_im.rank_compare import compare_rankings, jaccard, rbo

perm = st.lists(st.integers(0, 30), min_size=1, max_size=15, unique=True)
ps = st.floats(0.05, 0.95)


def test_jaccard_examples():
    assert jaccard({1, 2, 3}, {2, 3, 4}) == 0.5
    assert jaccard([1, 2], [2, 1]) == 1.0
    assert jaccard([1], [2]) == 0.0
    assert jaccard([], []) == 1.0


def test_rbo_hand_example():
    assert rbo([1, 2], [2, 1], 0.9) == pytest.approx(0.9, abs=1e-12)


@given(perm, ps)
def test_rbo_identity(a, p):
    assert rbo(a, a, p) == pytest.approx(1.0, abs=1e-12)


@given(perm, ps)
def test_rbo_disjoint(a, p):
    assert rbo(a, [x + 100 for x in a], p) == 0.0


@given(perm, perm, ps)
def test_rbo_symmetric_and_bounded(a, b, p):
    r = rbo(a, b, p)
    assert r == pytest.approx(rbo(b, a, p), abs=1e-12)
    assert -1e-12 <= r <= 1 + 1e-12


@given(perm, perm)
def test_jaccard_symmetric_and_bounded(a, b):
    j = jaccard(a, b)
    assert j == jaccard(b, a) and 0.0 <= j <= 1.0


@pytest.mark.parametrize("p", [0.5, 0.8, 0.9, 0.98])
def test_rbo_top_weighted(p):
    a = list(range(10))
    top = a[:]
    top[0], top[1] = top[1], top[0]
    deep = a[:]
    deep[7], deep[8] = deep[8], deep[7]
    assert rbo(a, top, p) < rbo(a, deep, p) < 1.0


def test_rbo_truncates_to_shorter():
    assert rbo([1, 2, 3, 4], [1, 2]) == pytest.approx(1.0)


def test_rbo_errors():
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(InvalidP):
            rbo([1], [1], p)
    with pytest.raises(EmptyList):
        rbo([], [1])
    with pytest.raises(ValidationError):
        rbo([1, 1], [1, 2])


def test_compare_rankings_rows():
    rows = compare_rankings(list(range(50)), list(range(50)), [10, 20])
    assert [r["k"] for r in rows] == [10, 20]
    assert all(r["jaccard"] == 1.0 and r["rbo"] == pytest.approx(1.0) for r in rows)
