import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphhac.heaps import (
    TREE_OPS,
    MeldNeighborHeap,
    TreeNeighborHeap,
    new_heap,
)

IMPLS = [TreeNeighborHeap, MeldNeighborHeap]


@pytest.mark.parametrize("cls", IMPLS)
def test_point_edits(cls):
    h = cls()
    h.insert(7, 0.5)
    assert dict(h.entries()) == {7: 0.5}
    h.update(7, 0.9)
    assert dict(h.entries()) == {7: 0.9}
    with pytest.raises(KeyError):
        h.insert(7, 0.1)
    with pytest.raises(KeyError):
        h.update(3, 0.1)
    with pytest.raises(KeyError):
        h.delete(3)
    assert h.delete(7) == 0.9
    assert len(h) == 0


@pytest.mark.parametrize("cls", IMPLS)
def test_failed_edits_leave_heap_intact(cls):
    entries = [(k, k / 10.0) for k in (3, 1, 4, 15, 9, 2, 6)]
    h = cls(entries)
    for bad_op in (
        lambda: h.insert(4, 0.99),
        lambda: h.update(5, 0.5),
        lambda: h.delete(5),
        lambda: h.relabel(5, 7, max),
    ):
        with pytest.raises(KeyError):
            bad_op()
        assert sorted(h.entries()) == sorted(entries)
        assert h.best_edge() == (15, 1.5)


@pytest.mark.parametrize("cls", IMPLS)
def test_best_edge_tie_breaks_smaller_key(cls):
    h = cls([(2, 0.5), (7, 0.9), (4, 0.9)])
    assert h.best_edge() == (4, 0.9)
    assert cls([(5, 1.0)]).best_edge() == (5, 1.0)
    with pytest.raises(KeyError):
        cls().best_edge()


@pytest.mark.parametrize("cls", IMPLS)
def test_union_combines(cls):
    a = cls([(1, 0.3), (2, 0.5)])
    b = cls([(2, 0.7), (3, 0.1)])
    merged = a.union(b, max)
    assert dict(merged.entries()) == {1: 0.3, 2: 0.7, 3: 0.1}

    a = cls([(2, 0.4)])
    b = cls([(2, 0.8)])
    assert dict(a.union(b, lambda x, y: (x + y) / 2).entries()) == pytest.approx({2: 0.6})

    a = cls([(1, 0.3)])
    assert dict(a.union(cls(), max).entries()) == {1: 0.3}


@pytest.mark.parametrize("cls", IMPLS)
def test_relabel(cls):
    h = cls([(1, 0.3), (2, 0.5)])
    h.relabel(1, 9, max)
    assert dict(h.entries()) == {9: 0.3, 2: 0.5}

    h = cls([(1, 0.3), (2, 0.5)])
    h.relabel(1, 2, max)
    assert dict(h.entries()) == {2: 0.5}

    h = cls([(1, 0.3), (2, 0.5)])
    h.relabel(1, 2, lambda x, y: x + y)
    assert dict(h.entries()) == {2: 0.8}

    with pytest.raises(KeyError):
        cls([(2, 0.5)]).relabel(1, 9, max)


def _apply_op(heaps, op):
    """Apply one random op to parallel (tree, meld) heaps, oracle dict in [2]."""
    tree, meld, oracle = heaps
    kind = op[0]
    if kind == "insert":
        _, k, p = op
        if k in oracle:
            return
        tree.insert(k, p)
        meld.insert(k, p)
        oracle[k] = p
    elif kind == "update":
        _, k, p = op
        if k not in oracle:
            return
        tree.update(k, p)
        meld.update(k, p)
        oracle[k] = p
    elif kind == "delete":
        _, k = op
        if k not in oracle:
            return
        assert tree.delete(k) == meld.delete(k) == oracle.pop(k)
    elif kind == "relabel":
        _, old, new = op
        if old not in oracle or old == new:
            return
        tree.relabel(old, new, max)
        meld.relabel(old, new, max)
        p = oracle.pop(old)
        oracle[new] = max(oracle[new], p) if new in oracle else p


def _check_equal(heaps):
    tree, meld, oracle = heaps
    assert dict(tree.entries()) == oracle
    assert dict(meld.entries()) == oracle
    if oracle:
        best = tree.best_edge()
        assert best == meld.best_edge()
        # oracle: max priority, ties to smaller key, by linear scan
        bp = max(oracle.values())
        bk = min(k for k, v in oracle.items() if v == bp)
        assert best == (bk, bp)


_ops = st.one_of(
    st.tuples(st.just("insert"), st.integers(0, 30), st.floats(0, 1, allow_nan=False)),
    st.tuples(st.just("update"), st.integers(0, 30), st.floats(0, 1, allow_nan=False)),
    st.tuples(st.just("delete"), st.integers(0, 30)),
    st.tuples(st.just("relabel"), st.integers(0, 30), st.integers(0, 30)),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(_ops, max_size=60))
def test_representations_equivalent_hypothesis(ops):
    heaps = (TreeNeighborHeap(), MeldNeighborHeap(), {})
    for op in ops:
        _apply_op(heaps, op)
        _check_equal(heaps)


def test_representations_equivalent_long_random_run():
    """>= 10^4 random ops, including unions, against the dict oracle."""
    rng = random.Random(42)
    pools = [(TreeNeighborHeap(), MeldNeighborHeap(), {}) for _ in range(8)]
    for step in range(10_000):
        which = rng.randrange(len(pools))
        r = rng.random()
        if r < 0.45:
            op = ("insert", rng.randrange(400), rng.random())
        elif r < 0.6:
            op = ("update", rng.randrange(400), rng.random())
        elif r < 0.75:
            op = ("delete", rng.randrange(400))
        elif r < 0.9:
            op = ("relabel", rng.randrange(400), rng.randrange(400))
        else:
            other = rng.randrange(len(pools))
            if other == which:
                continue
            ta, ma, oa = pools[which]
            tb, mb, ob = pools[other]
            merged_oracle = dict(ob)
            for k, v in oa.items():
                merged_oracle[k] = max(merged_oracle[k], v) if k in merged_oracle else v
            pools[which] = (ta.union(tb, max), ma.union(mb, max), merged_oracle)
            pools[other] = (TreeNeighborHeap(), MeldNeighborHeap(), {})
            _check_equal(pools[which])
            continue
        _apply_op(pools[which], op)
        if step % 23 == 0:
            _check_equal(pools[which])
    for h in pools:
        _check_equal(h)


def test_union_key_sets_match_map_merge_oracle():
    rng = random.Random(7)
    for _ in range(50):
        ea = {rng.randrange(100): rng.random() for _ in range(rng.randrange(1, 40))}
        eb = {rng.randrange(100): rng.random() for _ in range(rng.randrange(1, 40))}
        expect = dict(eb)
        for k, v in ea.items():
            expect[k] = (expect[k] + v) / 2 if k in expect else v
        merged = TreeNeighborHeap(ea.items()).union(
            TreeNeighborHeap(eb.items()), lambda x, y: (x + y) / 2
        )
        assert dict(merged.entries()) == pytest.approx(expect)


def test_tree_union_cost_bound():
    """Union of tree sizes (s, l) stays within c*s*(log2(l/s+1)+1) node
    operations; observed worst factor is ~3.7, c = 8 documented."""
    c = 8.0
    rng = random.Random(0)
    for _ in range(120):
        s = rng.randint(1, 150)
        l = rng.randint(s, 1500)
        a = TreeNeighborHeap((k, rng.random()) for k in rng.sample(range(8000), s))
        b = TreeNeighborHeap((k, rng.random()) for k in rng.sample(range(8000), l))
        TREE_OPS.count = 0
        a.union(b, max)
        assert TREE_OPS.count <= c * s * (math.log2(l / s + 1) + 1)


def test_new_heap_factory():
    assert isinstance(new_heap("tree"), TreeNeighborHeap)
    assert isinstance(new_heap("meld"), MeldNeighborHeap)
    with pytest.raises(ValueError):
        new_heap("bogus")
