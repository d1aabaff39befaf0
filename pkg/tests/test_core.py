import random

import pytest

from layouttree import (Con, CostModel, Idx, IdxBuc, OverflowGuardError,
                        SegmentView, Strc, TreeSemanticError, Vec, VecBuc,
                        cost, flat_length, flatten, height, is_basic, is_nice,
                        make_nice, node_cost)

from conftest import FIG_SEQ, FIG_TREE
from helpers import iter_nodes, random_basic_tree, random_tree


def test_flatten_leaf():
    assert flatten(Con(5)) == [0, 1, 2, 3, 4]


def test_flatten_shifted_vector():
    tree = Idx(1, (3,), Vec(5, 2, Con(1)))
    assert flatten(tree) == [3, 5, 7, 9, 11]


def test_flatten_fig_tree():
    assert flatten(FIG_TREE) == FIG_SEQ


def test_flatten_buckets():
    vb = VecBuc(3, 10, 2, (3, 1, 2), Con(1))
    assert flatten(vb) == [0, 2, 4, 10, 20, 22]
    ib = IdxBuc(3, 5, (0, 25, 40), (2, 3, 1), Con(1))
    assert flatten(ib) == [0, 5, 25, 30, 35, 40]


def test_flatten_base_offset_property():
    rng = random.Random(1)
    for _ in range(50):
        tree = random_tree(rng, 24, extended=True)
        base = rng.randint(-100, 100)
        assert flatten(tree, base) == [v + base for v in flatten(tree)]


def test_flat_length_matches():
    rng = random.Random(2)
    for _ in range(50):
        tree = random_tree(rng, 30, extended=True)
        assert flat_length(tree) == len(flatten(tree))


@pytest.mark.parametrize("tree,expected", [
    (Con(5), 1),
    (Idx(20, tuple(FIG_SEQ), Con(1)), 22),
    (FIG_TREE, 12),
])
def test_unit_costs(tree, expected):
    assert cost(tree) == expected


def test_cost_is_additive():
    # independent summation over nodes with the formulas spelled out
    model = CostModel(k_con=2, k_vec=3, k_idx=5, k_strc=7, k_vecbuc=4,
                      k_idxbuc=6, k_lookup=2)
    rng = random.Random(3)
    for _ in range(40):
        tree = random_tree(rng, 20, extended=True)
        total = 0
        for node in iter_nodes(tree):
            t = type(node)
            if t is Con:
                total += 2
            elif t is Vec:
                total += 3
            elif t is Idx:
                total += 5 + 2 * node.count
            elif t is Strc:
                total += 7 + 4 * node.count
            elif t is VecBuc:
                total += 4 + 2 * node.count
            else:
                total += 6 + 4 * node.count
        assert cost(tree, model) == total
        assert total == sum(node_cost(x, model) for x in iter_nodes(tree))


def test_inserting_a_node_increases_cost():
    inner = Vec(3, 4, Con(2))
    assert cost(Idx(1, (0,), inner)) > cost(inner)
    assert cost(Vec(1, 0, inner)) > cost(inner)


@pytest.mark.parametrize("bad", [
    lambda: Con(0),
    lambda: Idx(2, (0,), Con(1)),
    lambda: Strc(2, (0, 1), (Con(1),)),
    lambda: VecBuc(2, 5, 1, (1, 0), Con(1)),
    lambda: IdxBuc(1, 1, (0, 4), (1,), Con(1)),
    lambda: Vec(0, 1, Con(1)),
])
def test_invariant_violations_raise(bad):
    with pytest.raises(TreeSemanticError):
        bad()


def test_flatten_overflow_guard():
    with pytest.raises(OverflowGuardError):
        flatten(Idx(1, ((1 << 62),), Vec(2, (1 << 62), Con(1))))
    # within range is fine
    assert flatten(Idx(1, ((1 << 40),), Con(2)))[0] == 1 << 40


# --- shift hoisting ---------------------------------------------------------


def test_make_nice_hoists_into_struct():
    tree = Strc(2, (0, 10), (Con(1), Idx(2, (5, 8), Con(1))))
    nice = make_nice(tree)
    assert nice == Strc(2, (0, 15), (Con(1), Idx(2, (0, 3), Con(1))))
    assert flatten(nice) == flatten(tree) == [0, 15, 18]
    assert cost(nice) == cost(tree)


def test_make_nice_fixpoint():
    tree = Idx(1, (3,), Vec(5, 2, Con(1)))
    assert make_nice(tree) == tree


def test_make_nice_hoists_through_index():
    tree = Idx(2, (4, 9), Idx(2, (1, 3), Con(1)))
    nice = make_nice(tree)
    assert nice == Idx(2, (5, 10), Idx(2, (0, 2), Con(1)))
    assert flatten(nice) == flatten(tree) == [5, 7, 10, 12]


def test_make_nice_rejects_buckets():
    with pytest.raises(TreeSemanticError):
        make_nice(VecBuc(2, 5, 1, (1, 2), Con(1)))


def test_make_nice_properties():
    rng = random.Random(4)
    models = [CostModel(), CostModel(k_con=3, k_idx=2, k_lookup=4)]
    for _ in range(200):
        tree = random_basic_tree(rng, 24)
        nice = make_nice(tree)
        assert is_nice(nice)
        assert flatten(nice) == flatten(tree)
        for model in models:
            assert cost(nice, model) == cost(tree, model)


def test_is_nice_spots_bad_trees():
    assert is_nice(FIG_TREE)
    assert not is_nice(Strc(2, (0, 10), (Con(1), Idx(2, (5, 8), Con(1)))))
    assert not is_nice(Idx(2, (4, 9), Idx(2, (1, 3), Con(1))))
    assert is_nice(Vec(2, 50, Idx(2, (5, 8), Con(1))))


def test_is_basic():
    assert is_basic(FIG_TREE)
    assert not is_basic(Vec(2, 9, IdxBuc(1, 1, (0,), (2,), Con(1))))


def test_height():
    assert height(Con(4)) == 1
    assert height(FIG_TREE) == 4


# --- segment views ----------------------------------------------------------


def test_segment_view_rebases():
    view = SegmentView([7, 9, 13, 14], 1, 3)
    assert len(view) == 3
    assert list(view) == [0, 4, 5]
    assert view[0] == 0


def test_segment_view_bounds():
    with pytest.raises(ValueError):
        SegmentView([1, 2, 3], 2, 1)
    with pytest.raises(ValueError):
        SegmentView([1, 2, 3], 0, 3)
