import itertools
import random

import pytest

from layouttree import (Con, CostModel, Idx, Vec, brute_force_optimal, cost,
                        detect_indexed_bucket, detect_strided_bucket,
                        proper_divisors, repeated, repetition_candidate,
                        strided)

from conftest import FIG_SEQ
from helpers import tile_expand


@pytest.mark.parametrize("seq,q,expected", [
    ([0, 2, 4, 6], 2, True),
    ([0, 1, 2, 3], 2, True),
    (FIG_SEQ, 5, False),       # second block steps -4 where the first steps 1
    ([0, 1, 10, 11], 2, True),
    ([0, 1, 10, 12], 2, False),
    ([5, 5, 5, 5], 2, True),
])
def test_repeated(seq, q, expected):
    assert repeated(seq, q) is expected


def test_repeated_matches_explicit_tiling():
    rng = random.Random(21)
    for _ in range(300):
        n = rng.choice((2, 4, 6, 8, 9, 12))
        seq = [rng.randint(-9, 9) for _ in range(n)]
        for q in proper_divisors(n):
            starts = [seq[r * q] for r in range(n // q)]
            tiled = tile_expand(seq[:q], starts)
            assert repeated(seq, q) == (tiled == seq)


@pytest.mark.parametrize("q", [0, 3, 4, 5])
def test_repeated_rejects_bad_divisor(q):
    with pytest.raises(ValueError):
        repeated([0, 1, 2, 3], q)


@pytest.mark.parametrize("values,expected", [
    ([3, 5, 7, 9, 11], 2),
    ([0, 2, 5], None),
    ([7, 7, 7], 0),
    ([4], None),
    ([], None),
    ([1, 0, -1], -1),
])
def test_strided(values, expected):
    assert strided(values) == expected


def test_proper_divisors():
    assert proper_divisors(12) == [1, 2, 3, 4, 6]
    assert proper_divisors(7) == [1]
    assert proper_divisors(1) == []


# --- idx/vec-rooted candidates ----------------------------------------------


def _prefix_oracle(seg):
    def get(q):
        block = [v - seg[0] for v in seg[:q]]
        return brute_force_optimal(block)
    return get


@pytest.mark.parametrize("seg,expected_tree,expected_cost", [
    ([0, 2, 4, 6, 8], Vec(5, 2, Con(1)), 2),
    ([0, 7, 9], Idx(3, (0, 7, 9), Con(1)), 5),
    ([0, 1, 10, 11], Vec(2, 10, Con(2)), 2),
])
def test_repetition_candidate_examples(seg, expected_tree, expected_cost):
    got = repetition_candidate(seg, _prefix_oracle(seg))
    assert got == expected_tree
    assert cost(got) == expected_cost


def test_repetition_candidate_none_for_singletons():
    assert repetition_candidate([0], _prefix_oracle([0])) is None


def test_repetition_candidate_is_least_cost_of_its_family():
    # exhaustive family enumeration: every divisor, idx and vec roots
    rng = random.Random(22)
    for _ in range(200):
        n = rng.choice((2, 3, 4, 6, 8, 12))
        seg = [0] + [rng.randint(-8, 8) for _ in range(n - 1)]
        get = _prefix_oracle(seg)
        got = repetition_candidate(seg, get)
        family = []
        for q in proper_divisors(n):
            starts = [seg[r * q] for r in range(n // q)]
            if tile_expand(seg[:q], starts) != seg:
                continue
            child = get(q)
            family.append(Idx(n // q, tuple(starts), child))
            d = strided(starts)
            if d is not None:
                family.append(Vec(n // q, d, child))
        assert family, "q = 1 always tiles"
        assert cost(got) == min(cost(t) for t in family)


def test_repetition_candidate_respects_cost_model():
    # expensive lookups push the choice from idx toward vec
    model = CostModel(k_idx=1, k_lookup=50)
    seg = [0, 2, 4, 6]
    got = repetition_candidate(seg, _prefix_oracle(seg), model)
    assert type(got) is Vec


# --- bucket detectors -------------------------------------------------------


def test_strided_bucket_example():
    pat = detect_strided_bucket([0, 2, 4, 10, 20, 22])
    assert (pat.count, pat.stride, pat.substride, pat.sizes) == (3, 10, 2, (3, 1, 2))
    assert pat.expand() == [0, 2, 4, 10, 20, 22]


def test_strided_bucket_uniform_degenerates_to_one_bucket():
    pat = detect_strided_bucket([0, 5, 10, 15])
    assert (pat.count, pat.sizes, pat.substride) == (1, (4,), 5)
    assert pat.expand() == [0, 5, 10, 15]


def test_strided_bucket_tail_bucket():
    # the break at 9 fixes the bucket stride; the single-element tail bucket
    # still fits the pattern
    pat = detect_strided_bucket([0, 2, 4, 9])
    assert (pat.count, pat.stride, pat.substride, pat.sizes) == (2, 9, 2, (3, 1))
    assert pat.expand() == [0, 2, 4, 9]


def test_strided_bucket_singleton_first():
    pat = detect_strided_bucket([0, 2, 4, 5, 6])
    assert (pat.count, pat.stride, pat.substride, pat.sizes) == (3, 2, 1, (1, 1, 3))
    assert pat.expand() == [0, 2, 4, 5, 6]


def test_strided_bucket_absent():
    assert detect_strided_bucket([0, 2, 4, 7, 8]) is None
    assert detect_strided_bucket([0, 1, 5, 3]) is None


def test_strided_bucket_zero_strides():
    pat = detect_strided_bucket([0, 0, 0])
    assert pat is not None and pat.expand() == [0, 0, 0]


def test_strided_bucket_expansion_matches_everywhere():
    rng = random.Random(23)
    for _ in range(500):
        if rng.random() < 0.5:
            # genuinely bucket-shaped input
            c = rng.randint(1, 4)
            d = rng.randint(-20, 20)
            e = rng.randint(-5, 5)
            sizes = [rng.randint(1, 3) for _ in range(c)]
            values = [r * d + k * e for r in range(c) for k in range(sizes[r])]
        else:
            values = [0] + [rng.randint(-10, 10) for _ in range(rng.randint(1, 7))]
        if len(values) < 2:
            continue
        pat = detect_strided_bucket(values)
        if pat is not None:
            assert pat.expand() == values
            assert sum(pat.sizes) == len(values)


def test_indexed_bucket_merges_every_matching_step():
    pat = detect_indexed_bucket([0, 5, 25, 30, 35, 40])
    # step 5 occurs four times, so 40 joins the 25-30-35 run
    assert (pat.substride, pat.count, pat.indices, pat.sizes) == (5, 2, (0, 25), (2, 4))
    assert pat.expand() == [0, 5, 25, 30, 35, 40]


def test_indexed_bucket_single_bucket():
    pat = detect_indexed_bucket([0, 1, 2, 3])
    assert (pat.substride, pat.count, pat.indices, pat.sizes) == (1, 1, (0,), (4,))


def test_indexed_bucket_tie_breaks_to_smallest_stride():
    pat = detect_indexed_bucket([0, 10, 25])
    assert (pat.substride, pat.count, pat.sizes) == (10, 2, (2, 1))
    assert pat.indices == (0, 25)


def test_indexed_bucket_count_is_minimal():
    # exhaust every candidate substride on small lists
    rng = random.Random(24)
    for _ in range(300):
        m = rng.randint(2, 8)
        values = [0] + [rng.randint(-12, 12) for _ in range(m - 1)]
        pat = detect_indexed_bucket(values)
        assert pat.expand() == values
        strides = {values[p + 1] - values[p] for p in range(m - 1)}
        best = min(1 + sum(1 for p in range(m - 1)
                           if values[p + 1] - values[p] != e)
                   for e in strides)
        assert pat.count == best


def test_indexed_bucket_rejects_short_input():
    with pytest.raises(ValueError):
        detect_indexed_bucket([1])
    with pytest.raises(ValueError):
        detect_strided_bucket([1])
