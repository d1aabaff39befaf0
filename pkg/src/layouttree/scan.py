"""Linear-time pattern detectors over integer sequences.

Everything here answers one question: can this run of values be produced by a
single constructor over a shorter block?  The checks are deliberately dumb
single scans; the reconstruction engine calls them once per candidate block
size, and the detectors never look at a value twice.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Optional, Sequence

from .core import (CostModel, Idx, TypeNode, UNIT_MODEL, Vec, cost)


def proper_divisors(n: int) -> list[int]:
    """All divisors of n except n itself, ascending."""
    small, large = [], []
    for q in range(1, isqrt(n) + 1):
        if n % q == 0:
            small.append(q)
            other = n // q
            if other != q and other != n:
                large.append(other)
    large.reverse()
    out = small + large
    if out and out[-1] == n:
        out.pop()
    return out


def blocks_repeat(delta: Sequence[int], start: int, q: int, blocks: int) -> bool:
    """Block-repetition test on a precomputed difference array.

    ``delta`` holds consecutive differences of the underlying sequence; the
    segment starts at ``start`` and consists of ``blocks`` blocks of length
    ``q``.  Every block must have the same internal differences as block 0;
    the gaps between blocks are unconstrained.
    """
    if q == 1:
        return True
    base = delta[start:start + q - 1]
    for r in range(1, blocks):
        s0 = start + r * q
        if delta[s0:s0 + q - 1] != base:
            return False
    return True


def repeated(seq: Sequence[int], q: int) -> bool:
    """True when the length-q prefix tiles the whole sequence.

    Tiling compares offsets within each block, so the blocks may start at
    arbitrary positions: seq[j] - seq[0] == seq[i*q + j] - seq[i*q] for all
    blocks i and in-block positions j.  ``q`` must be a proper divisor of
    len(seq).
    """
    n = len(seq)
    if not 1 <= q < n or n % q != 0:
        raise ValueError(f"q={q} must be a divisor of the length {n} with q < n")
    delta = [seq[p + 1] - seq[p] for p in range(n - 1)]
    return blocks_repeat(delta, 0, q, n // q)


def strided(values: Sequence[int]) -> Optional[int]:
    """The common difference of an arithmetic progression, or None.

    Lists shorter than two elements carry no stride claim and yield None.
    """
    if len(values) < 2:
        return None
    d = values[1] - values[0]
    for p in range(2, len(values)):
        if values[p] - values[p - 1] != d:
            return None
    return d


@dataclass(frozen=True, slots=True)
class BucketPattern:
    """A run of values grouped into equally spaced in-bucket steps.

    ``kind`` is "strided-bucket" (bucket r starts at r*stride) or
    "indexed-bucket" (bucket r starts at indices[r]).  Within bucket r the
    ``sizes[r]`` values step by ``substride``.
    """

    kind: str
    count: int
    substride: int
    sizes: tuple[int, ...]
    stride: int = 0
    indices: tuple[int, ...] | None = None

    def expand(self) -> list[int]:
        """Re-create the value list this pattern describes."""
        out = []
        for r in range(self.count):
            base = self.indices[r] if self.indices is not None else r * self.stride
            for k in range(self.sizes[r]):
                out.append(base + k * self.substride)
        return out


def _scan_bucket_first(v: Sequence[int]) -> Optional[BucketPattern]:
    # Reading v[1]-v[0] as the in-bucket step; the first break fixes the
    # bucket stride, after which the (substride, stride) pattern must hold.
    m = len(v)
    e = v[1] - v[0]
    i = 2
    while i < m and v[i] - v[i - 1] == e:
        i += 1
    if i == m:
        return BucketPattern("strided-bucket", 1, e, (m,), stride=0)
    d = v[i] - v[0]
    sizes = [i]
    base = v[i]
    size = 1
    for p in range(i + 1, m):
        if v[p] - v[p - 1] == e:
            size += 1
        elif v[p] - base == d:
            sizes.append(size)
            base = v[p]
            size = 1
        else:
            return None
    sizes.append(size)
    return BucketPattern("strided-bucket", len(sizes), e, tuple(sizes), stride=d)


def _scan_singleton_first(v: Sequence[int]) -> Optional[BucketPattern]:
    # Reading v[1]-v[0] as the bucket stride over singleton buckets; the
    # first break fixes the in-bucket step.
    m = len(v)
    d = v[1] - v[0]
    i = 2
    while i < m and v[i] - v[i - 1] == d:
        i += 1
    if i == m:
        return None  # uniform run, already reported by the bucket-first scan
    e = v[i] - v[i - 1]
    sizes = [1] * (i - 1)
    base = v[i - 1]
    size = 2
    for p in range(i + 1, m):
        if v[p] - v[p - 1] == e:
            size += 1
        elif v[p] - base == d:
            sizes.append(size)
            base = v[p]
            size = 1
        else:
            return None
    sizes.append(size)
    return BucketPattern("strided-bucket", len(sizes), e, tuple(sizes), stride=d)


def detect_strided_bucket(values: Sequence[int]) -> Optional[BucketPattern]:
    """Match values against buckets at 0, d, 2d, ... with a common in-bucket
    step, allowing per-bucket sizes.

    Tries the first gap as the in-bucket step, then as the bucket stride; a
    uniform progression comes back as a single degenerate bucket.  Returns
    None when a value extends neither the current bucket nor starts the next.
    """
    if len(values) < 2:
        raise ValueError("need at least two values")
    v = list(values)
    return _scan_bucket_first(v) or _scan_singleton_first(v)


def detect_indexed_bucket(values: Sequence[int]) -> BucketPattern:
    """Group values into the fewest buckets sharing one in-bucket step.

    The step that occurs most often among consecutive differences merges the
    most neighbours, so it minimizes the bucket count; frequency ties break
    toward the smallest absolute step, then the smaller signed value.  Always
    succeeds (worst case: every bucket has size one).
    """
    v = list(values)
    m = len(v)
    if m < 2:
        raise ValueError("need at least two values")
    freq = Counter(v[p + 1] - v[p] for p in range(m - 1))
    e = min(freq, key=lambda s: (-freq[s], abs(s), s))
    starts = [v[0]]
    sizes = []
    size = 1
    for p in range(1, m):
        if v[p] - v[p - 1] == e:
            size += 1
        else:
            sizes.append(size)
            starts.append(v[p])
            size = 1
    sizes.append(size)
    return BucketPattern("indexed-bucket", len(sizes), e, tuple(sizes),
                         indices=tuple(starts))


def repetition_candidate(
    seg: Sequence[int],
    prefix_solutions: Callable[[int], TypeNode],
    model: CostModel = UNIT_MODEL,
) -> Optional[TypeNode]:
    """Cheapest idx- or vec-rooted tree for a zero-rebased segment.

    Enumerates every proper divisor q of the length; when the length-q prefix
    tiles the segment, builds idx(count, starts, prefix_tree) and, if the
    block starts are evenly spaced, vec(count, stride, prefix_tree).
    ``prefix_solutions(q)`` must return an optimal tree for the rebased
    length-q prefix.  The q = 1 case always tiles, so a candidate exists for
    any segment of length >= 2; length-1 segments yield None.
    """
    l = len(seg)
    if l < 2:
        return None
    base0 = seg[0]
    delta = [seg[p + 1] - seg[p] for p in range(l - 1)]
    best: TypeNode | None = None
    best_key: tuple[int, int] | None = None

    def consider(tree: TypeNode, rank: int) -> None:
        nonlocal best, best_key
        key = (cost(tree, model), rank)
        if best_key is None or key < best_key:
            best, best_key = tree, key

    for q in proper_divisors(l):
        c = l // q
        if not blocks_repeat(delta, 0, q, c):
            continue
        child = prefix_solutions(q)
        starts = tuple(seg[r * q] - base0 for r in range(c))
        consider(Idx(c, starts, child), 2)
        d = strided(starts)
        if d is not None:
            consider(Vec(c, d, child), 1)
    return best
