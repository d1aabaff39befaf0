"""Exhaustive ground-truth search for cheapest trees on small inputs.

This is the package's independent referee: it enumerates candidate trees by
direct structural recursion on the concrete subsequences (no segment graph,
no shortest paths, no compact records) and keeps the cheapest.  A tree for a
sequence is a leaf run, an idx/vec over a repeated prefix (every divisor is
tried), a strc over every ordered partition into two or more parts, or, in
extended mode, a bucket node over any of the exponentially many bucket
decompositions of the block starts.

The search restricts itself to trees in which at most one node carries a
shift, hoisted as high as possible; that restriction loses no cost (hoisting
a shift is free), and `brute_force_optimal_free` re-checks the claim on tiny
inputs by searching shifted children as well.

Everything is memoized per call, keyed by the concrete subsequence, so the
search stays comfortable up to the configured ``max_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator, Optional, Sequence

from .core import (Con, CostModel, Idx, IdxBuc, SizeLimitError,
                   SequenceFormatError, Strc, TypeNode, UNIT_MODEL, Vec,
                   VecBuc, cost, flat_length, flatten)

OPTIMAL = "optimal"
SUBOPTIMAL = "suboptimal"
NOT_REPRESENTING = "not-representing"


@dataclass(frozen=True, slots=True)
class OracleConfig:
    """Bounds for the exhaustive search."""

    max_n: int = 6
    max_cost: int | None = None
    extended: bool = False

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")


@dataclass(frozen=True, slots=True)
class Verdict:
    kind: str
    witness: TypeNode | None = None


_RANK = {Con: 0, Vec: 1, Idx: 2, VecBuc: 3, IdxBuc: 4, Strc: 5}


def _divisors_below(n: int) -> list[int]:
    small, large = [], []
    for q in range(1, isqrt(n) + 1):
        if n % q == 0:
            small.append(q)
            if q != n // q and n // q != n:
                large.append(n // q)
    large.reverse()
    out = small + large
    if out and out[-1] == n:
        out.pop()
    return out


def _tiles(s: tuple[int, ...], q: int) -> bool:
    # direct definition: every block's offsets match block zero's
    n = len(s)
    for r in range(1, n // q):
        b = r * q
        for t in range(1, q):
            if s[b + t] - s[b] != s[t] - s[0]:
                return False
    return True


def _stride_of(values: Sequence[int]) -> Optional[int]:
    if len(values) < 2:
        return None
    d = values[1] - values[0]
    for p in range(2, len(values)):
        if values[p] - values[p - 1] != d:
            return None
    return d


def _compositions(m: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in _compositions(m - first):
            yield (first,) + rest


def _strided_bucket_splits(starts: Sequence[int]):
    """Every (count, stride, substride, sizes) whose expansion equals
    ``starts``; first start must be zero."""
    m = len(starts)
    for sizes in _compositions(m):
        cnt = len(sizes)
        pos = [0]
        for b in sizes[:-1]:
            pos.append(pos[-1] + b)
        d = starts[pos[1]] - starts[pos[0]] if cnt >= 2 else 0
        e = 0
        for r in range(cnt):
            if sizes[r] >= 2:
                e = starts[pos[r] + 1] - starts[pos[r]]
                break
        expanded = []
        for r in range(cnt):
            for k in range(sizes[r]):
                expanded.append(r * d + k * e)
        if expanded == list(starts):
            yield cnt, d, e, sizes


def _indexed_bucket_splits(starts: Sequence[int]):
    """Every (count, substride, indices, sizes) whose expansion equals
    ``starts``."""
    m = len(starts)
    for sizes in _compositions(m):
        cnt = len(sizes)
        pos = [0]
        for b in sizes[:-1]:
            pos.append(pos[-1] + b)
        e = 0
        for r in range(cnt):
            if sizes[r] >= 2:
                e = starts[pos[r] + 1] - starts[pos[r]]
                break
        indices = tuple(starts[p] for p in pos)
        expanded = []
        for r in range(cnt):
            for k in range(sizes[r]):
                expanded.append(indices[r] + k * e)
        if expanded == list(starts):
            yield cnt, e, indices, sizes


class _Search:
    def __init__(self, model: CostModel, extended: bool):
        self.model = model
        self.extended = extended
        self.nf: dict[tuple, tuple[int, TypeNode]] = {}
        self.shifted: dict[tuple, tuple[int, TypeNode]] = {}
        self.splits: dict[tuple, tuple[int, tuple]] = {}

    def best(self, s: tuple[int, ...]) -> tuple[int, TypeNode]:
        return self._nf(s) if s[0] == 0 else self._shifted(s)

    def _nf(self, s: tuple[int, ...]) -> tuple[int, TypeNode]:
        hit = self.nf.get(s)
        if hit is not None:
            return hit
        m = self.model
        l = len(s)
        if s == tuple(range(l)):
            res = (m.k_con, Con(l))
            self.nf[s] = res
            return res

        best: tuple[int, int, TypeNode] | None = None

        def consider(c: int, rank: int, tree: TypeNode) -> None:
            nonlocal best
            if best is None or (c, rank) < (best[0], best[1]):
                best = (c, rank, tree)

        for q in _divisors_below(l):
            if not _tiles(s, q):
                continue
            blocks = l // q
            cc, ct = self._nf(s[:q])
            starts = tuple(s[r * q] for r in range(blocks))
            consider(m.k_idx + blocks * m.k_lookup + cc, 2,
                     Idx(blocks, starts, ct))
            d = _stride_of(starts)
            if d is not None:
                consider(m.k_vec + cc, 1, Vec(blocks, d, ct))
            if self.extended:
                for cnt, dd, ee, sizes in _strided_bucket_splits(starts):
                    consider(m.k_vecbuc + cnt * m.k_lookup + cc, 3,
                             VecBuc(cnt, dd, ee, sizes, ct))
                for cnt, ee, idxs, sizes in _indexed_bucket_splits(starts):
                    consider(m.k_idxbuc + 2 * cnt * m.k_lookup + cc, 4,
                             IdxBuc(cnt, ee, idxs, sizes, ct))

        parts = self._strc_split(s)
        if parts is not None:
            pc, items = parts
            consider(m.k_strc + pc, 5,
                     Strc(len(items), tuple(first for first, _ in items),
                          tuple(t for _, t in items)))

        assert best is not None  # the trivial idx over single elements always exists
        res = (best[0], best[2])
        self.nf[s] = res
        return res

    def _part_cost(self, piece: tuple[int, ...]) -> tuple[int, TypeNode]:
        base = piece[0]
        c, t = self._nf(tuple(v - base for v in piece))
        return 2 * self.model.k_lookup + c, t

    def _split1(self, s: tuple[int, ...]) -> tuple[int, tuple]:
        """Cheapest split of ``s`` into one or more parts; each part is
        charged two lookups plus its zero-rebased optimum."""
        hit = self.splits.get(s)
        if hit is not None:
            return hit
        l = len(s)
        wc, wt = self._part_cost(s)
        best = (wc, ((s[0], wt),))
        for p in range(1, l):
            hc, ht = self._part_cost(s[:p])
            tc, titems = self._split1(s[p:])
            if hc + tc < best[0]:
                best = (hc + tc, ((s[0], ht),) + titems)
        self.splits[s] = best
        return best

    def _strc_split(self, s: tuple[int, ...]) -> Optional[tuple[int, tuple]]:
        l = len(s)
        if l < 2:
            return None
        best = None
        for p in range(1, l):
            hc, ht = self._part_cost(s[:p])
            tc, titems = self._split1(s[p:])
            if best is None or hc + tc < best[0]:
                best = (hc + tc, ((s[0], ht),) + titems)
        return best

    def _shifted(self, s: tuple[int, ...]) -> tuple[int, TypeNode]:
        hit = self.shifted.get(s)
        if hit is not None:
            return hit
        m = self.model
        l = len(s)
        shift = s[0]

        best: tuple[int, int, TypeNode] | None = None

        def consider(c: int, rank: int, tree: TypeNode) -> None:
            nonlocal best
            if best is None or (c, rank) < (best[0], best[1]):
                best = (c, rank, tree)

        nc, nt = self._nf(tuple(v - shift for v in s))
        consider(m.k_idx + m.k_lookup + nc, 2, Idx(1, (shift,), nt))

        for q in _divisors_below(l):
            if not _tiles(s, q):
                continue
            blocks = l // q
            raw_starts = tuple(s[r * q] for r in range(blocks))
            cc, ct = self._nf(tuple(v - shift for v in s[:q]))
            consider(m.k_idx + blocks * m.k_lookup + cc, 2,
                     Idx(blocks, raw_starts, ct))
            d = _stride_of(raw_starts)
            if d is not None:
                sc, st = self._shifted(s[:q])
                consider(m.k_vec + sc, 1, Vec(blocks, d, st))
            if self.extended:
                nf_starts = tuple(v - shift for v in raw_starts)
                for cnt, dd, ee, sizes in _strided_bucket_splits(nf_starts):
                    sc, st = self._shifted(s[:q])
                    consider(m.k_vecbuc + cnt * m.k_lookup + sc, 3,
                             VecBuc(cnt, dd, ee, sizes, st))
                for cnt, ee, idxs, sizes in _indexed_bucket_splits(nf_starts):
                    consider(m.k_idxbuc + 2 * cnt * m.k_lookup + cc, 4,
                             IdxBuc(cnt, ee, tuple(x + shift for x in idxs),
                                    sizes, ct))

        parts = self._strc_split(s)
        if parts is not None:
            pc, items = parts
            consider(m.k_strc + pc, 5,
                     Strc(len(items), tuple(first for first, _ in items),
                          tuple(t for _, t in items)))

        assert best is not None
        res = (best[0], best[2])
        self.shifted[s] = res
        return res


def brute_force_optimal(seq: Sequence[int], model: CostModel = UNIT_MODEL,
                        cfg: OracleConfig | None = None) -> TypeNode:
    """Globally cheapest tree flattening to ``seq``, by exhaustive search.

    Only feasible for short inputs; lengths beyond ``cfg.max_n`` raise
    SizeLimitError, as does an explicit ``cfg.max_cost`` smaller than the
    optimum.  The default bound, the cost of the trivial index-of-everything
    representation, can never be exceeded.
    """
    seq = list(seq)
    if not seq:
        raise SequenceFormatError("need at least one displacement")
    cfg = cfg or OracleConfig()
    if len(seq) > cfg.max_n:
        raise SizeLimitError(
            f"oracle input length {len(seq)} exceeds max_n {cfg.max_n}")
    c, tree = _Search(model, cfg.extended).best(tuple(seq))
    bound = cfg.max_cost if cfg.max_cost is not None else model.trivial_cost(len(seq))
    if c > bound:
        raise SizeLimitError(f"no tree within the cost bound {bound} (best: {c})")
    return tree


def verify(seq: Sequence[int], tree: TypeNode, model: CostModel = UNIT_MODEL,
           cfg: OracleConfig | None = None) -> Verdict:
    """Check a tree against a sequence: does it represent it, and optimally?

    The representation check works at any length; the optimality comparison
    runs the exhaustive search and therefore requires the length to be within
    ``cfg.max_n`` (SizeLimitError otherwise).  Suboptimal verdicts carry a
    cheaper witness tree.
    """
    seq = list(seq)
    cfg = cfg or OracleConfig()
    if flat_length(tree) != len(seq) or flatten(tree) != seq:
        return Verdict(NOT_REPRESENTING)
    if len(seq) > cfg.max_n:
        raise SizeLimitError(
            f"optimality verdict needs length <= {cfg.max_n}, got {len(seq)}")
    best = brute_force_optimal(seq, model, cfg)
    if cost(tree, model) <= cost(best, model):
        return Verdict(OPTIMAL)
    return Verdict(SUBOPTIMAL, witness=best)


def brute_force_optimal_free(seq: Sequence[int], model: CostModel = UNIT_MODEL,
                             max_n: int = 4, window: int = 8) -> TypeNode:
    """Exhaustive search that also tries shifted children everywhere.

    Validation instrument for the hoisted-shift restriction of the main
    search: enumerates idx children re-based to any first value within
    ``window`` of the input's value range, at every level.  Wrapper nodes
    (count-one idx) are never nested directly, and count-one strc nodes are
    skipped; both are sound whenever k_strc + 2*k_lookup >= k_idx + k_lookup
    and node constants are positive, which holds for the default model.
    """
    seq = tuple(seq)
    if not seq:
        raise SequenceFormatError("need at least one displacement")
    if len(seq) > max_n:
        raise SizeLimitError(f"free-search length {len(seq)} exceeds max_n {max_n}")
    m = model
    lo = min(seq) - window
    hi = max(seq) + window
    memo: dict[tuple, tuple[int, TypeNode]] = {}

    def search(d: tuple[int, ...], wrap_ok: bool) -> tuple[int, TypeNode] | None:
        key = (d, wrap_ok)
        if key in memo:
            return memo[key]
        if d and (d[0] < lo or d[0] > hi):
            return None
        l = len(d)
        best: tuple[int, TypeNode] | None = None

        def consider(c: int, tree: TypeNode) -> None:
            nonlocal best
            if best is None or c < best[0]:
                best = (c, tree)

        if d == tuple(range(l)):
            consider(m.k_con, Con(l))

        for q in _divisors_below(l):
            if not _tiles(d, q):
                continue
            blocks = l // q
            starts = tuple(d[r * q] for r in range(blocks))
            stride = _stride_of(starts)
            if stride is not None:
                sub = search(d[:q], True)
                if sub is not None:
                    consider(m.k_vec + sub[0], Vec(blocks, stride, sub[1]))
            for f in range(lo, hi + 1):
                child = tuple(v - d[0] + f for v in d[:q])
                sub = search(child, True)
                if sub is None:
                    continue
                idxs = tuple(st - f for st in starts)
                consider(m.k_idx + blocks * m.k_lookup + sub[0],
                         Idx(blocks, idxs, sub[1]))

        if wrap_ok:
            for f in range(lo, hi + 1):
                if f == d[0]:
                    continue
                child = tuple(v - d[0] + f for v in d)
                sub = search(child, False)
                if sub is not None:
                    consider(m.k_idx + m.k_lookup + sub[0],
                             Idx(1, (d[0] - f,), sub[1]))

        if l >= 2:
            # ordered partitions into >= 2 parts, each part shifted freely
            def part_best(piece: tuple[int, ...]) -> tuple[int, TypeNode] | None:
                pb = None
                for f in range(lo, hi + 1):
                    sub = search(tuple(v - piece[0] + f for v in piece), True)
                    if sub is not None and (pb is None or sub[0] < pb[0][0]):
                        pb = (sub, piece[0] - f)
                return pb

            def partitions(piece: tuple[int, ...], min_parts: int):
                # yields (cost_sum, [(offset, tree), ...])
                l2 = len(piece)
                cuts = range(1, l2) if min_parts > 1 else range(1, l2 + 1)
                for p in cuts:
                    head = part_best(piece[:p])
                    if head is None:
                        continue
                    (hc, ht), hoff = head
                    head_item = (2 * m.k_lookup + hc, (hoff, ht))
                    if p == l2:
                        yield head_item[0], [head_item[1]]
                        continue
                    for tc, titems in partitions(piece[p:], 1):
                        yield head_item[0] + tc, [head_item[1]] + titems

            for pc, items in partitions(d, 2):
                consider(m.k_strc + pc,
                         Strc(len(items), tuple(off for off, _ in items),
                              tuple(t for _, t in items)))

        memo[key] = best
        return best

    res = search(seq, True)
    assert res is not None
    return res[1]
