"""Reconstruction engine: cheapest tree for a given displacement sequence.

The engine normalizes the input so it starts at zero, then solves every
segment bottom-up by length.  A segment's cheapest tree is one of:

* a single leaf, when the segment is a run of consecutive offsets
  (found once up front for every sub-run);
* an idx or vec node over a repeated prefix block, with the recorded
  optimum of that prefix as the child (plus bucket variants in extended
  mode);
* a strc node whose children partition the segment, found as a shortest
  path in a DAG whose vertices are segment boundaries and whose edge
  (i, j) costs two lookup words plus the recorded optimum of [i, j-1].

The DAG doubles as the dynamic-programming table: each edge carries a
constant-size record (kind, count, strides, prefix length, cost), so the
table fits in O(n^2) space and full trees are rebuilt only on demand, with
strc parameters re-derived by running the shortest-path query again.

Shortest paths are shared across queries: dist[i][k] is grown one target at
a time from the last-edge decomposition min_m dist[i][m] + w(m, k), which
visits every (start, via, target) triple once overall.  A literal
per-query scan in topological order (`SegmentGraph.shortest_path`) is kept
for reconstruction and as a cross-check.

A final pass re-attaches the input's leading offset.  For that, the solve
additionally records, per prefix of the input, the cheapest tree whose
leftmost chain reaches an offset-carrying node (idx, strc, or an indexed
bucket) through vec-like nodes only; adding the leading offset to that one
node shifts the whole flattening at zero extra cost.  The alternative is
wrapping the whole solution in a count-one idx node; the cheaper of the two
wins.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional, Sequence

from .core import (Con, CostModel, Idx, IdxBuc, Strc, TypeNode, UNIT_MODEL,
                   Vec, VecBuc, INT64_MAX, INT64_MIN, LayoutError,
                   OverflowGuardError, SequenceFormatError, SizeLimitError,
                   cost, flatten)
from .scan import (blocks_repeat, detect_indexed_bucket, detect_strided_bucket,
                   proper_divisors)


class LayoutInternalError(LayoutError):
    """The engine violated its own soundness check; a bug, not bad input."""

_RANK = {"con": 0, "vec": 1, "idx": 2, "vecbuc": 3, "idxbuc": 4, "strc": 5}


@dataclass(frozen=True, slots=True)
class CompactSolution:
    """Constant-size record of a segment's cheapest tree.

    ``block`` is the repeated-prefix length for vec/idx/vecbuc/idxbuc roots;
    index and size arrays are re-derived from the sequence on demand, and
    strc parameters come from re-running the shortest-path query.
    """

    kind: str
    cost: int
    count: int | None = None
    stride: int | None = None
    substride: int | None = None
    block: int | None = None


def _min_cost(a: Optional[CompactSolution],
              b: Optional[CompactSolution]) -> Optional[CompactSolution]:
    """Cheaper of two records; cost ties break toward the simpler kind
    (con, vec, idx, vecbuc, idxbuc, strc) and then toward ``a``."""
    if a is None:
        return b
    if b is None:
        return a
    if (b.cost, _RANK[b.kind]) < (a.cost, _RANK[a.kind]):
        return b
    return a


@dataclass(frozen=True, slots=True)
class ReconstructionReport:
    """Outcome of one reconstruction run."""

    n: int
    tree: TypeNode
    cost: int
    trivial_cost: int
    compression: float
    wall_time_s: float
    segment_entries: int
    extended: bool


class SegmentGraph:
    """Weighted DAG over positions 0..n of a zero-based sequence.

    Vertex i marks the boundary before element i; the edge (i, k) carries the
    solved segment [i, k-1].  Vertices are born in topological order, so
    shortest-path queries are single forward sweeps.
    """

    def __init__(self, seq: Sequence[int], model: CostModel, extended: bool):
        if not seq:
            raise SequenceFormatError("cannot build a graph over no elements")
        n = len(seq)
        self.seq = list(seq)
        self.n = n
        self.model = model
        self.extended = extended
        self._delta = [self.seq[p + 1] - self.seq[p] for p in range(n - 1)]
        self._sol: list[list[CompactSolution | None]] = \
            [[None] * (n + 1) for _ in range(n + 1)]
        self._wgt: list[list[int | None]] = [[None] * (n + 1) for _ in range(n + 1)]
        self._dist: list[list[int | None]] = [[None] * (n + 1) for _ in range(n + 1)]
        # per prefix length: cheapest shift-capable solution (see module doc)
        self._shift: list[CompactSolution | None] = [None] * (n + 1)
        self.solved = False

    # -- inspection --------------------------------------------------------

    def has_solution(self, i: int, j: int) -> bool:
        return 0 <= i <= j < self.n and self._sol[i][j + 1] is not None

    def solution(self, i: int, j: int) -> CompactSolution:
        """Record for segment [i, j] (inclusive)."""
        rec = self._sol[i][j + 1] if 0 <= i <= j < self.n else None
        if rec is None:
            raise ValueError(f"segment [{i}, {j}] has no recorded solution")
        return rec

    def edge_weight(self, i: int, k: int) -> int:
        """Weight of edge (i, k): two lookups plus the segment's cost."""
        w = self._wgt[i][k] if 0 <= i < k <= self.n else None
        if w is None:
            raise ValueError(f"no edge ({i}, {k})")
        return w

    def edges(self):
        """Yield (i, k, weight, record) for every stored edge."""
        for i in range(self.n + 1):
            row_w, row_s = self._wgt[i], self._sol[i]
            for k in range(i + 1, self.n + 1):
                if row_s[k] is not None:
                    yield i, k, row_w[k], row_s[k]

    def segment_entries(self) -> int:
        return sum(1 for row in self._sol for rec in row if rec is not None)

    # -- shortest paths ----------------------------------------------------

    def shortest_path(self, i: int, k: int) -> Optional[list[int]]:
        """Cheapest multi-edge path from vertex i to vertex k.

        Processes vertices in increasing order (they are already topologically
        sorted) and relaxes every stored edge inside the window.  The single
        direct edge (i, k) is not a path through intermediate boundaries and
        is skipped.  Returns the vertex list, or None when k - i < 2.
        """
        if k - i < 2:
            return None
        dist = {i: 0}
        pred: dict[int, int] = {}
        for m in range(i + 1, k + 1):
            best = None
            best_a = None
            for a in range(i, m):
                if a == i and m == k:
                    continue  # direct edge excluded
                da = dist.get(a)
                w = self._wgt[a][m]
                if da is None or w is None:
                    continue
                v = da + w
                if best is None or v < best:
                    best, best_a = v, a
            if best is not None:
                dist[m] = best
                pred[m] = best_a
        if k not in dist:
            return None
        path = [k]
        while path[-1] != i:
            path.append(pred[path[-1]])
        path.reverse()
        return path

    def path_cost(self, path: list[int]) -> int:
        return sum(self.edge_weight(path[t], path[t + 1])
                   for t in range(len(path) - 1))

    # -- materialization ---------------------------------------------------

    def materialize(self, i: int, j: int) -> TypeNode:
        """Expand the recorded solution for segment [i, j] into a full tree."""
        return self._mat(i, j + 1)

    def _block_starts(self, i: int, k: int, q: int) -> list[int]:
        base = self.seq[i]
        return [self.seq[i + r * q] - base for r in range(0, (k - i) // q)]

    def _mat(self, i: int, k: int) -> TypeNode:
        rec = self._sol[i][k]
        if rec is None:
            raise ValueError(f"segment [{i}, {k - 1}] has no recorded solution")
        kind = rec.kind
        if kind == "con":
            return Con(k - i)
        if kind == "vec":
            return Vec(rec.count, rec.stride, self._mat(i, i + rec.block))
        if kind == "idx":
            starts = tuple(self._block_starts(i, k, rec.block))
            return Idx(rec.count, starts, self._mat(i, i + rec.block))
        if kind == "vecbuc":
            pat = detect_strided_bucket(self._block_starts(i, k, rec.block))
            return VecBuc(pat.count, pat.stride, pat.substride, pat.sizes,
                          self._mat(i, i + rec.block))
        if kind == "idxbuc":
            pat = detect_indexed_bucket(self._block_starts(i, k, rec.block))
            return IdxBuc(pat.count, pat.substride, pat.indices, pat.sizes,
                          self._mat(i, i + rec.block))
        # strc: re-derive the partition from the (now complete) graph
        path = self.shortest_path(i, k)
        base = self.seq[i]
        offs = tuple(self.seq[u] - base for u in path[:-1])
        kids = tuple(self._mat(path[t], path[t + 1]) for t in range(len(path) - 1))
        return Strc(len(offs), offs, kids)

    def _mat_shifted(self, length: int, s: int) -> TypeNode:
        """Expand the shift-capable record for prefix [0, length-1], adding
        ``s`` to the offsets of its one offset-carrying spine node."""
        rec = self._shift[length]
        if rec is None:
            raise ValueError(f"prefix of length {length} has no shift-capable solution")
        kind = rec.kind
        if kind == "vec":
            return Vec(rec.count, rec.stride, self._mat_shifted(rec.block, s))
        if kind == "vecbuc":
            pat = detect_strided_bucket(self._block_starts(0, length, rec.block))
            return VecBuc(pat.count, pat.stride, pat.substride, pat.sizes,
                          self._mat_shifted(rec.block, s))
        if kind == "idx":
            starts = tuple(v + s for v in self._block_starts(0, length, rec.block))
            return Idx(rec.count, starts, self._mat(0, rec.block))
        if kind == "idxbuc":
            pat = detect_indexed_bucket(self._block_starts(0, length, rec.block))
            return IdxBuc(pat.count, pat.substride,
                          tuple(v + s for v in pat.indices), pat.sizes,
                          self._mat(0, rec.block))
        # strc
        path = self.shortest_path(0, length)
        offs = tuple(self.seq[u] + s for u in path[:-1])
        kids = tuple(self._mat(path[t], path[t + 1]) for t in range(len(path) - 1))
        return Strc(len(offs), offs, kids)


def _solve_segment(graph: SegmentGraph, divisors: list[int], l: int, i: int):
    """Candidates for segment [i, i+l-1]; pure reads of shorter lengths."""
    seq = graph.seq
    delta = graph._delta
    model = graph.model
    kl = model.k_lookup
    sol = graph._sol
    wgt = graph._wgt
    dist_i = graph._dist[i]
    k = i + l

    best = sol[i][k]  # leaf run found in preprocessing, if any

    interior = None
    for m in range(i + 1, k):
        v = dist_i[m] + wgt[m][k]
        if interior is None or v < interior:
            interior = v
    best = _min_cost(best, CompactSolution("strc", model.k_strc + interior))

    track_prefix = i == 0
    indexed_best: CompactSolution | None = None
    shift_best: CompactSolution | None = None
    if track_prefix:
        indexed_best = CompactSolution("strc", model.k_strc + interior)

    base0 = seq[i]
    for q in divisors:
        c = l // q
        if q > 1 and not blocks_repeat(delta, i, q, c):
            continue
        child_cost = sol[i][i + q].cost
        starts = [seq[i + r * q] - base0 for r in range(c)]
        cand = CompactSolution("idx", model.k_idx + c * kl + child_cost,
                               count=c, block=q)
        best = _min_cost(best, cand)
        if track_prefix:
            indexed_best = _min_cost(indexed_best, cand)

        d0 = starts[1] - starts[0]
        is_strided = all(starts[r + 1] - starts[r] == d0 for r in range(1, c - 1))
        if is_strided:
            cand = CompactSolution("vec", model.k_vec + child_cost,
                                   count=c, stride=d0, block=q)
            best = _min_cost(best, cand)
            if track_prefix and graph._shift[q] is not None:
                shift_best = _min_cost(shift_best, CompactSolution(
                    "vec", model.k_vec + graph._shift[q].cost,
                    count=c, stride=d0, block=q))

        if graph.extended:
            sb = detect_strided_bucket(starts)
            if sb is not None:
                cand = CompactSolution(
                    "vecbuc", model.k_vecbuc + sb.count * kl + child_cost,
                    count=sb.count, stride=sb.stride, substride=sb.substride,
                    block=q)
                best = _min_cost(best, cand)
                if track_prefix and graph._shift[q] is not None:
                    shift_best = _min_cost(shift_best, CompactSolution(
                        "vecbuc",
                        model.k_vecbuc + sb.count * kl + graph._shift[q].cost,
                        count=sb.count, stride=sb.stride,
                        substride=sb.substride, block=q))
            ib = detect_indexed_bucket(starts)
            cand = CompactSolution(
                "idxbuc", model.k_idxbuc + 2 * ib.count * kl + child_cost,
                count=ib.count, substride=ib.substride, block=q)
            best = _min_cost(best, cand)
            if track_prefix:
                indexed_best = _min_cost(indexed_best, cand)

    if track_prefix:
        shift_best = _min_cost(shift_best, indexed_best)
    return i, best, interior, shift_best


def solve_normal_form(seq: Sequence[int], model: CostModel = UNIT_MODEL,
                      extended: bool = False, threads: int = 1) -> SegmentGraph:
    """Solve every segment of a zero-based sequence, cheapest tree per segment.

    With ``threads`` > 1, segments of equal length are computed concurrently;
    they only read results for strictly shorter segments, so the outcome is
    identical to the sequential schedule.
    """
    seq = list(seq)
    if not seq:
        raise SequenceFormatError("need at least one displacement")
    if seq[0] != 0:
        raise ValueError("sequence is not zero-based; subtract the first element")
    graph = SegmentGraph(seq, model, extended)
    n = graph.n
    sol, wgt, dist = graph._sol, graph._wgt, graph._dist
    delta = graph._delta
    kl = model.k_lookup

    # leaf runs: one edge per sub-run of consecutive offsets
    con_w = 2 * kl + model.k_con
    for a in range(n):
        sol[a][a + 1] = CompactSolution("con", model.k_con, count=1)
        wgt[a][a + 1] = con_w
        b = a + 1
        while b < n and delta[b - 1] == 1:
            sol[a][b + 1] = CompactSolution("con", model.k_con, count=b + 1 - a)
            wgt[a][b + 1] = con_w
            b += 1
    for a in range(n):
        dist[a][a + 1] = con_w

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for l in range(2, n + 1):
            divisors = proper_divisors(l)
            worker = partial(_solve_segment, graph, divisors, l)
            starts = range(n - l + 1)
            results = pool.map(worker, starts) if pool else map(worker, starts)
            for i, best, interior, shift_best in results:
                k = i + l
                sol[i][k] = best
                wgt[i][k] = 2 * kl + best.cost
                dist[i][k] = min(wgt[i][k], interior)
                if i == 0:
                    graph._shift[l] = shift_best
    finally:
        if pool:
            pool.shutdown()
    graph.solved = True
    return graph


def strc_candidate(graph: SegmentGraph, i: int, j: int) -> Optional[TypeNode]:
    """Cheapest strc-rooted tree for segment [i, j], from the segment graph.

    Requires solutions for every strictly shorter sub-segment.  Returns None
    for segments shorter than two elements (a strc needs at least two
    children); otherwise the candidate is returned even when some other root
    kind is cheaper, and the caller compares.
    """
    path = graph.shortest_path(i, j + 1)
    if path is None:
        return None
    base = graph.seq[i]
    offs = tuple(graph.seq[u] - base for u in path[:-1])
    kids = tuple(graph.materialize(path[t], path[t + 1] - 1)
                 for t in range(len(path) - 1))
    return Strc(len(offs), offs, kids)


def denormalize(original: Sequence[int], graph: SegmentGraph) -> TypeNode:
    """Re-attach the input's leading offset to the zero-based solution.

    Zero offset returns the solved tree unchanged.  Otherwise the cheaper of
    two exact alternatives wins: add the offset to the one offset-carrying
    spine node of the best shift-capable prefix solution, or wrap the whole
    solution in a count-one idx node carrying the offset.
    """
    s = original[0]
    n = graph.n
    if s == 0:
        return graph.materialize(0, n - 1)
    model = graph.model
    wrap_cost = model.k_idx + model.k_lookup + graph._sol[0][n].cost
    shift_rec = graph._shift[n]
    if shift_rec is not None and shift_rec.cost <= wrap_cost:
        return graph._mat_shifted(n, s)
    return Idx(1, (s,), graph.materialize(0, n - 1))


def reconstruct(seq: Sequence[int], model: CostModel = UNIT_MODEL,
                extended: bool = False, max_n: int | None = None,
                threads: int = 1) -> ReconstructionReport:
    """Build a cheapest tree whose flattening is exactly ``seq``.

    In basic mode the result cost is minimal over all con/vec/idx/strc trees;
    in extended mode bucket nodes join the candidate set and the result never
    costs more than the basic one.  Raises SizeLimitError past ``max_n`` and
    OverflowGuardError when values or their span leave the 64-bit range.
    """
    seq = list(seq)
    n = len(seq)
    if n < 1:
        raise SequenceFormatError("need at least one displacement")
    if max_n is not None and n > max_n:
        raise SizeLimitError(f"input length {n} exceeds the configured limit {max_n}")
    lo, hi = min(seq), max(seq)
    if lo < INT64_MIN or hi > INT64_MAX:
        raise OverflowGuardError("displacements outside the signed 64-bit range")
    if hi - lo > INT64_MAX:
        raise OverflowGuardError("displacement span exceeds the signed 64-bit range")

    start = time.perf_counter()
    shift = seq[0]
    graph = solve_normal_form([v - shift for v in seq], model,
                              extended=extended, threads=threads)
    tree = denormalize(seq, graph)
    elapsed = time.perf_counter() - start

    if flatten(tree) != seq:
        raise LayoutInternalError(
            "reconstructed tree does not flatten back to the input")
    c = cost(tree, model)
    trivial = model.trivial_cost(n)
    compression = trivial / c if c else float("inf")
    return ReconstructionReport(
        n=n, tree=tree, cost=c, trivial_cost=trivial, compression=compression,
        wall_time_s=elapsed, segment_entries=graph.segment_entries(),
        extended=extended)
