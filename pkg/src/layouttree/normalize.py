"""Tree normalization: flatten a given tree and rebuild it optimally.

A tree handed over by a user or front end may be far from the cheapest
description of its layout.  Since a subtree's local optimality says nothing
about global optimality once struct nodes are allowed, the whole tree is
flattened and reconstructed from scratch; the flattened size is guarded
because it is not bounded by the size of the tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CostModel, SizeLimitError, TypeNode, UNIT_MODEL, cost, \
    flat_length, flatten
from .solver import reconstruct

DEFAULT_MAX_FLATTEN = 1_000_000


@dataclass(frozen=True, slots=True)
class NormalizationResult:
    tree: TypeNode
    old_cost: int
    new_cost: int


def normalize_tree(tree: TypeNode, model: CostModel = UNIT_MODEL,
                   extended: bool = False,
                   max_flatten: int = DEFAULT_MAX_FLATTEN,
                   threads: int = 1) -> NormalizationResult:
    """Rebuild ``tree`` as a cheapest tree with the same flattening.

    The result never costs more than the input; when the rebuilt tree would
    (possible only in extended mode, whose bucket scans are heuristic), the
    input is returned unchanged.  Inputs whose flattening would exceed
    ``max_flatten`` elements raise SizeLimitError.
    """
    length = flat_length(tree)
    if length > max_flatten:
        raise SizeLimitError(
            f"flattened size {length} exceeds the limit {max_flatten}")
    old = cost(tree, model)
    report = reconstruct(flatten(tree), model, extended=extended,
                         threads=threads)
    if report.cost > old:
        return NormalizationResult(tree, old, old)
    return NormalizationResult(report.tree, old, report.cost)
