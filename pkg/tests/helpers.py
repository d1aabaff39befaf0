"""Shared generators and structural checkers for the test suite."""

import math
import random

from layouttree import (Con, Idx, IdxBuc, Strc, TypeNode, Vec, VecBuc,
                        children_of, height, is_nice)


def tile_expand(prefix, block_starts):
    """Expand a prefix at the given block starts; cross-check for repeated()."""
    out = []
    for start in block_starts:
        for v in prefix:
            out.append(start + (v - prefix[0]))
    return out


def split_budget(rng, budget, parts):
    cuts = sorted(rng.randint(1, budget) for _ in range(parts - 1))
    sizes = []
    prev = 0
    for c in cuts:
        sizes.append(max(1, c - prev))
        prev = c
    sizes.append(max(1, budget - prev))
    return sizes


def random_tree(rng: random.Random, budget: int, extended: bool = False,
                depth: int = 0) -> TypeNode:
    """Random well-formed tree whose flattening is at most ``budget`` long."""
    kinds = ["con"]
    if budget >= 2 and depth < 6:
        kinds += ["vec", "vec", "idx", "strc"]
        if extended:
            kinds += ["vecbuc", "idxbuc"]
    kind = rng.choice(kinds)
    if kind == "con":
        return Con(rng.randint(1, max(1, min(budget, 6))))
    if kind == "vec":
        c = rng.randint(2, min(4, budget))
        return Vec(c, rng.randint(-30, 30),
                   random_tree(rng, budget // c, extended, depth + 1))
    if kind == "idx":
        c = rng.randint(2, min(4, budget))
        idxs = tuple(rng.randint(-40, 40) for _ in range(c))
        return Idx(c, idxs, random_tree(rng, budget // c, extended, depth + 1))
    if kind == "strc":
        c = rng.randint(2, min(3, budget))
        parts = split_budget(rng, budget, c)
        kids = tuple(random_tree(rng, p, extended, depth + 1) for p in parts)
        idxs = tuple(rng.randint(-60, 60) for _ in range(c))
        return Strc(c, idxs, kids)
    if kind == "vecbuc":
        c = rng.randint(2, 3)
        sizes = tuple(rng.randint(1, 3) for _ in range(c))
        child = random_tree(rng, max(1, budget // sum(sizes)), extended, depth + 1)
        return VecBuc(c, rng.randint(-25, 25), rng.randint(-9, 9), sizes, child)
    c = rng.randint(2, 3)
    sizes = tuple(rng.randint(1, 3) for _ in range(c))
    child = random_tree(rng, max(1, budget // sum(sizes)), extended, depth + 1)
    idxs = tuple(rng.randint(-50, 50) for _ in range(c))
    return IdxBuc(c, rng.randint(-9, 9), idxs, sizes, child)


def random_basic_tree(rng: random.Random, budget: int, depth: int = 0) -> TypeNode:
    return random_tree(rng, budget, extended=False, depth=depth)


def iter_nodes(tree):
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(children_of(node))


def has_adjacent_strc(tree) -> bool:
    for node in iter_nodes(tree):
        if type(node) is Strc and any(type(c) is Strc for c in node.children):
            return True
    return False


def structural_violations(tree, n: int) -> list[str]:
    """Violations of the output-shape guarantees for a reconstructed tree."""
    problems = []
    if not is_nice(tree):
        problems.append("more than one hoisted shift")
    count1_idx = [x for x in iter_nodes(tree) if type(x) is Idx and x.count == 1]
    if len(count1_idx) > 1 or (count1_idx and count1_idx[0] is not tree):
        problems.append("count-1 idx not a lone root")
    for node in iter_nodes(tree):
        if type(node) in (Vec, Strc) and node.count == 1:
            problems.append(f"count-1 {type(node).__name__.lower()}")
            break
    if has_adjacent_strc(tree):
        problems.append("adjacent strc nodes")
    bound = 2 * int(math.log2(n)) + 3 if n >= 1 else 3
    if height(tree) > bound:
        problems.append(f"height {height(tree)} > {bound}")
    return problems
