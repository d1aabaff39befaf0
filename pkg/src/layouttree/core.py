"""Core domain model: layout trees, flattening, cost, shift hoisting.

A non-contiguous data layout can be described twice over: explicitly, as an
ordered sequence of integer byte offsets (a *displacement sequence*), and
compactly, as a tree of constructor nodes whose ordered traversal reproduces
exactly that sequence.  This module defines the six node kinds, the traversal
(`flatten`), the additive per-node cost model, and `make_nice`, the rewrite
that hoists index shifts toward the root without changing flattening or cost.

All arithmetic is exact; values and strides are validated against the signed
64-bit range so results stay representable in fixed-width consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


class LayoutError(Exception):
    """Base class for every error this package raises deliberately."""


class SequenceFormatError(LayoutError, ValueError):
    """Displacement input is empty, malformed, or fails a validation flag."""


class TreeSyntaxError(LayoutError, ValueError):
    """Tree text violates the grammar."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class TreeSemanticError(LayoutError, ValueError):
    """A structurally parsable tree violates a node invariant."""


class SizeLimitError(LayoutError):
    """A configured size guard was exceeded."""


class OverflowGuardError(LayoutError):
    """Displacement arithmetic left the signed 64-bit range."""


def check_int64(value: int, what: str = "displacement") -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowGuardError(f"{what} {value} outside the signed 64-bit range")
    return value


@dataclass(frozen=True, slots=True)
class CostModel:
    """Per-node storage costs.

    Node constants price the fixed part of a node; ``k_lookup`` prices one
    stored array word.  Index nodes pay one lookup per entry; struct and
    indexed-bucket nodes pay two (an offset word plus a subtype or size word).
    The default prices everything at one unit.
    """

    k_con: int = 1
    k_vec: int = 1
    k_idx: int = 1
    k_strc: int = 1
    k_vecbuc: int = 1
    k_idxbuc: int = 1
    k_lookup: int = 1

    def __post_init__(self):
        for name in ("k_con", "k_vec", "k_idx", "k_strc",
                     "k_vecbuc", "k_idxbuc", "k_lookup"):
            if getattr(self, name) < 0:
                raise ValueError(f"cost constant {name} must be non-negative")

    def trivial_cost(self, n: int) -> int:
        """Cost of the always-valid idx(n, D, con(1)) baseline."""
        return self.k_idx + n * self.k_lookup + self.k_con


UNIT_MODEL = CostModel()


def _as_int_tuple(values, what: str) -> tuple[int, ...]:
    out = tuple(values)
    for v in out:
        if not isinstance(v, int) or isinstance(v, bool):
            raise TreeSemanticError(f"{what} must be integers, got {v!r}")
    return out


@dataclass(frozen=True, slots=True)
class Con:
    """Leaf: ``count`` adjacent offsets 0, 1, ..., count-1."""

    count: int

    def __post_init__(self):
        if self.count < 1:
            raise TreeSemanticError(f"con count must be >= 1, got {self.count}")


@dataclass(frozen=True, slots=True)
class Vec:
    """``count`` copies of ``child`` at offsets 0, stride, 2*stride, ..."""

    count: int
    stride: int
    child: "TypeNode"

    def __post_init__(self):
        if self.count < 1:
            raise TreeSemanticError(f"vec count must be >= 1, got {self.count}")
        _require_node(self.child)


@dataclass(frozen=True, slots=True)
class Idx:
    """``count`` copies of ``child``, one at each offset in ``indices``."""

    count: int
    indices: tuple[int, ...]
    child: "TypeNode"

    def __post_init__(self):
        object.__setattr__(self, "indices", _as_int_tuple(self.indices, "indices"))
        if self.count < 1:
            raise TreeSemanticError(f"idx count must be >= 1, got {self.count}")
        if len(self.indices) != self.count:
            raise TreeSemanticError(
                f"idx indices length {len(self.indices)} != count {self.count}")
        _require_node(self.child)


@dataclass(frozen=True, slots=True)
class Strc:
    """Catenation of ``count`` distinct children at the given offsets."""

    count: int
    indices: tuple[int, ...]
    children: tuple["TypeNode", ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", _as_int_tuple(self.indices, "indices"))
        object.__setattr__(self, "children", tuple(self.children))
        if self.count < 1:
            raise TreeSemanticError(f"strc count must be >= 1, got {self.count}")
        if len(self.indices) != self.count:
            raise TreeSemanticError(
                f"strc indices length {len(self.indices)} != count {self.count}")
        if len(self.children) != self.count:
            raise TreeSemanticError(
                f"strc children length {len(self.children)} != count {self.count}")
        for c in self.children:
            _require_node(c)


@dataclass(frozen=True, slots=True)
class VecBuc:
    """``count`` buckets at offsets 0, stride, 2*stride, ...; bucket ``r``
    holds ``sizes[r]`` copies of ``child`` spaced by ``substride``."""

    count: int
    stride: int
    substride: int
    sizes: tuple[int, ...]
    child: "TypeNode"

    def __post_init__(self):
        object.__setattr__(self, "sizes", _as_int_tuple(self.sizes, "sizes"))
        if self.count < 1:
            raise TreeSemanticError(f"vecbuc count must be >= 1, got {self.count}")
        if len(self.sizes) != self.count:
            raise TreeSemanticError(
                f"vecbuc sizes length {len(self.sizes)} != count {self.count}")
        if any(b < 1 for b in self.sizes):
            raise TreeSemanticError("vecbuc sizes must all be >= 1")
        _require_node(self.child)


@dataclass(frozen=True, slots=True)
class IdxBuc:
    """``count`` buckets, one at each offset in ``indices``; bucket ``r``
    holds ``sizes[r]`` copies of ``child`` spaced by ``substride``."""

    count: int
    substride: int
    indices: tuple[int, ...]
    sizes: tuple[int, ...]
    child: "TypeNode"

    def __post_init__(self):
        object.__setattr__(self, "indices", _as_int_tuple(self.indices, "indices"))
        object.__setattr__(self, "sizes", _as_int_tuple(self.sizes, "sizes"))
        if self.count < 1:
            raise TreeSemanticError(f"idxbuc count must be >= 1, got {self.count}")
        if len(self.indices) != self.count:
            raise TreeSemanticError(
                f"idxbuc indices length {len(self.indices)} != count {self.count}")
        if len(self.sizes) != self.count:
            raise TreeSemanticError(
                f"idxbuc sizes length {len(self.sizes)} != count {self.count}")
        if any(b < 1 for b in self.sizes):
            raise TreeSemanticError("idxbuc sizes must all be >= 1")
        _require_node(self.child)


TypeNode = Union[Con, Vec, Idx, Strc, VecBuc, IdxBuc]

_NODE_TYPES = (Con, Vec, Idx, Strc, VecBuc, IdxBuc)

KIND_NAMES = {Con: "con", Vec: "vec", Idx: "idx", Strc: "strc",
              VecBuc: "vecbuc", IdxBuc: "idxbuc"}


def _require_node(obj) -> None:
    if not isinstance(obj, _NODE_TYPES):
        raise TreeSemanticError(f"child must be a tree node, got {type(obj).__name__}")


def kind_of(tree: TypeNode) -> str:
    return KIND_NAMES[type(tree)]


def children_of(tree: TypeNode) -> tuple[TypeNode, ...]:
    t = type(tree)
    if t is Con:
        return ()
    if t is Strc:
        return tree.children
    return (tree.child,)


def is_basic(tree: TypeNode) -> bool:
    """True when the tree uses only con/vec/idx/strc nodes."""
    stack = [tree]
    while stack:
        node = stack.pop()
        if type(node) in (VecBuc, IdxBuc):
            return False
        stack.extend(children_of(node))
    return True


def iter_nodes(tree: TypeNode):
    """Preorder iterator over all nodes."""
    stack = [tree]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children_of(node)))


def flatten(tree: TypeNode, base: int = 0) -> list[int]:
    """Expand a tree into its displacement sequence at the given base.

    Emitted values are checked against the signed 64-bit range; exceeding it
    raises OverflowGuardError instead of wrapping.
    """
    out: list[int] = []

    def go(node: TypeNode, b: int) -> None:
        t = type(node)
        if t is Con:
            last = b + node.count - 1
            if b < INT64_MIN or last > INT64_MAX:
                raise OverflowGuardError(
                    f"flattened displacement {last} outside the signed 64-bit range")
            out.extend(range(b, last + 1))
        elif t is Vec:
            for r in range(node.count):
                go(node.child, b + r * node.stride)
        elif t is Idx:
            for i in node.indices:
                go(node.child, b + i)
        elif t is Strc:
            for i, c in zip(node.indices, node.children):
                go(c, b + i)
        elif t is VecBuc:
            for r in range(node.count):
                start = b + r * node.stride
                for k in range(node.sizes[r]):
                    go(node.child, start + k * node.substride)
        else:  # IdxBuc
            for r in range(node.count):
                start = b + node.indices[r]
                for k in range(node.sizes[r]):
                    go(node.child, start + k * node.substride)

    go(tree, base)
    return out


def flat_length(tree: TypeNode) -> int:
    """Length of flatten(tree) without materializing it."""
    t = type(tree)
    if t is Con:
        return tree.count
    if t in (Vec, Idx):
        return tree.count * flat_length(tree.child)
    if t is Strc:
        return sum(flat_length(c) for c in tree.children)
    return sum(tree.sizes) * flat_length(tree.child)


def node_cost(node: TypeNode, model: CostModel = UNIT_MODEL) -> int:
    """Cost of a single node, children excluded."""
    t = type(node)
    if t is Con:
        return model.k_con
    if t is Vec:
        return model.k_vec
    if t is Idx:
        return model.k_idx + node.count * model.k_lookup
    if t is Strc:
        return model.k_strc + 2 * node.count * model.k_lookup
    if t is VecBuc:
        return model.k_vecbuc + node.count * model.k_lookup
    return model.k_idxbuc + 2 * node.count * model.k_lookup


def cost(tree: TypeNode, model: CostModel = UNIT_MODEL) -> int:
    """Total cost of a tree: the sum of its nodes' costs."""
    total = 0
    stack = [tree]
    while stack:
        node = stack.pop()
        total += node_cost(node, model)
        stack.extend(children_of(node))
    return total


def height(tree: TypeNode) -> int:
    """Number of nodes on the longest root-to-leaf path."""
    kids = children_of(tree)
    if not kids:
        return 1
    return 1 + max(height(c) for c in kids)


# --- shift handling ---------------------------------------------------------
#
# An idx, strc, or idxbuc node whose first offset is nonzero shifts everything
# below it.  A tree is "nice" when at most one node is shifted and that node
# is the first offset-carrying node on every root-to-leaf path; vec and
# vecbuc nodes are transparent to such a shift.


def shift_of(node: TypeNode) -> int:
    """The node's shift: its first offset for idx/strc/idxbuc, else 0."""
    if type(node) in (Idx, Strc, IdxBuc):
        return node.indices[0]
    return 0


def spine_shift(tree: TypeNode) -> int:
    """Shift of the first offset-carrying node reached through vec-like
    nodes from the root, or 0 if the spine ends in a leaf."""
    node = tree
    while type(node) in (Vec, VecBuc):
        node = node.child
    return shift_of(node)


def shift_spine(tree: TypeNode, delta: int) -> TypeNode:
    """Add ``delta`` to the offsets of the first offset-carrying node on the
    vec spine.  Shifts the whole flattening by ``delta``."""
    if delta == 0:
        return tree
    t = type(tree)
    if t is Vec:
        return Vec(tree.count, tree.stride, shift_spine(tree.child, delta))
    if t is VecBuc:
        return VecBuc(tree.count, tree.stride, tree.substride, tree.sizes,
                      shift_spine(tree.child, delta))
    if t is Idx:
        return Idx(tree.count, tuple(i + delta for i in tree.indices), tree.child)
    if t is Strc:
        return Strc(tree.count, tuple(i + delta for i in tree.indices), tree.children)
    if t is IdxBuc:
        return IdxBuc(tree.count, tree.substride,
                      tuple(i + delta for i in tree.indices), tree.sizes, tree.child)
    raise TreeSemanticError("cannot shift a tree with no offset-carrying node")


def is_nice(tree: TypeNode) -> bool:
    """Check the single-hoisted-shift property.

    True when at most one node is shifted and, if one is, it is reachable from
    the root through vec-like nodes only (hence the first offset-carrying node
    on every root-to-leaf path).
    """
    shifted = [n for n in iter_nodes(tree) if shift_of(n) != 0]
    if not shifted:
        return True
    if len(shifted) > 1:
        return False
    node = tree
    while type(node) in (Vec, VecBuc):
        node = node.child
    return node is shifted[0]


def make_nice(tree: TypeNode) -> TypeNode:
    """Hoist shifts so at most one node is shifted, preserving both the
    flattening and the cost exactly.

    Works on basic trees only: repeatedly subtracts an inner node's shift
    from its offsets and adds it to the enclosing idx or strc offset.
    """
    if not is_basic(tree):
        raise TreeSemanticError("shift hoisting is defined for basic trees only")

    def go(node: TypeNode) -> TypeNode:
        t = type(node)
        if t is Con:
            return node
        if t is Vec:
            return Vec(node.count, node.stride, go(node.child))
        if t is Idx:
            child = go(node.child)
            s = spine_shift(child)
            if s:
                child = shift_spine(child, -s)
            return Idx(node.count, tuple(i + s for i in node.indices), child)
        # Strc: hoist each child's spine shift into its own offset
        kids = []
        offs = []
        for i, c in zip(node.indices, node.children):
            c2 = go(c)
            s = spine_shift(c2)
            if s:
                c2 = shift_spine(c2, -s)
            kids.append(c2)
            offs.append(i + s)
        return Strc(node.count, tuple(offs), tuple(kids))

    return go(tree)


# --- segment views ----------------------------------------------------------


class SegmentView(Sequence[int]):
    """Zero-rebased window [i, j] (inclusive) over a displacement sequence.

    Element ``k`` reads ``base[i + k] - base[i]``, so position 0 is always 0.
    """

    __slots__ = ("base", "i", "j")

    def __init__(self, base: Sequence[int], i: int, j: int):
        n = len(base)
        if not (0 <= i <= j < n):
            raise ValueError(f"segment bounds 0 <= {i} <= {j} < {n} violated")
        self.base = base
        self.i = i
        self.j = j

    def __len__(self) -> int:
        return self.j - self.i + 1

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[p] for p in range(*k.indices(len(self)))]
        if not 0 <= k < len(self):
            raise IndexError(k)
        return self.base[self.i + k] - self.base[self.i]

    def values(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"SegmentView({self.values()!r})"
