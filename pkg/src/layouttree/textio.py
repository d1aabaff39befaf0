"""Text, JSON, and DOT serialization for trees and displacement files.

The canonical tree grammar (whitespace-insensitive)::

    tree := "con(" INT ")"
          | "vec(" INT "," INT "," tree ")"
          | "idx(" INT "," list "," tree ")"
          | "strc(" INT "," list "," "[" tree ("," tree)* "]" ")"
          | "vecbuc(" INT "," INT "," INT "," list "," tree ")"
          | "idxbuc(" INT "," INT "," list "," list "," tree ")"
    list := "[" INT ("," INT)* "]"

Displacement files hold signed decimal integers separated by whitespace
and/or commas; ``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import json
import re
from typing import Sequence

from .core import (Con, Idx, IdxBuc, Strc, TypeNode, Vec, VecBuc,
                   OverflowGuardError, SequenceFormatError, TreeSemanticError,
                   TreeSyntaxError, check_int64, kind_of)

_TOKEN_RE = re.compile(r"[a-z]+|-?\d+|[()\[\],]")
_WS_RE = re.compile(r"\s+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            ws = _WS_RE.match(text, pos)
            if ws:
                pos = ws.end()
                continue
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos)
            self.tokens.append((m.group(), pos))
            pos = m.end()
        self.at = 0

    def peek(self) -> tuple[str, int]:
        if self.at < len(self.tokens):
            return self.tokens[self.at]
        return ("", len(self.text))

    def take(self) -> tuple[str, int]:
        tok = self.peek()
        if tok[0] == "":
            raise TreeSyntaxError("unexpected end of input", tok[1])
        self.at += 1
        return tok

    def expect(self, want: str) -> int:
        tok, pos = self.take()
        if tok != want:
            raise TreeSyntaxError(f"expected {want!r}, got {tok!r}", pos)
        return pos

    def integer(self) -> int:
        tok, pos = self.take()
        if not re.fullmatch(r"-?\d+", tok):
            raise TreeSyntaxError(f"expected an integer, got {tok!r}", pos)
        value = int(tok)
        try:
            return check_int64(value, "value")
        except OverflowGuardError:
            raise OverflowGuardError(
                f"value {value} at position {pos} outside the signed 64-bit range"
            ) from None

    def int_list(self) -> tuple[int, ...]:
        self.expect("[")
        out = [self.integer()]
        while self.peek()[0] == ",":
            self.take()
            out.append(self.integer())
        self.expect("]")
        return tuple(out)

    def tree(self) -> TypeNode:
        tok, pos = self.take()
        try:
            if tok == "con":
                self.expect("(")
                c = self.integer()
                self.expect(")")
                return Con(c)
            if tok == "vec":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                d = self.integer()
                self.expect(",")
                child = self.tree()
                self.expect(")")
                return Vec(c, d, child)
            if tok == "idx":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                idxs = self.int_list()
                self.expect(",")
                child = self.tree()
                self.expect(")")
                return Idx(c, idxs, child)
            if tok == "strc":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                idxs = self.int_list()
                self.expect(",")
                self.expect("[")
                kids = [self.tree()]
                while self.peek()[0] == ",":
                    self.take()
                    kids.append(self.tree())
                self.expect("]")
                self.expect(")")
                return Strc(c, idxs, tuple(kids))
            if tok == "vecbuc":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                d = self.integer()
                self.expect(",")
                e = self.integer()
                self.expect(",")
                sizes = self.int_list()
                self.expect(",")
                child = self.tree()
                self.expect(")")
                return VecBuc(c, d, e, sizes, child)
            if tok == "idxbuc":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                e = self.integer()
                self.expect(",")
                idxs = self.int_list()
                self.expect(",")
                sizes = self.int_list()
                self.expect(",")
                child = self.tree()
                self.expect(")")
                return IdxBuc(c, e, idxs, sizes, child)
        except TreeSemanticError as err:
            raise TreeSemanticError(f"{err} (node at position {pos})") from None
        raise TreeSyntaxError(f"unknown constructor {tok!r}", pos)


def parse_tree(text: str) -> TypeNode:
    """Parse canonical tree text; rejects trailing input."""
    p = _Parser(text)
    tree = p.tree()
    tok, pos = p.peek()
    if tok != "":
        raise TreeSyntaxError(f"trailing input {tok!r}", pos)
    return tree


def _render_text(tree: TypeNode) -> str:
    t = type(tree)
    if t is Con:
        return f"con({tree.count})"
    if t is Vec:
        return f"vec({tree.count},{tree.stride},{_render_text(tree.child)})"
    if t is Idx:
        return f"idx({tree.count},{_render_list(tree.indices)},{_render_text(tree.child)})"
    if t is Strc:
        kids = ",".join(_render_text(c) for c in tree.children)
        return f"strc({tree.count},{_render_list(tree.indices)},[{kids}])"
    if t is VecBuc:
        return (f"vecbuc({tree.count},{tree.stride},{tree.substride},"
                f"{_render_list(tree.sizes)},{_render_text(tree.child)})")
    return (f"idxbuc({tree.count},{tree.substride},{_render_list(tree.indices)},"
            f"{_render_list(tree.sizes)},{_render_text(tree.child)})")


def _render_list(values: Sequence[int]) -> str:
    return "[" + ",".join(str(v) for v in values) + "]"


def tree_to_dict(tree: TypeNode) -> dict:
    """Nested plain-dict rendering with a "kind" discriminator per node."""
    t = type(tree)
    d: dict = {"kind": kind_of(tree), "count": tree.count}
    if t is Vec:
        d["stride"] = tree.stride
        d["child"] = tree_to_dict(tree.child)
    elif t is Idx:
        d["indices"] = list(tree.indices)
        d["child"] = tree_to_dict(tree.child)
    elif t is Strc:
        d["indices"] = list(tree.indices)
        d["children"] = [tree_to_dict(c) for c in tree.children]
    elif t is VecBuc:
        d["stride"] = tree.stride
        d["substride"] = tree.substride
        d["sizes"] = list(tree.sizes)
        d["child"] = tree_to_dict(tree.child)
    elif t is IdxBuc:
        d["substride"] = tree.substride
        d["indices"] = list(tree.indices)
        d["sizes"] = list(tree.sizes)
        d["child"] = tree_to_dict(tree.child)
    return d


def tree_from_dict(data: dict) -> TypeNode:
    """Inverse of tree_to_dict."""
    try:
        kind = data["kind"]
        if kind == "con":
            return Con(data["count"])
        if kind == "vec":
            return Vec(data["count"], data["stride"], tree_from_dict(data["child"]))
        if kind == "idx":
            return Idx(data["count"], tuple(data["indices"]),
                       tree_from_dict(data["child"]))
        if kind == "strc":
            return Strc(data["count"], tuple(data["indices"]),
                        tuple(tree_from_dict(c) for c in data["children"]))
        if kind == "vecbuc":
            return VecBuc(data["count"], data["stride"], data["substride"],
                          tuple(data["sizes"]), tree_from_dict(data["child"]))
        if kind == "idxbuc":
            return IdxBuc(data["count"], data["substride"], tuple(data["indices"]),
                          tuple(data["sizes"]), tree_from_dict(data["child"]))
    except KeyError as err:
        raise TreeSemanticError(f"missing field {err} in tree object") from None
    raise TreeSemanticError(f"unknown node kind {data.get('kind')!r}")


def _node_label(tree: TypeNode) -> str:
    t = type(tree)
    if t is Con:
        return f"con({tree.count})"
    if t is Vec:
        return f"vec({tree.count}, {tree.stride})"
    if t is Idx:
        return f"idx({tree.count}, {list(tree.indices)})"
    if t is Strc:
        return f"strc({tree.count}, {list(tree.indices)})"
    if t is VecBuc:
        return (f"vecbuc({tree.count}, {tree.stride}, {tree.substride}, "
                f"{list(tree.sizes)})")
    return (f"idxbuc({tree.count}, {tree.substride}, {list(tree.indices)}, "
            f"{list(tree.sizes)})")


def tree_to_dot(tree: TypeNode) -> str:
    """Graph description (DOT) of the tree for static figure generation."""
    lines = ["digraph layouttree {",
             '  node [shape=box, fontname="monospace"];']
    counter = 0

    def go(node: TypeNode) -> int:
        nonlocal counter
        me = counter
        counter += 1
        lines.append(f'  n{me} [label="{_node_label(node)}"];')
        t = type(node)
        kids = node.children if t is Strc else (
            () if t is Con else (node.child,))
        for c in kids:
            cid = go(c)
            lines.append(f"  n{me} -> n{cid};")
        return me

    go(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_tree(tree: TypeNode, format: str = "text") -> str:
    """Render a tree as canonical text, a JSON object, or a DOT graph."""
    if format == "text":
        return _render_text(tree)
    if format == "json":
        return json.dumps(tree_to_dict(tree))
    if format == "dot":
        return tree_to_dot(tree)
    raise ValueError(f"unknown format {format!r}")


def parse_displacements(text: str, reject_duplicates: bool = False) -> list[int]:
    """Parse a displacement file: integers split on whitespace/commas, with
    ``#`` comments.  At least one integer is required."""
    cleaned = []
    for line in text.splitlines():
        hash_at = line.find("#")
        if hash_at >= 0:
            line = line[:hash_at]
        cleaned.append(line)
    tokens = " ".join(cleaned).replace(",", " ").split()
    if not tokens:
        raise SequenceFormatError("displacement input holds no values")
    out = []
    for tok in tokens:
        if not re.fullmatch(r"[+-]?\d+", tok):
            raise SequenceFormatError(f"not an integer: {tok!r}")
        out.append(check_int64(int(tok)))
    if reject_duplicates and len(set(out)) != len(out):
        seen = set()
        dup = next(v for v in out if v in seen or seen.add(v))
        raise SequenceFormatError(f"duplicate displacement {dup}")
    return out


def render_displacements(seq: Sequence[int]) -> str:
    return " ".join(str(v) for v in seq)
