import json
import random

import pytest

from layouttree import (Con, Idx, IdxBuc, OverflowGuardError,
                        SequenceFormatError, Strc, TreeSemanticError,
                        TreeSyntaxError, Vec, VecBuc, parse_displacements,
                        parse_tree, render_displacements, render_tree,
                        tree_from_dict, tree_to_dict, tree_to_dot)

from conftest import FIG_TEXT, FIG_TREE
from helpers import random_tree


def test_parse_leaf():
    assert parse_tree("con(5)") == Con(5)


def test_parse_fig_text():
    assert parse_tree(FIG_TEXT) == FIG_TREE


def test_parse_buckets():
    assert parse_tree("vecbuc(3,10,2,[3,1,2],con(1))") == \
        VecBuc(3, 10, 2, (3, 1, 2), Con(1))
    assert parse_tree("idxbuc(2,5,[0,25],[2,4],con(1))") == \
        IdxBuc(2, 5, (0, 25), (2, 4), Con(1))


def test_parse_is_whitespace_insensitive():
    spaced = "strc( 2 , [ 0 , 60 ] , [ con(5) ,\n vec(5, -10, idx(3,[0,-4,7],con(1))) ] )"
    assert parse_tree(spaced) == FIG_TREE


def test_arity_mismatch_is_semantic_error():
    with pytest.raises(TreeSemanticError, match="indices length 1 != count 2"):
        parse_tree("idx(2,[0],con(1))")


@pytest.mark.parametrize("text", [
    "",
    "con(5",
    "con(x)",
    "vec(2,3)",
    "con(5))",
    "con(5) trailing",
    "frob(1)",
    "idx(2,[0 1],con(1))",
])
def test_syntax_errors(text):
    with pytest.raises(TreeSyntaxError):
        parse_tree(text)


def test_parse_overflow_guard():
    with pytest.raises(OverflowGuardError):
        parse_tree("con(99999999999999999999)")


def test_render_parse_round_trip():
    rng = random.Random(11)
    for _ in range(200):
        tree = random_tree(rng, 30, extended=True)
        assert parse_tree(render_tree(tree)) == tree


def test_parse_render_is_canonical():
    assert render_tree(parse_tree(FIG_TEXT)) == FIG_TEXT


def test_dict_round_trip():
    rng = random.Random(12)
    for _ in range(100):
        tree = random_tree(rng, 30, extended=True)
        data = tree_to_dict(tree)
        assert data["kind"] in ("con", "vec", "idx", "strc", "vecbuc", "idxbuc")
        assert tree_from_dict(json.loads(json.dumps(data))) == tree


def test_json_render_has_kind_discriminator():
    data = json.loads(render_tree(FIG_TREE, "json"))
    assert data["kind"] == "strc"
    assert data["children"][0] == {"kind": "con", "count": 5}


def test_dot_render():
    dot = tree_to_dot(FIG_TREE)
    assert dot.startswith("digraph")
    assert dot.count("->") == 4  # five nodes, four edges
    assert 'idx(3, [0, -4, 7])' in dot
    assert render_tree(FIG_TREE, "dot") == dot


def test_render_unknown_format():
    with pytest.raises(ValueError):
        render_tree(Con(1), "yaml")


# --- displacement files -----------------------------------------------------


def test_parse_displacements_formats():
    text = "# header\n 0, 1 2,3 # trailing words\n-4 +5\n"
    assert parse_displacements(text) == [0, 1, 2, 3, -4, 5]


def test_parse_displacements_round_trip():
    seq = [3, -5, 0, 3, 99]
    assert parse_displacements(render_displacements(seq)) == seq


@pytest.mark.parametrize("text", ["", "# only a comment", "1 2 x", "1.5"])
def test_parse_displacements_rejects(text):
    with pytest.raises(SequenceFormatError):
        parse_displacements(text)


def test_parse_displacements_overflow():
    with pytest.raises(OverflowGuardError):
        parse_displacements("9223372036854775808")
    assert parse_displacements("9223372036854775807") == [2**63 - 1]


def test_reject_duplicates_flag():
    assert parse_displacements("1 2 1") == [1, 2, 1]
    with pytest.raises(SequenceFormatError, match="duplicate"):
        parse_displacements("1 2 1", reject_duplicates=True)
