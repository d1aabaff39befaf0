"""Cost-optimal tree descriptions of non-contiguous data layouts.

Turn an explicit displacement sequence into the cheapest constructor tree
that flattens back to it (`reconstruct`), expand trees into sequences
(`flatten`), price them (`cost`), rebuild user trees optimally
(`normalize_tree`), and referee everything against an exhaustive search on
small inputs (`brute_force_optimal`, `verify`).
"""

from .core import (Con, CostModel, Idx, IdxBuc, LayoutError,
                   OverflowGuardError, SegmentView, SequenceFormatError,
                   SizeLimitError, Strc, TreeSemanticError, TreeSyntaxError,
                   TypeNode, UNIT_MODEL, Vec, VecBuc, children_of, cost,
                   flat_length, flatten, height, is_basic, is_nice, kind_of,
                   make_nice, node_cost, shift_of)
from .normalize import DEFAULT_MAX_FLATTEN, NormalizationResult, normalize_tree
from .oracle import (NOT_REPRESENTING, OPTIMAL, SUBOPTIMAL, OracleConfig,
                     Verdict, brute_force_optimal, brute_force_optimal_free,
                     verify)
from .scan import (BucketPattern, detect_indexed_bucket, detect_strided_bucket,
                   proper_divisors, repeated, repetition_candidate, strided)
from .solver import (CompactSolution, ReconstructionReport, SegmentGraph,
                     denormalize, reconstruct, solve_normal_form,
                     strc_candidate)
from .textio import (parse_displacements, parse_tree, render_displacements,
                     render_tree, tree_from_dict, tree_to_dict, tree_to_dot)

__version__ = "0.1.0"

__all__ = [
    "Con", "Vec", "Idx", "Strc", "VecBuc", "IdxBuc", "TypeNode",
    "CostModel", "UNIT_MODEL", "SegmentView",
    "LayoutError", "SequenceFormatError", "TreeSyntaxError",
    "TreeSemanticError", "SizeLimitError", "OverflowGuardError",
    "flatten", "flat_length", "cost", "node_cost", "height", "kind_of",
    "children_of", "is_basic", "is_nice", "make_nice", "shift_of",
    "repeated", "strided", "repetition_candidate", "proper_divisors",
    "BucketPattern", "detect_strided_bucket", "detect_indexed_bucket",
    "SegmentGraph", "CompactSolution", "ReconstructionReport",
    "solve_normal_form", "strc_candidate", "denormalize", "reconstruct",
    "OracleConfig", "Verdict", "OPTIMAL", "SUBOPTIMAL", "NOT_REPRESENTING",
    "brute_force_optimal", "brute_force_optimal_free", "verify",
    "NormalizationResult", "normalize_tree", "DEFAULT_MAX_FLATTEN",
    "parse_tree", "render_tree", "tree_to_dict", "tree_from_dict",
    "tree_to_dot", "parse_displacements", "render_displacements",
]
