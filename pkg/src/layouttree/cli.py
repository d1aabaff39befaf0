"""Command-line front end.

Subcommands::

    layouttree reconstruct FILE   cheapest tree for a displacement file
    layouttree flatten FILE       displacement sequence of a tree file
    layouttree cost FILE          cost of a tree file under the active model
    layouttree normalize FILE     rebuild a tree file optimally
    layouttree verify SEQ TREE    exhaustive optimality verdict (small inputs)

Results go to standard output; reports, timings, and diagnostics go to
standard error, so ``reconstruct | flatten`` round-trips the input.  Exit
codes: 0 success, 2 parse or usage failure, 3 size guard, 4 overflow guard.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import fields

from .core import (CostModel, LayoutError, OverflowGuardError,
                   SequenceFormatError, SizeLimitError, TreeSemanticError,
                   TreeSyntaxError, cost, flat_length, flatten)
from .normalize import DEFAULT_MAX_FLATTEN, normalize_tree
from .oracle import NOT_REPRESENTING, OPTIMAL, OracleConfig, verify
from .solver import reconstruct
from .textio import (parse_displacements, parse_tree, render_displacements,
                     render_tree, tree_to_dict)

_COST_KEYS = tuple(f.name for f in fields(CostModel))


def _cost_model(text: str) -> CostModel:
    values = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, raw = part.partition("=")
        key = key.strip()
        if not sep or key not in _COST_KEYS:
            raise argparse.ArgumentTypeError(
                f"expected KEY=N with KEY in {', '.join(_COST_KEYS)}; got {part!r}")
        try:
            values[key] = int(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {raw!r}") from None
    try:
        return CostModel(**values)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _emit_tree(tree, fmt: str, extra: dict | None = None) -> None:
    if fmt == "json":
        payload = dict(extra or {})
        payload["tree"] = tree_to_dict(tree)
        print(json.dumps(payload))
    else:
        print(render_tree(tree, fmt))


def _note(*pairs) -> None:
    for key, value in pairs:
        print(f"{key} {value}", file=sys.stderr)


def _cmd_reconstruct(args) -> int:
    seq = parse_displacements(_read(args.input),
                              reject_duplicates=args.reject_duplicates)
    report = reconstruct(seq, args.cost, extended=args.extended,
                         max_n=args.max_n, threads=args.threads)
    extra = {"n": report.n, "cost": report.cost,
             "trivial_cost": report.trivial_cost,
             "compression": round(report.compression, 4),
             "extended": report.extended}
    _emit_tree(report.tree, args.format, extra)
    _note(("n", report.n), ("cost", report.cost),
          ("trivial", report.trivial_cost),
          ("compression", f"{report.compression:.4f}"),
          ("time_ms", f"{report.wall_time_s * 1e3:.3f}"),
          ("segments", report.segment_entries))
    return 0


def _cmd_flatten(args) -> int:
    tree = parse_tree(_read(args.input))
    length = flat_length(tree)
    if length > args.max_flatten:
        raise SizeLimitError(
            f"flattened size {length} exceeds the limit {args.max_flatten}")
    print(render_displacements(flatten(tree)))
    return 0


def _cmd_cost(args) -> int:
    tree = parse_tree(_read(args.input))
    print(cost(tree, args.cost))
    return 0


def _cmd_normalize(args) -> int:
    tree = parse_tree(_read(args.input))
    started = time.perf_counter()
    result = normalize_tree(tree, args.cost, extended=args.extended,
                            max_flatten=args.max_flatten, threads=args.threads)
    elapsed = time.perf_counter() - started
    extra = {"old_cost": result.old_cost, "new_cost": result.new_cost}
    _emit_tree(result.tree, args.format, extra)
    _note(("old", render_tree(tree)), ("old_cost", result.old_cost),
          ("new_cost", result.new_cost),
          ("time_ms", f"{elapsed * 1e3:.3f}"))
    return 0


def _cmd_verify(args) -> int:
    seq = parse_displacements(_read(args.sequence),
                              reject_duplicates=args.reject_duplicates)
    tree = parse_tree(_read(args.tree))
    cfg = OracleConfig(max_n=args.max_n, extended=args.extended)
    verdict = verify(seq, tree, args.cost, cfg)
    if verdict.kind == NOT_REPRESENTING:
        print("not-representing")
    elif verdict.kind == OPTIMAL:
        print("optimal")
    else:
        print(f"suboptimal; witness {render_tree(verdict.witness)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layouttree",
        description="Reconstruct, inspect, and normalize tree descriptions "
                    "of non-contiguous data layouts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        p.add_argument("--cost", type=_cost_model, default=CostModel(),
                       metavar="K=V,...",
                       help="cost constants, e.g. k_idx=2,k_lookup=1 "
                            "(defaults: all 1)")
        p.add_argument("--extended", action="store_true",
                       help="allow the bucket constructors")
        if formats:
            p.add_argument("--format", choices=("text", "json", "dot"),
                           default="text", help="tree output format")

    p = sub.add_parser("reconstruct",
                       help="cheapest tree for a displacement file")
    p.add_argument("input", help="displacement file, or - for stdin")
    common(p)
    p.add_argument("--max-n", type=_positive, default=None,
                   help="reject inputs longer than this")
    p.add_argument("--threads", type=_positive, default=1,
                   help="worker threads for same-length segments")
    p.add_argument("--reject-duplicates", action="store_true",
                   help="treat repeated displacements as a parse error")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("flatten", help="displacement sequence of a tree file")
    p.add_argument("input", help="tree file, or - for stdin")
    p.add_argument("--max-flatten", type=_positive, default=DEFAULT_MAX_FLATTEN,
                   help="largest flattened size to materialize")
    p.set_defaults(func=_cmd_flatten)

    p = sub.add_parser("cost", help="cost of a tree file")
    p.add_argument("input", help="tree file, or - for stdin")
    common(p, formats=False)
    p.set_defaults(func=_cmd_cost)

    p = sub.add_parser("normalize", help="rebuild a tree file optimally")
    p.add_argument("input", help="tree file, or - for stdin")
    common(p)
    p.add_argument("--max-flatten", type=_positive, default=DEFAULT_MAX_FLATTEN,
                   help="largest flattened size to reconstruct")
    p.add_argument("--threads", type=_positive, default=1)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("verify",
                       help="exhaustive optimality verdict for small inputs")
    p.add_argument("sequence", help="displacement file, or - for stdin")
    p.add_argument("tree", help="tree file")
    common(p, formats=False)
    p.add_argument("--max-n", type=_positive, default=6,
                   help="largest length the exhaustive search accepts")
    p.add_argument("--reject-duplicates", action="store_true")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))
    try:
        return args.func(args)
    except (SequenceFormatError, TreeSyntaxError, TreeSemanticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SizeLimitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except OverflowGuardError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except LayoutError as err:  # internal soundness failures, bugs
        print(f"internal error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
