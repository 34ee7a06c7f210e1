"""Command-line front end.

Subcommands: solve, blocking, rotations, poset, count, enumerate,
count-1d, isets, gen, verify.  Inputs are files or '-' for stdin.
Instance-consuming commands accept either a preference-list file or a
geometric model file (recognized by its ``model ...`` header), which is
converted on the fly.  Exit codes: 0 success, 1 domain error (bad input,
ties, size bounds), 2 usage error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys

from .core import (
    Instance,
    ParseError,
    Side,
    format_instance,
    format_matching,
    parse_instance,
    parse_matching,
)
from .counting import (
    SizeLimitError,
    Poset,
    count_downsets,
    count_independent_sets,
    enumerate_downsets,
    matching_from_downset,
    parse_bipartite,
)
from .gale_shapley import blocking_pairs, propose_optimal
from .geometry import (
    OneAttributeSpec,
    TieDetected,
    count_1attribute,
    format_geometric,
    induced_instance,
    parse_geometric,
)
from .reductions import (
    build_instance,
    gen_2euclidean,
    gen_3attribute,
    gen_partial_lists,
    verify_reduction,
)
from .rotations import (
    find_all_rotations,
    format_rotations,
    hasse_dot,
    rotation_poset,
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_instance(path: str) -> Instance:
    text = _read(path)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            if line.startswith("model "):
                return induced_instance(parse_geometric(text))
            return parse_instance(text)
    raise ParseError("empty input")


def _parse_tau(arg: str | None):
    if arg is None:
        return None
    try:
        return tuple(int(tok) for tok in arg.split(","))
    except ValueError:
        raise ParseError(f"bad permutation {arg!r}; expected e.g. 2,1,3") from None


def _cmd_solve(args) -> int:
    inst = _load_instance(args.file)
    side = Side.WOMAN if args.side == "women" else Side.MAN
    sys.stdout.write(format_matching(propose_optimal(inst, side)))
    return 0


def _cmd_blocking(args) -> int:
    inst = _load_instance(args.file)
    matching = parse_matching(_read(args.matching), inst.n)
    for m, w in blocking_pairs(inst, matching):
        print(f"block {m} {w}")
    return 0


def _cmd_rotations(args) -> int:
    inst = _load_instance(args.file)
    sys.stdout.write(format_rotations(find_all_rotations(inst)[0]))
    return 0


def _cmd_poset(args) -> int:
    inst = _load_instance(args.file)
    poset = rotation_poset(inst)
    if args.dot:
        sys.stdout.write(hasse_dot(poset))
    else:
        sys.stdout.write(format_rotations(list(poset.rotations)))
        for i, j in poset.relation_pairs():
            print(f"prec {i + 1} {j + 1}")
    return 0


def _cmd_count(args) -> int:
    inst = _load_instance(args.file)
    print(count_downsets(Poset.from_rotations(rotation_poset(inst))))
    return 0


def _cmd_enumerate(args) -> int:
    inst = _load_instance(args.file)
    rposet = rotation_poset(inst)
    poset = Poset.from_rotations(rposet)
    print(f"total {count_downsets(poset)}")
    for downset in enumerate_downsets(poset, limit=args.limit):
        matching = matching_from_downset(inst, rposet, downset)
        print(" ".join(map(str, matching.wives)))
    return 0


def _cmd_count_1d(args) -> int:
    spec = parse_geometric(_read(args.file))
    if not isinstance(spec, OneAttributeSpec):
        raise ParseError("count-1d expects a 'model 1d' spec")
    print(count_1attribute(spec))
    return 0


def _cmd_isets(args) -> int:
    graph = parse_bipartite(_read(args.file))
    print(count_independent_sets(graph))
    return 0


def _cmd_gen(args) -> int:
    graph = parse_bipartite(_read(args.file))
    if args.model == "lists":
        out = format_instance(gen_partial_lists(graph, _parse_tau(args.tau)))
    elif args.model == "attr3":
        out = format_geometric(gen_3attribute(graph))
    else:
        out = format_geometric(gen_2euclidean(graph))
    sys.stdout.write(out)
    return 0


def _verify_one(path: str, model: str) -> tuple[str, str, bool]:
    report = verify_reduction(parse_bipartite(_read(path)), model)
    return path, str(report), report.all_ok


def _cmd_verify(args) -> int:
    model = args.model
    if os.path.isdir(args.file):
        paths = sorted(
            os.path.join(args.file, name)
            for name in os.listdir(args.file)
            if name.endswith(".bis")
        )
        all_ok = True
        with concurrent.futures.ProcessPoolExecutor() as pool:
            for path, text, ok in pool.map(
                _verify_one, paths, [model] * len(paths)
            ):
                print(f"== {path}")
                print(text)
                all_ok = all_ok and ok
        return 0 if all_ok else 3
    _, text, ok = _verify_one(args.file, model)
    print(text)
    return 0 if ok else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablecount",
        description="Stable matchings, rotation posets, and counting.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sub = subs.add_parser(name, help=help_)
        sub.set_defaults(func=func)
        return sub

    sub = add("solve", _cmd_solve, "side-optimal stable matching")
    sub.add_argument("--side", choices=("men", "women"), default="men")
    sub.add_argument("file")

    sub = add("blocking", _cmd_blocking, "blocking pairs of a matching")
    sub.add_argument("file")
    sub.add_argument("matching")

    sub = add("rotations", _cmd_rotations, "all rotations in elimination order")
    sub.add_argument("file")

    sub = add("poset", _cmd_poset, "rotation poset (or its Hasse diagram as DOT)")
    sub.add_argument("--dot", action="store_true")
    sub.add_argument("file")

    sub = add("count", _cmd_count, "number of stable matchings")
    sub.add_argument("file")

    sub = add("enumerate", _cmd_enumerate, "list stable matchings")
    sub.add_argument("--limit", type=int, default=1000)
    sub.add_argument("file")

    sub = add("count-1d", _cmd_count_1d, "count stable matchings of a 1d model")
    sub.add_argument("file")

    sub = add("isets", _cmd_isets, "independent sets of a bipartite graph")
    sub.add_argument("file")

    sub = add("gen", _cmd_gen, "instance or geometric spec from a bipartite graph")
    sub.add_argument("--model", choices=("lists", "attr3", "euclid2"), default="lists")
    sub.add_argument("--tau", default=None)
    sub.add_argument("file")

    sub = add("verify", _cmd_verify, "check the reduction on a graph (or directory)")
    sub.add_argument("--model", choices=("lists", "attr3", "euclid2"), default="lists")
    sub.add_argument("file")

    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ParseError, TieDetected, SizeLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(run())
