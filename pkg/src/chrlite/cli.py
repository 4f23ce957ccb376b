"""Command line front end: `chrlite bench` and `chrlite demo`."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchSpec, emit_table, run_bench
from .engine import ChrError, Mode, SolverConfig, run
from .programs import (
    Edge,
    LevenshteinGoal,
    gcd_program,
    levenshtein_program,
    shortest_path_program,
)
from .state import new_state

_MODES = {"eager": Mode.EAGER, "lazy": Mode.LAZY, "indexed": Mode.LAZY_INDEXED}


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}")
    if not sizes:
        raise argparse.ArgumentTypeError("at least one size is required")
    return sizes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chrlite",
        description="Rule engine benchmarks and demo runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run seeded benchmark arms")
    bench.add_argument("--problem", required=True, choices=("gcd", "shp", "lev"))
    bench.add_argument(
        "--size",
        required=True,
        type=_parse_sizes,
        metavar="N[,N...]",
        help="problem size, optionally a comma separated list",
    )
    bench.add_argument(
        "--config",
        default="indexed",
        choices=tuple(_MODES) + ("all",),
        help="matching configuration (default: indexed)",
    )
    bench.add_argument("--queries", type=int, default=100, metavar="K")
    bench.add_argument("--time-limit-ms", type=int, default=1000, metavar="M")
    bench.add_argument("--seed", type=int, default=0, metavar="S")
    bench.add_argument("--format", default="csv", choices=("csv", "markdown"))
    bench.add_argument(
        "--out",
        type=Path,
        default=None,
        help="write the table here instead of stdout; a figure lands beside it",
    )
    bench.add_argument(
        "--plot",
        type=Path,
        default=None,
        help="explicit figure path (default: --out with a .png suffix)",
    )
    bench.add_argument(
        "--no-plot", action="store_true", help="skip rendering the figure"
    )

    demo = sub.add_parser("demo", help="run one query and print the final store")
    demo.add_argument("--program", required=True, choices=("gcd", "shp", "lev"))
    demo.add_argument("--query", required=True, help="problem specific query text")
    return parser


def _cmd_bench(args) -> int:
    modes = list(_MODES.values()) if args.config == "all" else [_MODES[args.config]]
    results = []
    for size in args.size:
        for mode in modes:
            spec = BenchSpec(
                problem=args.problem,
                size=size,
                mode=mode,
                queries=args.queries,
                time_limit=args.time_limit_ms / 1000.0,
                seed=args.seed,
            )
            results.append(run_bench(spec))
    table = emit_table(results, args.format)
    if args.out is None:
        sys.stdout.write(table)
    else:
        args.out.write_text(table)
    plot_path = args.plot
    if plot_path is None and args.out is not None:
        plot_path = args.out.with_suffix(".png")
    if plot_path is not None and not args.no_plot:
        from .plots import render_results_figure

        render_results_figure(results, plot_path)
    return 0


def _parse_gcd_query(text: str) -> list:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _parse_shp_query(text: str) -> list:
    """Edges as `src>dst:weight`, separated by commas or whitespace."""
    edges = []
    for tok in text.replace(",", " ").split():
        try:
            endpoints, weight = tok.rsplit(":", 1)
            source, target = endpoints.split(">", 1)
            edges.append(Edge(source, target, int(weight)))
        except ValueError:
            raise ValueError(f"bad edge {tok!r}; expected src>dst:weight")
    return edges


def _parse_lev_query(text: str) -> list:
    """Two sequences: either words (compared per character) or comma lists of ints."""
    tokens = text.split()
    if len(tokens) != 2:
        raise ValueError("expected exactly two sequences separated by whitespace")

    def to_seq(tok: str) -> tuple[int, ...]:
        if "," in tok:
            return tuple(int(part) for part in tok.split(",") if part)
        return tuple(ord(ch) for ch in tok)

    return [LevenshteinGoal(to_seq(tokens[0]), to_seq(tokens[1]), "result")]


_DEMO_PARSERS = {
    "gcd": _parse_gcd_query,
    "shp": _parse_shp_query,
    "lev": _parse_lev_query,
}

_DEMO_PROGRAMS = {
    "gcd": gcd_program,
    "shp": shortest_path_program,
    "lev": levenshtein_program,
}


def _cmd_demo(args) -> int:
    try:
        query = _DEMO_PARSERS[args.program](args.query)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    program = _DEMO_PROGRAMS[args.program]()
    state = new_state(query)
    try:
        run(program, state, SolverConfig())
    except ChrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for i in sorted(state.store):
        print(f"{i}\t{state.store[i]!r}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_demo(args)


if __name__ == "__main__":
    sys.exit(main())
