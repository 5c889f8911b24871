"""Command-line interface.

Usage:
    leakyforce closure --g6 Bg --set 0 [--leaks v:1]
    leakyforce check   --graph paw.txt --set 1,3 --ell 1 --kind vertex
    leakyforce forces  --g6 E{Sw --set 0,1,2 [--leaks ...] [--oracle]
    leakyforce number  --graph paw.txt --ell 1 --kind vertex
    leakyforce pattern --g6 E{Sw --arcs a:0>3,a:1>4 (--set 0,1,2 | --number)
    leakyforce verify  --corpus corpus.g6 --ell-max 2

Every verb prints one JSON document {query, result, stats} on stdout.
Exit codes: 0 computed, 1 verdict false under --assert, 2 input error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .forcing import ContractError, MalformedProcessError, closure, possible_forces
from .graph import Graph, Graph6Error, GraphError, EdgeListError, emit_graph6, load_graph, parse_graph6, read_corpus
from .leaks import KINDS, LeakBudget, LeakError, parse_leak_string, parse_pattern_string
from .solver import check_leaky_set, check_pattern_leaky_set, leaky_number, pattern_leaky_number
from .verify import DEFAULT_STATE_CAP, ResourceError, possible_forces_oracle, run_theorem_suite

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

INPUT_ERRORS = (GraphError, Graph6Error, EdgeListError, LeakError, ContractError, MalformedProcessError, OSError)


class InputError(ValueError):
    pass


def parse_vertex_list(text: str, g: Graph) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    try:
        ids = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad vertex list {text!r}; expected comma-separated integers") from None
    for v in ids:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range 0..{g.n - 1}")
    return frozenset(ids)


def _load(args) -> Graph:
    if args.g6 is not None:
        return parse_graph6(args.g6)
    if args.graph is None:
        raise InputError("a graph is required: use --graph PATH or --g6 WORD")
    if args.graph == "-":
        text = sys.stdin.read()
    else:
        with open(args.graph) as fh:
            text = fh.read()
    return load_graph(text, args.format)


def _prepare(args, g: Graph) -> dict:
    """Parse set/leak/arc options in place and return the canonical query record."""
    q: dict = {"verb": args.verb, "graph6": emit_graph6(g) if g.n <= 62 else None}
    if getattr(args, "set", None) is not None:
        args.b = parse_vertex_list(args.set, g)
        q["set"] = sorted(args.b)
    for key in ("ell", "kind"):
        if getattr(args, key, None) is not None:
            q[key] = getattr(args, key)
    if hasattr(args, "leaks"):
        args.leakset = parse_leak_string(args.leaks or "", g)
        q["leaks"] = args.leakset.strings()
    if getattr(args, "arcs", None) is not None:
        args.pattern = parse_pattern_string(args.arcs)
        q["arcs"] = [f"a:{t}>{h}" for t, h in args.pattern.sorted_arcs()]
    return q


def _forces(forces) -> list[str]:
    return [str(f) for f in sorted(forces)]


def cmd_closure(args, g: Graph) -> tuple[dict, dict, bool]:
    res = closure(g, args.b, args.leakset)
    result = {
        "final": sorted(res.final),
        "white": sorted(g.vertices - res.final),
        "complete": res.final == g.vertices,
        "rounds": [sorted(r) for r in res.rounds],
        "process": [str(f) for f in res.process],
    }
    return result, {}, res.final == g.vertices


def cmd_check(args, g: Graph) -> tuple[dict, dict, bool]:
    v = check_leaky_set(g, args.b, LeakBudget(args.kind, args.ell))
    return v.to_dict(), {"leaksets_checked": v.leaksets_checked}, v.holds


def cmd_forces(args, g: Graph) -> tuple[dict, dict, bool]:
    complete = not args.unfiltered
    if args.oracle:
        forces = possible_forces_oracle(g, args.b, args.leakset, complete=complete, state_cap=args.state_cap)
    else:
        forces = possible_forces(g, args.b, args.leakset, complete=complete)
    return {"forces": _forces(forces), "method": "oracle" if args.oracle else "blocked_closure"}, {}, True


def cmd_number(args, g: Graph) -> tuple[dict, dict, bool]:
    r = leaky_number(g, LeakBudget(args.kind, args.ell), workers=args.workers)
    return r.to_dict(), {"subsets_checked": r.subsets_checked, "leaksets_checked": r.leaksets_checked}, True


def cmd_pattern(args, g: Graph) -> tuple[dict, dict, bool]:
    if args.number:
        r = pattern_leaky_number(g, args.pattern, workers=args.workers)
        return r.to_dict(), {"subsets_checked": r.subsets_checked, "leaksets_checked": r.leaksets_checked}, True
    v = check_pattern_leaky_set(g, args.b, args.pattern)
    return v.to_dict(), {"leaksets_checked": v.leaksets_checked}, v.holds


def cmd_verify(args) -> tuple[dict, dict, bool]:
    with open(args.corpus) as fh:
        corpus = read_corpus(fh.read())
    report = run_theorem_suite(
        corpus,
        args.ell_max,
        workers=args.workers,
        seed=args.seed,
        splice_samples=args.splice_samples,
        oracle_samples=args.oracle_samples,
    )
    return report.to_dict(), {"runtime_ms": round(report.wall_clock_ms, 3)}, report.ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leakyforce", description="Leaky zero forcing solver and verifier.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def graph_opts(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--graph", help="graph file (graph6 word or edge list); '-' for stdin")
        src.add_argument("--g6", help="inline graph6 word")
        p.add_argument("--format", choices=("graph6", "edges"), help="input format (default: auto-detect)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--assert", dest="assert_", action="store_true",
                       help="exit 1 when the verdict is false")

    p = sub.add_parser("closure", help="blue set after exhaustive forcing")
    graph_opts(p)
    p.add_argument("--set", required=True)
    p.add_argument("--leaks")

    p = sub.add_parser("check", help="leaky forcing set membership")
    graph_opts(p)
    p.add_argument("--set", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kind", choices=KINDS, required=True)

    p = sub.add_parser("forces", help="forces possible in some complete forcing process")
    graph_opts(p)
    p.add_argument("--set", required=True)
    p.add_argument("--leaks")
    p.add_argument("--unfiltered", action="store_true",
                   help="include forces from processes that cannot colour the whole graph")
    p.add_argument("--oracle", action="store_true", help="use the state-space oracle")
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)

    p = sub.add_parser("number", help="minimum leaky forcing number with witness")
    graph_opts(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kind", choices=KINDS, required=True)

    p = sub.add_parser("pattern", help="forcing robust to every placement of an arc pattern")
    graph_opts(p)
    p.add_argument("--arcs", required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--set")
    mode.add_argument("--number", action="store_true")

    p = sub.add_parser("verify", help="run the theorem suite over a graph6 corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ell-max", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--splice-samples", type=int, default=20)
    p.add_argument("--oracle-samples", type=int, default=20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 when any violation is found")
    return parser


COMMANDS = {
    "closure": cmd_closure,
    "check": cmd_check,
    "forces": cmd_forces,
    "number": cmd_number,
    "pattern": cmd_pattern,
}


def run(argv: list[str] | None = None) -> tuple[int, dict | None, str | None]:
    """Execute a command; returns (exit code, JSON document or None, error message or None)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.verb == "verify":
            if args.ell_max < 1:
                raise InputError("--ell-max must be at least 1")
            query = {"verb": "verify", "corpus": args.corpus, "ell_max": args.ell_max, "seed": args.seed}
            result, stats, ok = cmd_verify(args)
        else:
            g = _load(args)
            query = _prepare(args, g)
            result, stats, ok = COMMANDS[args.verb](args, g)
    except ResourceError as exc:
        return EXIT_RESOURCE, None, str(exc)
    except (InputError, *INPUT_ERRORS) as exc:
        return EXIT_INPUT, None, str(exc)
    stats = dict(stats)
    stats.setdefault("runtime_ms", round((time.perf_counter() - start) * 1000, 3))
    doc = {"query": query, "result": result, "stats": stats}
    code = EXIT_FALSE if args.assert_ and not ok else EXIT_OK
    return code, doc, None


def main(argv: list[str] | None = None) -> int:
    code, doc, err = run(argv)
    if err is not None:
        print(f"leakyforce: error: {err}", file=sys.stderr)
    if doc is not None:
        print(json.dumps(doc, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
