"""Command-line interface.

Exit codes: 0 success, 1 conjecture violation, 2 invalid input, 3 search
budget exhausted before a decision.
"""
import argparse
import contextlib
import dataclasses
import json
import logging
import sys
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

import pandas as pd

from . import __version__, bounds, coloring, conjectures
from .derived import analyze, line_graph
from .generators import GenSpec, generate, random_sweep_plan
from .hcore import Hypergraph, incidence_matrix, parse, serialize, validate
from .serializer import SERIALIZERS
from .store import FileStore
from .utils import Budget

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

_GENERATORS = {
    "fano": ("projective_plane", ()),
    "pg": ("projective_plane", ("q",)),
    "kn": ("complete_graph", ("n",)),
    "near-pencil": ("near_pencil", ("n",)),
    "sts": ("steiner_triple", ("n",)),
    "random": ("random_linear", ("n", "m_target")),
}


def export_dimacs(H: Hypergraph) -> str:
    """The line graph of H in DIMACS ``.col`` format, 1-based, edges in lexicographic order."""
    graph = line_graph(H)
    pairs = graph.edges()
    lines = [f"p edge {graph.n} {len(pairs)}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in pairs)
    return "\n".join(lines) + "\n"


def _to_json(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, coloring.EdgeColoring):
        return value.to_json_dict()
    if isinstance(value, coloring.ListAssignment):
        return value.to_json_dict()
    if dataclasses.is_dataclass(value):
        return {f.name: getattr(value, f.name) for f in dataclasses.fields(value)}
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _dump(doc: Any, out: TextIO) -> None:
    out.write(json.dumps(doc, default=_to_json, indent=2) + "\n")


def _read_instance(path: Optional[str], stdin: TextIO) -> Hypergraph:
    text = stdin.read() if path in (None, "-") else Path(path).read_text()
    return parse(text)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(limit_ms=args.limit_ms, limit_nodes=args.limit_nodes)


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "input", nargs="?", help="instance JSON file, standard input if omitted or '-'"
    )


def _add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--limit-ms", type=int, default=None, help="wall-clock limit of a search")
    parser.add_argument(
        "--limit-nodes", type=int, default=10_000_000, help="node limit of a search"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercolor",
        description="Construct, analyze and list edge-color linear hypergraphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="log to stderr (-v info, -vv debug)"
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    generate_parser = verbs.add_parser("generate", help="build an instance")
    generate_parser.add_argument("kind", choices=sorted(_GENERATORS))
    generate_parser.add_argument(
        "params",
        nargs="*",
        type=int,
        help="q for pg; n for kn, near-pencil, sts; n m for random",
    )
    generate_parser.add_argument("--seed", type=int, default=None, help="seed of random instances")
    generate_parser.add_argument("--rank-min", type=int, default=2)
    generate_parser.add_argument("--rank-max", type=int, default=3)

    analyze_parser = verbs.add_parser("analyze", help="statistics and validation report")
    _add_input(analyze_parser)

    color_parser = verbs.add_parser("color", help="greedy or exact edge coloring")
    _add_input(color_parser)
    color_parser.add_argument("--exact", action="store_true", help="compute the chromatic index")
    color_parser.add_argument(
        "-k", type=int, default=None, help="greedy palette size, 1 + max R(e) by default"
    )
    color_parser.add_argument("--order", choices=coloring.ORDER_STRATEGIES, default="input")
    color_parser.add_argument("--seed", type=int, default=None, help="seed of the random order")
    _add_budget(color_parser)

    choosability_parser = verbs.add_parser(
        "choosability", help="decide k-choosability of a small instance"
    )
    _add_input(choosability_parser)
    choosability_parser.add_argument("-k", type=int, required=True)
    _add_budget(choosability_parser)

    check_parser = verbs.add_parser("check", help="check conjectures on one instance")
    _add_input(check_parser)
    check_parser.add_argument(
        "--conjecture",
        action="append",
        choices=[c.value for c in conjectures.Conjecture],
        help="repeatable; EFL, C1, C2 and C3 by default",
    )
    _add_budget(check_parser)

    critical_parser = verbs.add_parser("critical", help="minimal counterexample properties for C2")
    _add_input(critical_parser)
    _add_budget(critical_parser)

    conditions_parser = verbs.add_parser(
        "conditions", help="run every bound and hypothesis checker"
    )
    _add_input(conditions_parser)
    conditions_parser.add_argument(
        "-C", type=Fraction, default=Fraction(3), help="constant of the large-rank bound"
    )

    sweep_parser = verbs.add_parser("sweep", help="check conjectures over many instances")
    sweep_parser.add_argument(
        "plan", nargs="?", help="JSON lines of generator specs, standard input if omitted"
    )
    sweep_parser.add_argument(
        "--random",
        type=int,
        default=None,
        metavar="COUNT",
        help="sweep COUNT random linear instances",
    )
    sweep_parser.add_argument("--n-min", type=int, default=3)
    sweep_parser.add_argument("--n-max", type=int, default=8)
    sweep_parser.add_argument("--rank-max", type=int, default=3)
    sweep_parser.add_argument("--seed", type=int, default=0)
    sweep_parser.add_argument("--conjectures", default="C1,C2,C3")
    sweep_parser.add_argument("--jobs", type=int, default=1)
    sweep_parser.add_argument("--format", choices=["csv", "json", "parquet"], default="csv")
    sweep_parser.add_argument(
        "--output", default=None, help="report file, standard output if omitted"
    )
    sweep_parser.add_argument(
        "--cache-dir", default=None, help="cache finished rows under this directory"
    )
    sweep_parser.add_argument("--store-backend", choices=["parquet", "joblib"], default="parquet")
    sweep_parser.add_argument("--force", action="store_true", help="recompute cached rows")
    _add_budget(sweep_parser)

    export_parser = verbs.add_parser(
        "export", help="line graph as DIMACS or incidence matrix as CSV"
    )
    _add_input(export_parser)
    export_parser.add_argument("--to", choices=["dimacs", "incidence"], default="dimacs")
    return parser


def _generate(args: argparse.Namespace, out: TextIO) -> int:
    kind, names = _GENERATORS[args.kind]
    if len(args.params) != len(names):
        raise ValueError(
            f"{args.kind} takes {len(names)} parameters {list(names)}, got {args.params}"
        )
    params = dict(zip(names, args.params))
    if args.kind == "fano":
        params = {"q": 2}
    seed = None
    if kind == "random_linear":
        if args.seed is None:
            raise ValueError("random instances need --seed")
        params.update(rank_min=args.rank_min, rank_max=args.rank_max)
        seed = args.seed
    instance = generate(GenSpec(kind, params, seed))
    out.write(serialize(instance.hypergraph, meta=instance.meta) + "\n")
    return EXIT_OK


def _analyze(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    _dump({"analysis": analyze(H), "validation": validate(H)}, out)
    return EXIT_OK


def _color(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    if args.exact:
        result = coloring.chromatic_index_exact(H, _budget(args))
        _dump(
            {
                "q": result.value,
                "lower": result.lower,
                "upper": result.upper,
                "coloring": result.coloring,
                "nodes": result.nodes,
                "limit_hit": result.limit_hit,
            },
            out,
        )
        return EXIT_BUDGET if result.limit_hit else EXIT_OK

    k = args.k if args.k is not None else 1 + max(analyze(H).maxR, 0)
    order = coloring.edge_order(H, args.order, seed=args.seed)
    result = coloring.greedy_color(H, k, order)
    if result.success:
        _dump({"k": k, "order": order, "coloring": result}, out)
    else:
        _dump({"k": k, "order": order, "failure": result}, out)
    return EXIT_OK


def _choosability(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    verdict = coloring.is_k_choosable(H, args.k, _budget(args))
    _dump(verdict, out)
    return EXIT_BUDGET if verdict.limit_hit else EXIT_OK


def _check(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    which = args.conjecture or ["EFL", "C1", "C2", "C3"]
    budget = _budget(args)
    exact = conjectures.exact_or_bounds(H, budget)
    verdicts = [conjectures.check_conjecture(H, c, budget, exact=exact) for c in which]
    _dump({"verdicts": verdicts, "comparison": conjectures.bound_comparison(H)}, out)
    statuses = {v.status for v in verdicts}
    if conjectures.Status.VIOLATED in statuses:
        return EXIT_VIOLATION
    if any(v.limit_hit and v.status is conjectures.Status.UNDECIDED for v in verdicts):
        return EXIT_BUDGET
    return EXIT_OK


def _critical(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    _dump(conjectures.critical_check(H, _budget(args)), out)
    return EXIT_OK


def _conditions(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    doc: Dict[str, Any] = {}
    uniform = bounds.uniformize(H)
    if max(uniform.ranks, default=0) >= 3 and validate(H).linear:
        doc["theorem5"] = bounds.theorem5_diagnostics(uniform, args.C)
    for name, checker in (
        ("theorem7", bounds.theorem7_condition),
        ("corollary6", lambda G: bounds.corollary6_condition(G, args.C)),
        ("theorem8", bounds.theorem8_hypothesis),
        ("corollary9", bounds.corollary9_condition),
        ("corollary10", bounds.corollary10_condition),
        ("corollary11", bounds.corollary11_condition),
        ("vu", bounds.vu_quantities),
    ):
        try:
            doc[name] = checker(H)
        except ValueError as exc:
            doc[name] = {"error": str(exc)}
    _dump(doc, out)
    return EXIT_OK


def _export(H: Hypergraph, args: argparse.Namespace, out: TextIO) -> int:
    if args.to == "dimacs":
        out.write(export_dimacs(H))
    else:
        frame = pd.DataFrame(
            incidence_matrix(H),
            index=pd.Index(range(H.n), name="vertex"),
            columns=[f"e{j}" for j in range(H.m)],
        )
        frame.to_csv(out)
    return EXIT_OK


def _read_plan(args: argparse.Namespace, stdin: TextIO) -> List[GenSpec]:
    if args.random is not None:
        return random_sweep_plan(args.random, args.n_min, args.n_max, args.seed, args.rank_max)
    text = stdin.read() if args.plan in (None, "-") else Path(args.plan).read_text()
    plan = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed plan at line {lineno}: {exc.msg}") from exc
        plan.append(GenSpec.from_dict(doc))
    return plan


def _sweep(args: argparse.Namespace, stdin: TextIO, out: TextIO, err: TextIO) -> int:
    if args.format == "parquet" and args.output is None:
        raise ValueError("--format parquet needs --output")
    plan = _read_plan(args, stdin)
    store = FileStore(args.cache_dir, backend=args.store_backend) if args.cache_dir else None
    which = [c.strip() for c in args.conjectures.split(",") if c.strip()]
    try:
        report = conjectures.sweep(
            plan, which, _budget(args), jobs=args.jobs, store=store, force=args.force
        )
    except conjectures.ConjectureViolation as violation:
        logger.error(str(violation))
        instance = violation.instance
        _dump(
            {
                "violation": violation.verdict,
                "row": violation.row,
                "instance": json.loads(serialize(instance.hypergraph, meta=instance.meta)),
            },
            out,
        )
        err.write(f"{violation}\n")
        return EXIT_VIOLATION

    if args.format == "json":
        text = report.to_json(orient="records", indent=2) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            out.write(text)
    elif args.output:
        SERIALIZERS[args.format]().dump(report, args.output)
    else:
        report.to_csv(out, index=False)
    return EXIT_OK


_VERBS = {
    "analyze": _analyze,
    "color": _color,
    "choosability": _choosability,
    "check": _check,
    "critical": _critical,
    "conditions": _conditions,
    "export": _export,
}


def run(
    argv: Optional[Sequence[str]] = None,
    stdin: TextIO = sys.stdin,
    stdout: TextIO = sys.stdout,
    stderr: TextIO = sys.stderr,
) -> int:
    """Parse ``argv``, dispatch to the verb and return the exit code."""
    parser = build_parser()
    try:
        # usage, errors and --version go to the given streams
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK

    if args.verbose:
        logging.basicConfig(
            stream=stderr,
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
        )

    try:
        if args.verb == "generate":
            return _generate(args, stdout)
        if args.verb == "sweep":
            return _sweep(args, stdin, stdout, stderr)
        H = _read_instance(args.input, stdin)
        return _VERBS[args.verb](H, args, stdout)
    except (ValueError, OSError) as exc:
        stderr.write(f"hypercolor {args.verb}: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
