"""Command-line front end.

Results go to stdout as JSON lines (or CSV / text where asked), logs go to stderr.
Output is collected first and written only when a command succeeds.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from kquant import __version__
from kquant.algebra.poly import monomials_up_to
from kquant.config import Settings, get_settings
from kquant.constants import DEFAULT_SAMPLES, DEFAULT_SEED, MAX_STAR_ORDER, ExitCode
from kquant.exceptions import KQuantError, SchemaError, UnsupportedGraphError
from kquant.graphs import (
    canonical_form,
    canonical_key,
    dedup_star_order,
    enumerate_graphs,
    group_by_class,
    key_text,
)
from kquant.polyvector import PolyVectorField
from kquant.schemas import GraphSchema, MultiDiffOpSchema, PolyVectorSchema, load_json
from kquant.star import StarProduct, WeightSource, assemble, formality_residual, verify_associativity
from kquant.suites import SLOW_SUITES, SUITES, SuiteOptions, run_suites
from kquant.tables import estimate_table, read_table, to_frame, write_table
from kquant.weights import mc_weight

logger = logging.getLogger(__name__)

WEIGHT_KINDS = {"analytic": "analytic", "mc": "monte_carlo", "table": "table"}


def _count(text: str) -> int:
    """Sample counts may be written as 1e6."""
    try:
        value = int(float(text))
    except ValueError as e:
        msg = f"{text!r} is not a count"
        raise argparse.ArgumentTypeError(msg) from e
    if value <= 0:
        msg = f"count must be positive, got {text}"
        raise argparse.ArgumentTypeError(msg)
    return value


def _degrees(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        msg = f"{text!r} is not a comma-separated list of out-degrees"
        raise argparse.ArgumentTypeError(msg) from e


def _sampling(parser: argparse.ArgumentParser):
    parser.add_argument("--samples", type=_count, default=DEFAULT_SAMPLES)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _weights(parser: argparse.ArgumentParser):
    parser.add_argument("--weights", choices=sorted(WEIGHT_KINDS), default="analytic")
    parser.add_argument("--table", type=Path, help="weight table CSV for --weights table")
    _sampling(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kquant", description="Kontsevich deformation quantization toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--threads", type=int, help="worker threads (default: KQ_THREADS)")
    commands = parser.add_subparsers(dest="command", required=True)

    graphs = commands.add_parser("graphs", help="enumerate admissible graphs")
    graphs.add_argument("--n", type=int, required=True)
    graphs.add_argument("--m", type=int, required=True)
    graphs.add_argument("--outdeg", type=_degrees, help="out-degree per aerial vertex (default 2 each)")
    graphs.add_argument("--dedup", choices=("none", "star-order", "isomorphism"), default="none")
    graphs.add_argument("--all", action="store_true", help="keep disconnected graphs")

    weights = commands.add_parser("weights", help="graph weights")
    weight_commands = weights.add_subparsers(dest="weights_command", required=True)
    estimate = weight_commands.add_parser("estimate", help="Monte-Carlo weight of one graph")
    estimate.add_argument("--graph", type=Path, required=True)
    _sampling(estimate)
    table = weight_commands.add_parser("table", help="weights of every class of G_(n,2) as CSV")
    table.add_argument("--n", type=int, required=True)
    table.add_argument("--output", type=Path, help="CSV path (default: stdout)")
    _sampling(table)

    star = commands.add_parser("star", help="star products of a Poisson bivector")
    star_commands = star.add_subparsers(dest="star_command", required=True)
    expand = star_commands.add_parser("expand", help="coefficients of the star product")
    expand.add_argument("--format", choices=("json", "text"), default="json")
    verify = star_commands.add_parser("verify", help="associativity report")
    verify.add_argument("--max-degree", type=int, default=2, help="monomial degree of the test triples")
    formality = star_commands.add_parser("formality", help="formality residual for n = 1 or 2")
    formality.add_argument("--n", type=int, choices=(1, 2), default=2)
    formality.add_argument("--second", type=Path, help="second bivector for n = 2 (default: the same)")
    formality.add_argument("--max-degree", type=int, default=2)
    for sub in (expand, verify, formality):
        sub.add_argument("--poisson", type=Path, required=True)
        sub.add_argument("--order", type=int, default=2)
        _weights(sub)

    suites = commands.add_parser("verify", help="property suites")
    suites.add_argument(
        "--suite", action="append", choices=[*SUITES, "all"], help="suite to run, repeatable (default: all)"
    )
    _sampling(suites)

    moyal = commands.add_parser("moyal", help="assembled star product against the closed Moyal form")
    moyal.add_argument("--d", type=int, required=True)
    moyal.add_argument("--order", type=int, default=MAX_STAR_ORDER)
    return parser


def _header(args: argparse.Namespace) -> str:
    return json.dumps({"kquant": __version__, "command": args.command, "seed": args.seed, "samples": args.samples})


def _source(args: argparse.Namespace, settings: Settings) -> WeightSource:
    kind = WEIGHT_KINDS[args.weights]
    table = None
    if kind == "table":
        if args.table is None:
            msg = "--weights table needs --table"
            raise ValueError(msg)
        table = read_table(args.table)
    return WeightSource(kind, args.samples, args.seed, table, settings=settings)


def cmd_graphs(args: argparse.Namespace, settings: Settings) -> tuple[ExitCode, list[str]]:
    degrees = args.outdeg if args.outdeg is not None else [2] * args.n
    graphs = enumerate_graphs(args.n, args.m, degrees, connected_only=not args.all and settings.connected_only)
    if args.dedup == "star-order":
        graphs = dedup_star_order(graphs)
    elif args.dedup == "isomorphism":
        graphs = [canonical_form(members[0])[0] for members in group_by_class(graphs).values()]
    lines = [json.dumps({"key": key_text(canonical_key(g)), **g.to_dict()}) for g in graphs]
    lines.append(json.dumps({"count": len(graphs)}))
    return ExitCode.OK, lines


def cmd_weights(args: argparse.Namespace, settings: Settings) -> tuple[ExitCode, list[str]]:
    if args.weights_command == "estimate":
        graph = load_json(args.graph, GraphSchema).to_graph()
        estimate = mc_weight(graph, args.samples, args.seed, settings=settings)
        return ExitCode.OK, [_header(args), json.dumps(estimate.to_dict())]
    table = estimate_table(args.n, args.samples, args.seed, settings=settings)
    if args.output is None:
        text = to_frame(table.values()).sort_values("key").to_csv(index=False)
        return ExitCode.OK, [text.rstrip("\n")]
    write_table(table, args.output)
    return ExitCode.OK, [_header(args), json.dumps({"classes": len(table), "path": str(args.output)})]


def _expansion(s: StarProduct) -> dict:
    return {
        "order": s.order,
        "terms": [MultiDiffOpSchema.from_operator(op).model_dump() for op in s.terms],
        "provenance": [record.to_dict() for record in s.provenance],
    }


def cmd_star(args: argparse.Namespace, settings: Settings) -> tuple[ExitCode, list[str]]:
    pi = load_json(args.poisson, PolyVectorSchema).to_field()
    source = _source(args, settings)
    if args.star_command == "formality":
        second = load_json(args.second, PolyVectorSchema).to_field() if args.second else pi
        xs = [pi] if args.n == 1 else [pi, second]
        fs = monomials_up_to(pi.dimension, args.max_degree)
        result = formality_residual(xs, fs, source, settings=settings)
        code = ExitCode.OK if result.ok else ExitCode.FAILED
        return code, [_header(args), json.dumps(dataclasses.asdict(result))]
    s = assemble(pi, args.order, source, settings=settings)
    if args.star_command == "expand":
        if args.format == "text":
            return ExitCode.OK, [s.to_text()]
        return ExitCode.OK, [_header(args), json.dumps(_expansion(s))]
    report = verify_associativity(s, args.max_degree, settings=settings)
    code = ExitCode.OK if report.associative else ExitCode.FAILED
    return code, [_header(args), json.dumps(report.to_dict())]


def cmd_verify(args: argparse.Namespace, settings: Settings) -> tuple[ExitCode, list[str]]:
    names = args.suite or ["all"]
    if "all" in names:
        names = [name for name in SUITES if name not in SLOW_SUITES]
    results = run_suites(names, SuiteOptions(args.seed, args.samples, settings))
    lines = []
    for result in results:
        for check in result.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(f"{result.suite}: {check.name}: {status} ({check.cases} cases) {check.detail}".rstrip())
    passed = all(result.passed for result in results)
    lines.append(f"{len(results)} suites {'passed' if passed else 'FAILED'}")
    return (ExitCode.OK if passed else ExitCode.FAILED), lines


def cmd_moyal(args: argparse.Namespace, settings: Settings) -> tuple[ExitCode, list[str]]:
    if args.d % 2:
        msg = f"the Moyal comparison needs an even dimension, got {args.d}"
        raise ValueError(msg)
    pi = PolyVectorField.standard_symplectic(args.d // 2)
    assembled = assemble(pi, args.order, settings=settings)
    closed = StarProduct.moyal(pi, args.order)
    discrepancy = max(((a - b).max_abs_coefficient() for a, b in zip(assembled.terms, closed.terms)), default=0.0)
    return ExitCode.OK, [json.dumps({"d": args.d, "order": args.order, "max_discrepancy": discrepancy})]


COMMANDS = {
    "graphs": cmd_graphs,
    "weights": cmd_weights,
    "star": cmd_star,
    "verify": cmd_verify,
    "moyal": cmd_moyal,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    if args.threads is not None:
        settings = settings.model_copy(update={"threads": max(args.threads, 1)})
    logging.basicConfig(level="INFO" if args.verbose else settings.log_level, stream=sys.stderr)
    try:
        code, lines = COMMANDS[args.command](args, settings)
    except FileNotFoundError:
        logger.exception("input file not found")
        return ExitCode.INVALID_INPUT
    except (json.JSONDecodeError, ValidationError, SchemaError):
        logger.exception("malformed JSON input")
        return ExitCode.MALFORMED_JSON
    except UnsupportedGraphError:
        logger.exception("unsupported request")
        return ExitCode.UNSUPPORTED
    except (KQuantError, ValueError):
        logger.exception("invalid input")
        return ExitCode.INVALID_INPUT
    for line in lines:
        print(line)
    return code
