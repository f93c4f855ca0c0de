"""
`pdbep` command line: solve, gen, certify, gap and serve.

Exit status is 0 on success, 1 when a certificate is violated and 2 on bad
input.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import InstanceParseError, PDBEPError
from app.core.events import configure_logging
from app.models.base import to_fraction
from app.models.report import CertifyConfig, CertifySummary, GeneratorSpec, RunReport
from app.services.generators import generate
from app.services.graph_core import normalize_instance, parse_instance, serialize_instance, serialize_packing
from app.services.lp import build_lp1, build_lp2, gap_demo
from app.services.runner import ALGORITHMS, certify_suite, default_config, run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InstanceParseError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}") from e


def _order(value: str) -> Optional[int]:
    """Edge order for the greedy solvers: a shuffle seed, or `natural` for id order."""
    if value == "natural":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed or 'natural', got {value!r}")


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_text(report: RunReport, packing_text: str) -> str:
    lines = [
        f"solver      {report.solver}",
        f"instance    n={report.n} m={report.m} sha256={report.digest[:16]}",
        f"value       {report.value} ({report.size} edges)",
        f"feasible    {'yes' if report.feasible else 'NO'}",
        f"bound       {report.bound} ({report.bound_kind})",
        f"ratio       {report.ratio if report.ratio is not None else 'undefined'}",
        f"guarantee   {report.guarantee}",
        f"certified   {'n/a' if report.certified is None else ('yes' if report.certified else 'NO')}",
    ]
    for name, ok in sorted(report.checks.items()):
        lines.append(f"check       {name}: {'ok' if ok else 'FAILED'}")
    lines.append(f"time        {report.wall_seconds:.3f}s")
    return "\n".join(lines) + "\n" + packing_text


def _summary_text(summary: CertifySummary) -> str:
    lines = [f"{'batch':<16}{'solver':<10}{'runs':>6}{'feasible':>10}{'oracle':>8}  worst ratio / guarantee"]
    for row in summary.rows:
        lines.append(
            f"{row.batch:<16}{row.solver:<10}{row.runs:>6}{row.feasible:>10}{row.oracle_runs:>8}"
            f"  {row.worst_ratio} / {row.guarantee}"
        )
    for row in summary.gap:
        lines.append(f"gap n={row.n:<4} lp1={row.lp1_value} ip={row.ip_opt} ratio={row.ratio}")
    for v in summary.violations:
        lines.append(f"VIOLATION {v.batch} seed={v.seed} solver={v.solver}: {v.reason}")
    lines.append("PASSED" if summary.passed else "FAILED")
    return "\n".join(lines) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    inst = normalize_instance(parse_instance(_read(args.input)))
    if args.dump_lp:
        lp = build_lp2(inst, (), inst.c, args.eps or settings.default_eps) if args.alg == "round" else build_lp1(inst)
        Path(args.dump_lp).write_text(lp.to_lp_text(), encoding="utf-8")
        logger.info(f"wrote {lp.name} to {args.dump_lp}")

    report = run(
        inst,
        args.alg,
        eps=args.eps,
        order=args.order,
        root=args.root,
        relabel_seed=args.relabel_seed,
        oracle_limit=args.oracle_limit,
        trace=args.trace,
    )
    if args.format == "json":
        _emit(report.model_dump_json(indent=2) + "\n", args.output)
    else:
        _emit(_report_text(report, serialize_packing(inst, report.packing)), args.output)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        family=args.family,
        n=args.n,
        m=args.m,
        bound=args.bound,
        bound_value=args.bound_value,
        bound_fraction=args.bound_fraction,
        weights=args.weights,
        weight_low=args.weight_low,
        weight_high=args.weight_high,
        seed=args.seed,
        multigraph=args.multigraph,
    )
    _emit(serialize_instance(generate(spec)), args.output)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    if args.config:
        config = CertifyConfig.model_validate_json(_read(args.config))
    else:
        config = default_config(quick=args.quick)
    summary = certify_suite(config, workers=args.workers)
    if args.format == "json":
        _emit(summary.model_dump_json(indent=2) + "\n", args.output)
    else:
        _emit(_summary_text(summary), args.output)
    return EXIT_OK if summary.passed else EXIT_VIOLATION


def cmd_gap(args: argparse.Namespace) -> int:
    rows = [gap_demo(n, oracle_limit=args.oracle_limit) for n in args.n]
    if args.format == "json":
        _emit(json.dumps([row.model_dump(mode="json") for row in rows], indent=2) + "\n", args.output)
    else:
        text = "".join(
            f"n={row.n:<4} lp1={row.lp1_value} ip={row.ip_opt} ({'oracle' if row.ip_exact else 'bound'}) "
            f"ratio={row.ratio}\n"
            for row in rows
        )
        _emit(text, args.output)
    increasing = all(b.ratio > a.ratio for a, b in zip(rows, rows[1:]))
    if not increasing:
        logger.error("lp1 gap ratio is not increasing in n")
    return EXIT_OK if increasing else EXIT_VIOLATION


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, log_level=args.log_level.lower())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdbep", description="Partial degree bounded edge packing solvers")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="logging level (default from settings)")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one instance and certify the result")
    solve.add_argument("--input", required=True, help="instance file, or - for stdin")
    solve.add_argument("--alg", choices=ALGORITHMS + ("auto",), default="auto")
    solve.add_argument("--eps", type=to_fraction, default=None, help="rounding penalty, e.g. 1/100")
    solve.add_argument("--order", type=_order, default=None, help="seed for a random edge order, or natural")
    solve.add_argument("--root", type=int, default=None, help="root vertex for the tree solver")
    solve.add_argument("--relabel-seed", type=int, default=None, help="seeded vertex relabeling for 'weighted'")
    solve.add_argument("--oracle-limit", type=int, default=None)
    solve.add_argument("--trace", default=None, help="write the rounding log as JSON lines")
    solve.add_argument("--dump-lp", default=None, help="write the root relaxation in LP format")
    solve.add_argument("--format", choices=("json", "text"), default="json")
    solve.add_argument("--output", default=None)
    solve.set_defaults(handler=cmd_solve)

    gen = sub.add_parser("gen", help="generate a seeded instance")
    gen.add_argument("--family", choices=("gnm", "tree", "complete", "star", "path"), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--bound", choices=("fixed", "uniform", "fraction"), default="fixed")
    gen.add_argument("--bound-value", type=int, default=1)
    gen.add_argument("--bound-fraction", type=to_fraction, default="1/2")
    gen.add_argument("--weights", choices=("none", "uniform"), default="none")
    gen.add_argument("--weight-low", type=int, default=1)
    gen.add_argument("--weight-high", type=int, default=100)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--multigraph", action="store_true")
    gen.add_argument("--output", default=None)
    gen.set_defaults(handler=cmd_gen)

    certify = sub.add_parser("certify", help="run the seeded certification batches")
    certify.add_argument("--config", default=None, help="JSON batch configuration (default: built-in suite)")
    certify.add_argument("--quick", action="store_true", help="shrink the built-in suite")
    certify.add_argument("--workers", type=int, default=None)
    certify.add_argument("--format", choices=("json", "text"), default="text")
    certify.add_argument("--output", default=None)
    certify.set_defaults(handler=cmd_certify)

    gap = sub.add_parser("gap", help="natural relaxation against the integer optimum on K_n")
    gap.add_argument("--n", type=int, nargs="+", default=[8, 12, 16, 24])
    gap.add_argument("--oracle-limit", type=int, default=None)
    gap.add_argument("--format", choices=("json", "text"), default="text")
    gap.add_argument("--output", default=None)
    gap.set_defaults(handler=cmd_gap)

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except PDBEPError as e:
        logger.error(f"{args.command}: {e}")
        return e.exit_code
    except ValidationError as e:
        logger.error(f"{args.command}: invalid input: {e}")
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_INPUT
