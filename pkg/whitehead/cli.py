"""
Command-line interface.

    python -m whitehead poset GRAPH [--format json|dot]
    python -m whitehead betti GRAPH
    python -m whitehead e1 GRAPH [--format csv|json] [--homology]
    python -m whitehead ring GRAPH
    python -m whitehead presentation GRAPH [--format text|json]
    python -m whitehead check GRAPH [--suite NAME ...]

GRAPH is a file path or "-" for stdin. Exit codes: 0 success, 1 failed
check, 2 parse or domain error, 3 resource cap exceeded.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from whitehead import __version__
from whitehead.algebra.homology import e1_csv
from whitehead.core.config import settings
from whitehead.core.errors import GraphParseError, WhiteheadError
from whitehead.core.logging import configure_logging
from whitehead.domain.graph import Graph, parse_graph
from whitehead.models.responses import E1Report, ErrorResponse
from whitehead.services.analysis_service import AnalysisService
from whitehead.services.cache_service import CacheService, select_backend
from whitehead.services.check_service import SUITES, CheckService

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, Graph, AnalysisService], Tuple[str, int]]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("graph", help='Graph file (edge list or JSON), or "-" for stdin')
    common.add_argument("--cap", type=int, default=None, help=f"Poset element cap (default {settings.poset_cap})")
    common.add_argument("--cache", metavar="DIR", default=None, help="Cache posets in this directory")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized property tests")
    common.add_argument("--out", metavar="PATH", default=None, help="Write output here instead of stdout")
    common.add_argument("--log-level", default=None, help=f"Logging level (default {settings.log_level})")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="whitehead",
        description="Whitehead posets and cohomology of pure symmetric automorphisms of RAAGs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    poset = commands.add_parser("poset", parents=[common], help="Enumerate and serialize the poset")
    poset.add_argument("--format", choices=["json", "dot"], default="json")

    betti = commands.add_parser("betti", parents=[common], help="Betti numbers of ΣPOut and ΣPAut")
    betti.add_argument("--format", choices=["json"], default="json")

    e1 = commands.add_parser("e1", parents=[common], help="E¹ dimension table")
    e1.add_argument("--format", choices=["csv", "json"], default="csv")
    e1.add_argument("--homology", action="store_true", help="Reduce every row and check concentration")

    ring = commands.add_parser("ring", parents=[common], help="Degree-2 ring bases and the map φ")
    ring.add_argument("--format", choices=["json"], default="json")

    pres = commands.add_parser("presentation", parents=[common], help="Export the presentation")
    pres.add_argument("--format", choices=["text", "json"], default="text")

    check = commands.add_parser("check", parents=[common], help="Run property suites")
    check.add_argument("--format", choices=["json"], default="json")
    check.add_argument(
        "--suite", action="append", choices=sorted(SUITES), default=None,
        help="Suite to run (repeatable; default all)",
    )
    return parser


def read_graph(source: str) -> Graph:
    """
    Load a graph from a path or stdin.

    Raises:
        GraphParseError: If the file is unreadable or malformed
    """
    if source == "-":
        try:
            return parse_graph(sys.stdin.read())
        except UnicodeDecodeError:
            raise GraphParseError("stdin is not UTF-8 text") from None
    try:
        text = Path(source).read_bytes().decode("utf-8")
    except OSError as exc:
        raise GraphParseError(f"cannot read {source}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        line = exc.object.count(b"\n", 0, exc.start) + 1
        raise GraphParseError(f"{source} is not UTF-8 text", line) from None
    return parse_graph(text)


def _poset(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    poset, cached = service.load_poset(graph, cap=args.cap, jobs=args.jobs)
    logger.info(
        "Poset: %d elements, rank histogram %s%s",
        len(poset), poset.rank_histogram, " (cached)" if cached else "",
    )
    if args.format == "dot":
        return poset.to_dot(), 0
    return poset.to_document().model_dump_json(indent=2) + "\n", 0


def _betti(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    report = service.report(graph, cap=args.cap, jobs=args.jobs)
    logger.info("ΣPOut %s, ΣPAut %s", report.betti_psout, report.betti_psaut)
    return report.model_dump_json(by_alias=True, indent=2) + "\n", 0


def _e1(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    table, rows = service.e1(graph, with_homology=args.homology, cap=args.cap, jobs=args.jobs)
    report = E1Report(dimensions=table, rows=rows)
    code = 0
    if args.homology:
        logger.info("E¹ rows concentrated in degree 0: %s", report.concentrated)
        code = 0 if report.concentrated else 1
    if args.format == "json":
        return report.model_dump_json(indent=2) + "\n", code
    return e1_csv(table), code


def _ring(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    census = service.ring(graph, cap=args.cap, jobs=args.jobs)
    ok = census.phi.ok and census.b2_size == census.expected
    logger.info("|B₁| = %d, |B₂| = %d, φ ok: %s", census.b1_size, census.b2_size, ok)
    return census.model_dump_json(indent=2) + "\n", 0 if ok else 1


def _presentation(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    pres = service.presentation(graph)
    logger.info("Presentation: %d generators, relations %s", len(pres.generators), pres.census())
    if args.format == "json":
        return pres.to_document().model_dump_json(indent=2) + "\n", 0
    return pres.to_text(), 0


def _check(args: argparse.Namespace, graph: Graph, service: AnalysisService) -> Tuple[str, int]:
    report = CheckService(service).run(
        graph, suites=args.suite, seed=args.seed, cap=args.cap, jobs=args.jobs
    )
    failed = [result.name for result in report.results if not result.passed]
    logger.info("%d suites, %d failed %s", len(report.results), len(failed), failed or "")
    return report.model_dump_json(by_alias=True, indent=2) + "\n", 0 if report.passed else 1


COMMANDS: Dict[str, Handler] = {
    "poset": _poset,
    "betti": _betti,
    "e1": _e1,
    "ring": _ring,
    "presentation": _presentation,
    "check": _check,
}


def _fail(response: ErrorResponse, code: int) -> int:
    sys.stderr.write(response.model_dump_json() + "\n")
    return code


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and emit its output.

    Returns:
        Process exit code
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.log_level)

    try:
        service = AnalysisService(CacheService(select_backend(args.cache)))
        graph = read_graph(args.graph)
        text, code = COMMANDS[args.command](args, graph, service)
    except WhiteheadError as exc:
        logger.error("%s: %s", exc.error, exc.message)
        return _fail(exc.to_response(), exc.exit_code)
    except ValidationError as exc:
        # a report whose cross-checks disagree
        first = exc.errors()[0]
        return _fail(
            ErrorResponse(error="ReportConsistencyError", message=str(first["msg"]), detail=None), 1
        )

    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
