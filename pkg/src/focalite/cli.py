"""Command-line front end: ``focalite check|eval|deps|fmt|serve``.

Reports go to standard output and diagnostics to standard error. The exit code
is 0 for a clean run, 1 for check failures and 2 for usage or I/O errors.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Iterable, Sequence

from pydantic import ValidationError

from focalite._diagnostics.messages import Diagnostic, sanitize_validation_errors
from focalite.evaluator.budget import DEFAULT_FUEL, EvalBudget
from focalite.evaluator.values import format_value
from focalite.exceptions import FocaliteError, SourceReadError
from focalite.prover.budget import (
    DEFAULT_GAMMA_DEPTH,
    DEFAULT_MAX_BRANCH_NODES,
    DEFAULT_TIMEOUT_MS,
    SearchBudget,
)
from focalite.session import (
    CheckOptions,
    check_workspace,
    dependency_edges,
    evaluate_expression,
    format_source,
    load,
    read_sources,
    render_dependencies,
)
from focalite.service import serve

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8000

type Command = Callable[[argparse.Namespace], int]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--json",
        action="store_true",
        help="print diagnostics as one JSON object per line",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress on standard error (-vv for prover statistics)",
    )


def _add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma-depth", type=int, default=DEFAULT_GAMMA_DEPTH)
    parser.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_BRANCH_NODES)
    parser.add_argument("--timeout-ms", type=int, default=DEFAULT_TIMEOUT_MS)
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for obligations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focalite",
        description="Check, prove and run species written in a FoCaLiZe fragment.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="typecheck and prove every theorem")
    check.add_argument("paths", nargs="+", help="source files or corpus directories")
    _add_budget(check)
    check.add_argument(
        "--no-times",
        action="store_true",
        help="print 0 instead of elapsed milliseconds",
    )
    _add_common(check)
    check.set_defaults(handler=cmd_check)

    evaluate = commands.add_parser("eval", help="evaluate an expression in a collection")
    evaluate.add_argument(
        "paths",
        nargs="+",
        metavar="PATH",
        help="source files or corpus directories, then the expression to evaluate",
    )
    evaluate.add_argument("--collection", required=True)
    evaluate.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    _add_common(evaluate)
    evaluate.set_defaults(handler=cmd_eval)

    deps = commands.add_parser("deps", help="print def/decl dependencies of every proof")
    deps.add_argument("paths", nargs="+")
    _add_common(deps)
    deps.set_defaults(handler=cmd_deps)

    fmt = commands.add_parser("fmt", help="pretty-print source files")
    fmt.add_argument("paths", nargs="+")
    fmt.add_argument(
        "--check",
        action="store_true",
        help="exit 1 when a file is not in canonical form",
    )
    _add_common(fmt)
    fmt.set_defaults(handler=cmd_fmt)

    server = commands.add_parser("serve", help="serve the checker over HTTP")
    server.add_argument("--host", default=DEFAULT_HOST)
    server.add_argument("--port", type=int, default=DEFAULT_PORT)
    _add_budget(server)
    _add_common(server)
    server.set_defaults(handler=cmd_serve)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _emit(diagnostics: Iterable[Diagnostic], *, as_json: bool) -> None:
    for diagnostic in diagnostics:
        sys.stderr.write(f"{diagnostic.render() if as_json else diagnostic.render_text()}\n")


def _options(args: argparse.Namespace, *, timings: bool = True) -> CheckOptions:
    budget = SearchBudget(
        gamma_depth=args.gamma_depth,
        max_branch_nodes=args.max_nodes,
        timeout_ms=args.timeout_ms,
    )
    return CheckOptions(budget=budget, jobs=args.jobs, timings=timings)


def cmd_check(args: argparse.Namespace) -> int:
    options = _options(args, timings=not args.no_times)
    report = check_workspace(load(read_sources(args.paths)), options)
    sys.stdout.write(report.render(timings=options.timings))
    _emit(report.all_diagnostics(), as_json=args.json)
    LOGGER.info(
        "Checked %d statements",
        len(report.statements),
        extra={"extra": {"ok": report.ok}},
    )
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_eval(args: argparse.Namespace) -> int:
    budget = EvalBudget(fuel=args.fuel)
    workspace = load(read_sources(args.paths))
    _emit(workspace.diagnostics, as_json=args.json)
    if not workspace.ok:
        return EXIT_FAILURE
    try:
        value = evaluate_expression(workspace, args.collection, args.expression, budget)
    except FocaliteError as error:
        _emit([Diagnostic.from_error(error.error, file="<expression>")], as_json=args.json)
        return EXIT_FAILURE
    sys.stdout.write(f"{format_value(value)}\n")
    return EXIT_OK


def cmd_deps(args: argparse.Namespace) -> int:
    workspace = load(read_sources(args.paths))
    sys.stdout.write(render_dependencies(dependency_edges(workspace)))
    _emit(workspace.diagnostics, as_json=args.json)
    return EXIT_OK if workspace.ok else EXIT_FAILURE


def cmd_fmt(args: argparse.Namespace) -> int:
    status = EXIT_OK
    for source in read_sources(args.paths):
        try:
            formatted = format_source(source)
        except FocaliteError as error:
            _emit([Diagnostic.from_error(error.error, file=source.name)], as_json=args.json)
            status = EXIT_FAILURE
            continue
        if args.check:
            if formatted != source.text:
                sys.stderr.write(f"{source.name}: not in canonical form\n")
                status = EXIT_FAILURE
            continue
        sys.stdout.write(formatted)
    return status


def cmd_serve(args: argparse.Namespace) -> int:
    serve(args.host, args.port, _options(args, timings=False))
    return EXIT_OK


def _split_eval_words(
    parser: argparse.ArgumentParser,
    args: argparse.Namespace,
    extras: list[str],
) -> None:
    """The expression is the last word, whether it comes before or after the options."""
    if any(word.startswith("--") for word in extras):
        parser.error(f"unrecognized arguments: {' '.join(extras)}")
    words = [*args.paths, *extras]
    if len(words) == 1:
        parser.error("eval needs at least one path and an expression")
    args.paths, args.expression = words[:-1], words[-1]


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    if args.command == "eval":
        _split_eval_words(parser, args, extras)
    elif extras:
        parser.error(f"unrecognized arguments: {' '.join(extras)}")
    _configure_logging(args.verbose)
    handler: Command = args.handler
    try:
        return handler(args)
    except SourceReadError as error:
        _emit([Diagnostic.from_error(error.error)], as_json=args.json)
        return EXIT_USAGE
    except ValidationError as error:
        sys.stderr.write(f"{json.dumps(sanitize_validation_errors(error))}\n")
        return EXIT_USAGE
