"""
Main command-line entry point.
"""
import argparse
import logging
import sys
from typing import List, Optional

from rmlab.config import settings
from rmlab.errors import BudgetExceededError
from rmlab.models.response import ErrorResponse
from rmlab.models.schemas import RunConfig
from rmlab.routes import accept, bridge, code, field, subspace
from rmlab.routes.base import EXIT_ERROR, CommandResult

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)

logger = logging.getLogger(__name__)

ROUTERS = [field.router, code.router, subspace.router, bridge.router, accept.router]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=settings.APP_TITLE, description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--budget", type=int, default=None, help="Max rank computations per enumeration")
    parser.add_argument("--vector-budget", type=int, default=None, help="Max vectors, subspaces or group elements")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads for enumerations")
    parser.add_argument("--format", choices=["text", "json"], default=None, help="Output format")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only")

    subparsers = parser.add_subparsers(dest="group", metavar="GROUP")
    subparsers.required = True
    for router in ROUTERS:
        router.mount(subparsers)
    return parser


def _emit(result: CommandResult, config: RunConfig) -> None:
    if config.format == "json" or not result.text:
        print(result.report.model_dump_json(indent=2))
    else:
        print(result.text)


def _fail(error: ErrorResponse, config: Optional[RunConfig]) -> int:
    if config is not None and config.format == "json":
        print(error.model_dump_json(indent=2), file=sys.stderr)
    else:
        print(f"error: {error.error}" + (f" ({error.detail})" if error.detail else ""), file=sys.stderr)
    return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map its outcome onto an exit code.

    Returns:
        0 when the claim is verified, 1 when it is refuted, 2 on usage,
        budget or input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    config = None
    try:
        config = RunConfig.from_settings(
            budget=args.budget,
            vector_budget=args.vector_budget,
            workers=args.workers,
            format=args.format,
        )
        logger.debug(f"{settings.APP_TITLE} v{settings.APP_VERSION}: {args.group} {getattr(args, 'command', '')}")
        result = args.handler(args, config)
        _emit(result, config)
        return result.exit_code
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {str(e)}")
        return _fail(ErrorResponse(error="budget exceeded", detail=str(e)), config)
    except ValueError as e:
        logger.error(f"Invalid input: {str(e)}")
        return _fail(ErrorResponse(error="invalid input", detail=str(e)), config)
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        return _fail(ErrorResponse(error="internal error", detail=str(e)), config)


def run() -> None:
    """Console script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
