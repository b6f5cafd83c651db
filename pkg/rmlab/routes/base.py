"""
A small APIRouter-style registry for argparse subcommands.
"""
import argparse
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Tuple

from pydantic import BaseModel

from rmlab.errors import ParameterError
from rmlab.models.schemas import RunConfig

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2


@dataclass
class CommandResult:
    """What a handler returns: a report model, a one-line text rendering and a verdict."""

    report: BaseModel
    text: str = ""
    ok: bool = True

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.ok else EXIT_REFUTED


Handler = Callable[[argparse.Namespace, RunConfig], CommandResult]


def arg(*flags: str, **kwargs: Any) -> Tuple[Tuple[str, ...], dict]:
    """Declare an argparse argument for ``CommandRouter.command``."""
    return flags, kwargs


@dataclass
class _Command:
    name: str
    handler: Handler
    summary: str
    arguments: List[Tuple[Tuple[str, ...], dict]] = field(default_factory=list)


class CommandRouter:
    """Groups commands under a prefix, like ``APIRouter(prefix=..., tags=...)``."""

    def __init__(self, prefix: str, summary: str = ""):
        self.prefix = prefix
        self.summary = summary
        self.commands: List[_Command] = []

    def command(self, name: str, summary: str, arguments: Optional[List[tuple]] = None):
        def decorator(handler: Handler) -> Handler:
            self.commands.append(_Command(name, handler, summary, list(arguments or [])))
            return handler

        return decorator

    def mount(self, subparsers) -> None:
        group = subparsers.add_parser(self.prefix, help=self.summary, description=self.summary)
        if len(self.commands) == 1 and self.commands[0].name == "":
            # a root command takes its arguments directly after the prefix
            self._configure(group, self.commands[0])
            return
        commands = group.add_subparsers(dest="command", metavar="COMMAND")
        commands.required = True
        for cmd in self.commands:
            self._configure(commands.add_parser(cmd.name, help=cmd.summary, description=cmd.handler.__doc__), cmd)

    @staticmethod
    def _configure(parser, cmd: _Command) -> None:
        for flags, kwargs in cmd.arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(handler=cmd.handler)


def parse_params(pairs: Optional[List[str]]) -> dict:
    """``["delta=2", "name=C3"]`` -> {"delta": 2, "name": "C3"}."""
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ParameterError(f"parameter {pair!r} is not of the form key=value")
        params[key] = int(value) if value.lstrip("-").isdigit() else value
    return params


OUTPUT = arg("-o", "--output", default=None, help="Write the JSON result to this file instead of stdout")
PARAMS = arg("--param", action="append", metavar="KEY=VALUE", help="Family parameter (repeatable)")
