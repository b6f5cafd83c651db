"""
Commands for the correspondence between scattered subspaces and MRD codes.
"""
import logging

from rmlab.errors import ParameterError
from rmlab.models.response import CorrespondenceReport
from rmlab.routes.base import OUTPUT, PARAMS, CommandResult, CommandRouter, arg, parse_params
from rmlab.services.bridge import (
    code_from_subspace,
    code_to_subspace_report,
    converse_projection,
    roundtrip,
    verify_sheekey,
    worked_example_binomial,
    worked_example_report,
)
from rmlab.services.gf import field_for
from rmlab.services.linpoly import LinPoly
from rmlab.services.rmcode import as_matrix_code, code_to_model
from rmlab.services.scattered import graph_map
from rmlab.services.serialization import load_code, load_subspace, save_code, save_subspace

logger = logging.getLogger(__name__)

router = CommandRouter(prefix="bridge", summary="Scattered subspaces <-> MRD codes")


def _line(report: CorrespondenceReport) -> str:
    label = report.params.label() if report.params else "?"
    text = (f"{report.direction} {label} scattered={str(report.scattered).lower()} "
            f"MRD={str(report.mrd).lower()}")
    if report.round_trip_equal:
        text += " round-trip=equal"
    return text + (f" ({report.detail})" if report.detail else "")


@router.command("to-code", summary="C_{U,G} from a subspace of rank rn/2", arguments=[arg("path"), OUTPUT])
def to_code(args, config) -> CommandResult:
    """
    Build the code of a subspace U with the canonical projection G (kernel U).

    Returns:
        CommandResult carrying the CodeModel
    """
    U = load_subspace(args.path)
    code = code_from_subspace(U, config=config)
    if args.output:
        save_code(code, args.output)
        logger.info(f"Saved C_(U,G) to {args.output}")
    return CommandResult(report=code_to_model(code), text=f"C_(U,G): {code.m}x{code.n}, dim {code.dim}")


@router.command("from-code", summary="Recover a subspace from a right F_{q^n}-linear code", arguments=[arg("path"), OUTPUT])
def from_code(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying a CorrespondenceReport; refuted when the verdicts disagree
    """
    code = as_matrix_code(load_code(args.path))
    U, G = converse_projection(code, config)
    report = code_to_subspace_report(code, config, (U, G))
    if args.output:
        save_subspace(U, args.output)
        logger.info(f"Saved recovered subspace to {args.output}")
    return CommandResult(report=report, text=_line(report), ok=report.agree)


@router.command(
    "verify-sheekey",
    summary="U_f scattered iff C_f MRD, computed independently",
    arguments=[
        arg("--f", default=None, help='q-polynomial, e.g. "x^q" or "2*x^q + x^q^3"'),
        arg("--family", default=None, help="Graph family U1..U5 instead of --f"),
        arg("--q", type=int, required=True),
        arg("--n", type=int, required=True),
        PARAMS,
    ],
)
def sheekey(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying a CorrespondenceReport; refuted when the verdicts disagree
    """
    if (args.f is None) == (args.family is None):
        raise ParameterError("give exactly one of --f and --family")
    F = field_for(args.q, args.n)
    f = LinPoly.parse(F, args.f) if args.f else graph_map(F, args.family, parse_params(args.param))
    report = verify_sheekey(f, config)
    return CommandResult(report=report, text=_line(report), ok=report.agree)


@router.command(
    "roundtrip",
    summary="U -> C_{U,G} -> U' -> C_{U',G'} and G-independence",
    arguments=[arg("path"), arg("--seed", type=int, default=1, help="Seed of the second projection")],
)
def round_trip(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying a CorrespondenceReport; refuted when the verdicts
        disagree or a scattered subspace does not survive the round trip
    """
    report = roundtrip(load_subspace(args.path), config, args.seed)
    ok = report.agree and (report.round_trip_equal or not report.scattered)
    return CommandResult(report=report, text=_line(report), ok=ok)


@router.command(
    "worked-example",
    summary="The binomial example over F_{q^{2rt}} with its explicit F_v formula",
    arguments=[
        arg("--q", type=int, required=True),
        arg("--t", type=int, required=True),
        arg("--r", type=int, default=3),
        arg("--i", type=int, default=None, help="Frobenius exponent (default r)"),
        arg("--a", type=int, default=None, help="Coefficient code (searched for when omitted)"),
    ],
)
def worked_example(args, config) -> CommandResult:
    i = args.r if args.i is None else args.i
    example = worked_example_binomial(args.q, args.t, args.r, i, args.a, config)
    report = worked_example_report(example, config)
    return CommandResult(report=report, text=_line(report), ok=report.agree)
