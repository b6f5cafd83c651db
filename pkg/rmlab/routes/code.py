"""
Rank-metric code commands.
"""
import logging

from rmlab.models.response import FingerprintResponse
from rmlab.routes.base import OUTPUT, PARAMS, CommandResult, CommandRouter, arg, parse_params
from rmlab.services.families import CODE_FAMILIES, family_code
from rmlab.services.gf import field_for
from rmlab.services.rmcode import (
    adjoint_code,
    code_fingerprint,
    code_to_model,
    delsarte_dual,
    fingerprint_digest,
    idealiser_report,
    verify_code,
    weight_distribution,
)
from rmlab.services.serialization import load_code, save_code

logger = logging.getLogger(__name__)

router = CommandRouter(prefix="code", summary="Rank-metric codes")

CODE_FILE = arg("path", help="Code JSON file")


def _saved(code, path, what: str) -> CommandResult:
    if path:
        save_code(code, path)
        logger.info(f"Saved {what} to {path}")
    model = code_to_model(code)
    return CommandResult(report=model, text=f"{what}: {model.m}x{model.n} over F_{code.q}, dim {code.dim}")


@router.command(
    "new",
    summary="Build a code from a known family",
    arguments=[
        arg("--family", choices=CODE_FAMILIES, default="gabidulin"),
        arg("--q", type=int, required=True),
        arg("--n", type=int, required=True),
        arg("--k", type=int, default=2),
        arg("--s", type=int, default=1),
        PARAMS,
        OUTPUT,
    ],
)
def new_code(args, config) -> CommandResult:
    """
    Build a family member, e.g. ``--family twisted --param eta=2 --param h=1``
    or ``--family sporadic --param name=C3``.

    Returns:
        CommandResult carrying the CodeModel
    """
    F = field_for(args.q, args.n)
    code = family_code(F, args.family, args.k, args.s, parse_params(args.param))
    return _saved(code, args.output, args.family)


@router.command("verify", summary="Minimum distance and MRD verdict", arguments=[CODE_FILE])
def verify(args, config) -> CommandResult:
    """
    Enumerate ranks and compare |C| with the Singleton bound.

    Returns:
        CommandResult carrying a CodeReport; refuted when the code is not MRD
    """
    report = verify_code(load_code(args.path), config)
    text = f"{report.params.label()} MRD={str(report.mrd).lower()} ranks={report.ranks_computed}"
    return CommandResult(report=report, text=text, ok=report.mrd)


@router.command("weights", summary="Rank weight distribution", arguments=[CODE_FILE])
def weights(args, config) -> CommandResult:
    report = weight_distribution(load_code(args.path), config)
    return CommandResult(report=report, text=" ".join(f"A{i}={c}" for i, c in enumerate(report.counts)))


@router.command("dual", summary="Delsarte dual", arguments=[CODE_FILE, OUTPUT])
def dual(args, config) -> CommandResult:
    return _saved(delsarte_dual(load_code(args.path)), args.output, "dual")


@router.command("adjoint", summary="Adjoint (transposed) code", arguments=[CODE_FILE, OUTPUT])
def adjoint(args, config) -> CommandResult:
    return _saved(adjoint_code(load_code(args.path)), args.output, "adjoint")


@router.command("idealisers", summary="Left and right idealisers", arguments=[CODE_FILE])
def idealisers(args, config) -> CommandResult:
    report = idealiser_report(load_code(args.path), config)
    text = (f"|L|={report.left_order} field={str(report.left_is_field).lower()} "
            f"|R|={report.right_order} field={str(report.right_is_field).lower()}")
    return CommandResult(report=report, text=text)


@router.command("fingerprint", summary="Equivalence invariants and their digest", arguments=[CODE_FILE])
def fingerprint(args, config) -> CommandResult:
    """
    Parameters, weight distribution and idealiser orders. Codes with different
    digests are inequivalent.
    """
    fp = code_fingerprint(load_code(args.path), config)
    report = FingerprintResponse(**fp.model_dump(), digest=fingerprint_digest(fp))
    return CommandResult(report=report, text=f"{fp.params.label()} {report.digest}")
