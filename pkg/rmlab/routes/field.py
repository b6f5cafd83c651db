"""
Field commands.
"""
import logging

from rmlab.errors import ParameterError
from rmlab.models.response import FieldInfo
from rmlab.routes.base import OUTPUT, CommandResult, CommandRouter, arg
from rmlab.services.gf import Field, field_for
from rmlab.services.linpoly import LinPoly, poly_from_matrix, poly_report
from rmlab.services.serialization import load_field, save_field

logger = logging.getLogger(__name__)

router = CommandRouter(prefix="field", summary="Finite fields F_{q^n}")


def field_info(F: Field) -> FieldInfo:
    return FieldInfo(p=F.p, h=F.h, n=F.n, q=F.q, order=F.order, modulus=F.modulus, primitive=int(F.primitive))


def _describe(info: FieldInfo) -> str:
    return f"F_{info.q}^{info.n} (order {info.order}) modulus={info.modulus} primitive={info.primitive}"


@router.command(
    "new",
    summary="Create a field description",
    arguments=[
        arg("--q", type=int, required=True, help="Prime power q"),
        arg("--n", type=int, required=True, help="Extension degree"),
        arg("--modulus", default=None, help="Comma-separated ascending coefficients over F_p"),
        OUTPUT,
    ],
)
def new_field(args, config) -> CommandResult:
    """
    Build F_{q^n}, with the packaged default modulus unless one is given.

    Returns:
        CommandResult carrying the FieldSpec
    """
    modulus = [int(c) for c in args.modulus.split(",")] if args.modulus else None
    F = field_for(args.q, args.n, modulus)
    if args.output:
        save_field(F, args.output)
        logger.info(f"Saved {F!r} to {args.output}")
    return CommandResult(report=F.spec, text=_describe(field_info(F)))


@router.command(
    "info",
    summary="Describe a saved field",
    arguments=[arg("path", help="Field JSON file")],
)
def info(args, config) -> CommandResult:
    """
    Print order, modulus and a primitive element of a saved field.

    Returns:
        CommandResult carrying a FieldInfo
    """
    report = field_info(load_field(args.path))
    return CommandResult(report=report, text=_describe(report))


@router.command(
    "poly",
    summary="Rank, kernel and matrix of a q-polynomial (or the q-polynomial of a matrix)",
    arguments=[
        arg("--q", type=int, required=True),
        arg("--n", type=int, required=True),
        arg("--f", default=None, help='q-polynomial, e.g. "x^q + x"'),
        arg("--matrix", default=None, help='Rows of F_q element codes, e.g. "1,0;0,1"'),
    ],
)
def poly(args, config) -> CommandResult:
    """
    Matrices are taken in the field's F_q-basis, columns being the images of the basis.

    Returns:
        CommandResult carrying a PolyReport
    """
    if (args.f is None) == (args.matrix is None):
        raise ParameterError("give exactly one of --f and --matrix")
    F = field_for(args.q, args.n)
    if args.f is not None:
        f = LinPoly.parse(F, args.f)
    else:
        try:
            rows = [[int(c) for c in row.split(",")] for row in args.matrix.split(";")]
        except ValueError:
            raise ParameterError(f"malformed matrix {args.matrix!r}")
        f = poly_from_matrix(F, rows)
    report = poly_report(f)
    return CommandResult(report=report, text=f"{report.poly}: rank {report.rank}, kernel dim {report.kernel_dim}")
