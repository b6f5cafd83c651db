"""
Subspace and linear set commands.
"""
import logging

from rmlab.models.response import ScatteredCountReport, SpectrumReport
from rmlab.routes.base import OUTPUT, PARAMS, CommandResult, CommandRouter, arg, parse_params
from rmlab.services.linalg import gaussian_binomial
from rmlab.services.linset import h_scattered_report, hyperplane_weights, linear_set_summary, subspace_to_model, weight_spectrum
from rmlab.services.scattered import FAMILIES, scattered_family
from rmlab.services.search import count_scattered, gl_class, max_scattered_rank_search, zgl_report
from rmlab.services.serialization import load_subspace, save_subspace

logger = logging.getLogger(__name__)

router = CommandRouter(prefix="subspace", summary="F_q-subspaces of F_{q^n}^r and their linear sets")

SUBSPACE_FILE = arg("path", help="Subspace JSON file")


@router.command(
    "new",
    summary="Build a subspace from a known family",
    arguments=[
        arg("--family", choices=FAMILIES, default="U1"),
        arg("--q", type=int, required=True),
        arg("--n", type=int, required=True),
        arg("--r", type=int, default=2),
        PARAMS,
        OUTPUT,
    ],
)
def new_subspace(args, config) -> CommandResult:
    """
    Build a family member, e.g. ``--family U2 --param delta=2 --param s=1``.
    Field parameters left out are searched for.

    Returns:
        CommandResult carrying the SubspaceModel
    """
    U = scattered_family(args.family, args.q, args.n, args.r, parse_params(args.param), config)
    if args.output:
        save_subspace(U, args.output)
        logger.info(f"Saved {U!r} to {args.output}")
    return CommandResult(report=subspace_to_model(U), text=f"{args.family}: {U!r}")


@router.command("check", summary="Rank, |L_U|, scatteredness and weight spectrum", arguments=[SUBSPACE_FILE])
def check(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying a LinearSetSummary; refuted when U is not scattered
    """
    summary = linear_set_summary(load_subspace(args.path), config)
    spectrum = ", ".join(f"{w}:{c}" for w, c in sorted(summary.spectrum.items()))
    text = f"rank={summary.rank} |L_U|={summary.size} scattered={str(summary.scattered).lower()} spectrum={{{spectrum}}}"
    return CommandResult(report=summary, text=text, ok=summary.scattered)


@router.command(
    "weights",
    summary="Weight spectrum of the points (or hyperplanes) of L_U",
    arguments=[SUBSPACE_FILE, arg("--hyperplanes", action="store_true", help="Weights of hyperplanes instead of points")],
)
def weights(args, config) -> CommandResult:
    U = load_subspace(args.path)
    if args.hyperplanes:
        report = SpectrumReport(over="hyperplanes", spectrum=hyperplane_weights(U, config))
    else:
        report = SpectrumReport(over="points", spectrum=weight_spectrum(U, config))
    spectrum = ", ".join(f"{w}:{c}" for w, c in sorted(report.spectrum.items()))
    return CommandResult(report=report, text=f"{report.over} {{{spectrum}}}")


@router.command(
    "count",
    summary="Number of scattered subspaces of a given rank",
    arguments=[
        arg("--r", type=int, required=True),
        arg("--n", type=int, required=True),
        arg("--q", type=int, required=True),
        arg("--k", type=int, required=True, help="Rank over F_q"),
    ],
)
def count(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying a ScatteredCountReport
    """
    scattered = count_scattered(args.r, args.n, args.q, args.k, config)
    total = gaussian_binomial(args.r * args.n, args.k, args.q)
    report = ScatteredCountReport(r=args.r, n=args.n, q=args.q, k=args.k, scattered=scattered, total=total)
    return CommandResult(report=report, text=f"{scattered} of {total} rank-{args.k} subspaces are scattered")


@router.command(
    "search-max",
    summary="Largest scattered rank by exhaustive search",
    arguments=[
        arg("--r", type=int, required=True),
        arg("--n", type=int, required=True),
        arg("--q", type=int, required=True),
    ],
)
def search_max(args, config) -> CommandResult:
    """
    Refutes every rank above the answer by checking all subspaces of that rank.

    Returns:
        CommandResult carrying a MaxScatteredReport
    """
    report = max_scattered_rank_search(args.r, args.n, args.q, config)
    refuted = ", ".join(f"{k}:{c}" for k, c in sorted(report.refuted.items()))
    text = f"max scattered rank {report.max_rank} (bound {report.bound}); refuted {{{refuted}}}"
    return CommandResult(report=report, text=text, ok=report.max_rank == report.bound)


@router.command(
    "zgl-class",
    summary="Z(GammaL)-class (and optionally GammaL-class) of L_U in PG(1, q^n)",
    arguments=[SUBSPACE_FILE, arg("--gl", action="store_true", help="Also merge classes under GammaL(2, q^n)")],
)
def zgl_class(args, config) -> CommandResult:
    U = load_subspace(args.path)
    report = gl_class(U, config) if args.gl else zgl_report(U, config)
    text = f"|L_U|={report.linear_set_size} matching={report.matching} Z(GammaL)-class={report.zgl_class}"
    if report.gl_class is not None:
        text += f" GammaL-class={report.gl_class}"
    return CommandResult(report=report, text=text)


@router.command(
    "h-scattered",
    summary="Check whether U is h-scattered",
    arguments=[SUBSPACE_FILE, arg("--h", type=int, required=True)],
)
def h_scattered(args, config) -> CommandResult:
    """
    Returns:
        CommandResult carrying an HScatteredReport; refuted when U is not h-scattered
    """
    report = h_scattered_report(load_subspace(args.path), args.h, config)
    text = (f"h={report.h} h-scattered={str(report.h_scattered).lower()} "
            f"max weight={report.max_weight} spans={str(report.spans).lower()}")
    return CommandResult(report=report, text=text, ok=report.h_scattered)
