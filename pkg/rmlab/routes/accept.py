"""
Acceptance suite command.
"""
from rmlab.routes.base import CommandResult, CommandRouter, arg
from rmlab.services.acceptance import run_acceptance

router = CommandRouter(prefix="accept", summary="Run an acceptance suite")


@router.command("", summary="Run a suite by name", arguments=[arg("suite", help="quick, full or any fixture name")])
def run(args, config) -> CommandResult:
    """
    Run every criterion of the suite; one pass/fail line per criterion with timings.

    Returns:
        CommandResult carrying an AcceptanceReport; refuted when any criterion fails
    """
    report = run_acceptance(args.suite, config)
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] {r.id:>3} {r.title} ({r.seconds:.1f}s) {r.detail}"
             for r in report.results]
    passed = sum(r.passed for r in report.results)
    lines.append(f"{report.suite}: {passed}/{len(report.results)} criteria passed")
    return CommandResult(report=report, text="\n".join(lines), ok=report.passed)
