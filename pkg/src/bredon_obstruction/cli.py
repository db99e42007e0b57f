"""Command line front end.

Every command reads one instance file and prints one deterministic report on
stdout; logs and timings go to stderr. The process exit code is the report's
``exit`` line.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from collections.abc import Sequence
from pathlib import Path

from .bredon import BredonCochain, BredonComplex
from .coefficients import validate_functoriality
from .complexes import validate
from .constants import (
    EXIT_BLOCKED,
    EXIT_IDENTITY_FAILURE,
    EXIT_NOT_A_COCYCLE,
    EXIT_OK,
    EXIT_PARSE_FAILURE,
    EXIT_VALIDATION_FAILURE,
    FINITENESS_NOTE,
    OUTPUT_FORMATS,
    THEOREM_HYPOTHESES,
    Commands,
)
from .exceptions import BredonError, NotACochainComplexError, format_error_for_logging
from .loader import Instance, parse_instance
from .models.report import Report
from .obstruction import VerdictKind
from .session import BredonSessionSync
from .utils import ComputeConfig, format_vector, get_logger, instance_digest

VERDICT_EXIT_CODES = {
    VerdictKind.EXTENDS_AS_IS: EXIT_OK,
    VerdictKind.EXTENDS_AFTER_MODIFICATION: EXIT_OK,
    VerdictKind.BLOCKED: EXIT_BLOCKED,
    VerdictKind.NOT_A_COCYCLE: EXIT_NOT_A_COCYCLE,
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def _parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="bredon-obstruction",
        description="Bredon cohomology and obstruction verdicts for equivariant fibrations.",
    )
    parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default="text")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING")
    parser.add_argument("--workers", type=int, default=1)
    commands = parser.add_subparsers(dest="command", required=True)

    validate_cmd = commands.add_parser(Commands.VALIDATE, help="validate an instance file")
    validate_cmd.add_argument("instance", type=Path)

    cohomology_cmd = commands.add_parser(Commands.COHOMOLOGY, help="Bredon cohomology groups")
    cohomology_cmd.add_argument("instance", type=Path)
    cohomology_cmd.add_argument("--degrees", help="a degree n or a range a..b")
    cohomology_cmd.add_argument(
        "--oracle", action="store_true", help="cross-check against the compatibility families"
    )

    obstruction_cmd = commands.add_parser(Commands.OBSTRUCTION, help="extension verdict")
    obstruction_cmd.add_argument("instance", type=Path)
    obstruction_cmd.add_argument("--cochain", required=True)

    difference_cmd = commands.add_parser(
        Commands.CHECK_DIFFERENCE, help="check δd = α₁ - α₂ for a difference cochain"
    )
    difference_cmd.add_argument("instance", type=Path)
    difference_cmd.add_argument("--a1", required=True)
    difference_cmd.add_argument("--a2", required=True)
    difference_cmd.add_argument("--d", required=True)
    return parser.parse_args(argv)


def parse_degrees(text: str | None, top: int) -> list[int]:
    """``None`` -> 0..top; ``"n"`` -> [n]; ``"a..b"`` -> a..b inclusive."""
    if text is None:
        return list(range(0, max(top, 0) + 1))
    match = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", text.strip())
    if not match:
        raise ValueError(f"degrees must look like 'n' or 'a..b', got {text!r}")
    low = int(match.group(1))
    high = int(match.group(2)) if match.group(2) is not None else low
    if high < low:
        raise ValueError(f"empty degree range {text!r}")
    return list(range(low, high + 1))


def format_class(coordinates: Sequence[tuple[int, int]]) -> str:
    """``Z/2:1, Z:3`` style rendering of class coordinates."""
    if not coordinates:
        return "0"
    terms = []
    for order, value in coordinates:
        summand = "Z" if order == 0 else f"Z/{order}"
        terms.append(f"{summand}:{value}")
    return ", ".join(terms)


def _add_cochain(report: Report, prefix: str, C: BredonComplex, f: BredonCochain) -> None:
    for cell in C.cells(f.degree):
        report.add(f"{prefix}.{cell.id}", format_vector(f[cell.id]))


def _add_warnings(report: Report, instance: Instance, extra: Sequence[str] = ()) -> None:
    for text in (*instance.assumptions, *instance.complex.assertions):
        report.warn(f"declared: {text}")
    for text in (*THEOREM_HYPOTHESES, FINITENESS_NOTE, *extra):
        report.warn(f"assumed: {text}")


# ==================== COMMANDS ====================


def cmd_validate(instance: Instance) -> Report:
    report = Report(command=Commands.VALIDATE, instance=instance.digest)
    report.add("group.order", instance.group.order)
    report.add("family", " ".join(instance.name_of(H) for H in instance.family))
    report.add("cells", len(instance.complex.cells))

    violations = list(validate(instance.complex).violations)
    report.add("complex", "ok" if not violations else "invalid")
    functoriality = validate_functoriality(instance.system)
    report.add("coefficients", "ok" if functoriality.ok else "invalid")
    violations.extend(functoriality.violations)
    if not violations:
        try:
            instance.bredon.check()
        except NotACochainComplexError as e:
            report.add("cochain_complex", "invalid")
            report.add("violation", f"NotACochainComplex at {e.witness}: {e.message}")
        else:
            report.add("cochain_complex", "ok")
    for violation in violations:
        report.add("violation", str(violation))
    if instance.fibers is not None:
        for missing in instance.fibers.missing(instance.category):
            report.warn(f"fibers: {missing}")

    failed = any(entry.key == "violation" for entry in report.results)
    report.exit_code = EXIT_VALIDATION_FAILURE if failed else EXIT_OK
    _add_warnings(report, instance)
    return report


def cmd_cohomology(session: BredonSessionSync, degrees: str | None) -> Report:
    instance = session.instance
    report = Report(command=Commands.COHOMOLOGY, instance=instance.digest)
    for result in session.cohomology(parse_degrees(degrees, instance.complex.dimension)):
        report.add(f"H^{result.degree}", result.describe())
        if result.invariants.primary_parts() != result.invariants.torsion:
            report.add(f"H^{result.degree}.primary", result.invariants.describe_primary())
    _add_warnings(report, instance)
    return report


def cmd_obstruction(session: BredonSessionSync, name: str) -> Report:
    instance = session.instance
    report = Report(command=Commands.OBSTRUCTION, instance=instance.digest)
    alpha = instance.cochain(name)
    verdict = session.decide(name)
    C = session.get_complex()
    report.add("cochain", name)
    report.add("degree", alpha.degree)
    report.add("fibration_degree", alpha.degree - 1)
    report.add("cocycle", "no" if verdict.kind is VerdictKind.NOT_A_COCYCLE else "yes")
    if verdict.witness is not None:
        report.add("witness", verdict.witness)
    report.add("verdict", verdict.kind.value)
    if verdict.kind is VerdictKind.BLOCKED:
        report.add("class", format_class(verdict.class_coordinates))
    if verdict.certificate is not None:
        _add_cochain(report, "certificate", C, verdict.certificate)
    _add_warnings(report, instance, verdict.warnings)
    report.exit_code = VERDICT_EXIT_CODES[verdict.kind]
    return report


def cmd_check_difference(session: BredonSessionSync, a1: str, a2: str, d: str) -> Report:
    instance = session.instance
    report = Report(command=Commands.CHECK_DIFFERENCE, instance=instance.digest)
    check = session.check_difference(a1, a2, d)
    C = session.get_complex()
    report.add("a1", a1)
    report.add("a2", a2)
    report.add("d", d)
    report.add("identity", "holds" if check.holds else "fails")
    if not check.holds:
        for cell in C.cells(check.residual.degree):
            if not C.value_group(cell).is_zero_element(check.residual[cell.id]):
                report.add(f"residual.{cell.id}", format_vector(check.residual[cell.id]))
    _add_warnings(report, instance)
    report.exit_code = EXIT_OK if check.holds else EXIT_IDENTITY_FAILURE
    return report


def _run(args: argparse.Namespace, instance: Instance, config: ComputeConfig) -> Report:
    if args.command == Commands.VALIDATE:
        return cmd_validate(instance)
    with BredonSessionSync(instance, config) as session:
        if args.command == Commands.COHOMOLOGY:
            return cmd_cohomology(session, args.degrees)
        if args.command == Commands.OBSTRUCTION:
            return cmd_obstruction(session, args.cochain)
        return cmd_check_difference(session, args.a1, args.a2, args.d)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parse_args(argv)
    config = ComputeConfig(
        log_level=getattr(logging, args.log_level),
        workers=args.workers,
        oracle=getattr(args, "oracle", False),
        output_format=args.output_format,
    )
    logger = get_logger("bredon_obstruction", config.log_level).getChild("cli")

    try:
        data = args.instance.read_bytes()
    except OSError as e:
        print(f"cannot read {args.instance}: {e.strerror}", file=sys.stderr)
        return EXIT_PARSE_FAILURE

    digest = instance_digest(data)
    try:
        instance = parse_instance(data)
        report = _run(args, instance, config)
    except BredonError as e:
        logger.error(format_error_for_logging(e))
        report = Report(command=args.command, instance=digest, exit_code=e.exit_code)
        report.add("error", e.code or type(e).__name__)
        report.add("message", e.user_friendly_message)
    except ValueError as e:
        logger.error("invalid arguments: %s", e)
        report = Report(command=args.command, instance=digest, exit_code=EXIT_VALIDATION_FAILURE)
        report.add("error", "INVALID_ARGUMENT")
        report.add("message", str(e))

    sys.stdout.write(report.render(config.output_format))
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
