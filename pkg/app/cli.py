"""
Command-line workflows over group specs.

Usage:
    python -m app analyze specs/d8cubed.json --direct --max-dim 512
    python -m app family dihedral order=16 --emit d16.json
    python -m app survey app/data/corpus --jobs 4 --json
    python -m app verify app/data/corpus
    python -m app units app/data/corpus/q16.json

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error, 3 size cap hit.
"""
import argparse
import logging
import os
import sys
from typing import List, Optional

from app.config import get_settings
from app.corpus import CorpusDataManager, analyze_spec, dump_reports, survey, verify_corpus
from app.engine.builder import build_from_spec, resolve_family
from app.engine.errors import EngineError, ResourceLimitExceeded
from app.engine.families import family
from app.engine.lie_dim import lie_gate
from app.engine.modular_algebra import lower_lie_chain, unit_group_class
from app.models.group_spec import SpecError, parse_spec, serialize_spec
from app.models.report import AnalysisReport, Verdict, VerificationSummary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _load_spec(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return parse_spec(f.read())


def render_report(report: AnalysisReport) -> str:
    lines = [f"{report.name}: |G| = {report.order}, {report.gate}"]
    if report.verdict == Verdict.NOT_APPLICABLE:
        lines.append(f"  {report.gate_reason}")
        return "\n".join(lines)
    lines += [
        f"  p = {report.p}, cl = {report.cl}, G' = {report.gprime_type} (n = {report.n}, l = {report.l})",
        f"  gamma_3: order {report.gamma3.order}, cyclic {report.gamma3.is_cyclic}",
        f"  d-sequence: {', '.join(f'd_({k}) = {v}' for k, v in report.d_sequence.items()) or 'empty'}",
        f"  t^L (Jennings) = {report.tU_jennings}"
        f"  [maximal {report.maximal_value}, almost maximal {report.almost_maximal_value}]",
    ]
    if report.tU_direct is not None:
        lines.append(f"  direct: t^L = {report.tU_direct}, t_L = {report.tL_direct}")
    else:
        lines.append(f"  direct: {report.oracle.value}")
    if report.unit_class is not None:
        lines.append(f"  cl(U(KG)) = {report.unit_class}")
    lines.append(f"  conditions: {', '.join(report.matches) or 'none'}")
    for check in report.failed_checks:
        lines.append(f"  FAILED {check.name}: {check.detail}")
    for finding in report.findings:
        lines.append(f"  finding: {finding}")
    lines.append(f"  verdict: {report.verdict.value}")
    return "\n".join(lines)


def render_summary(summary: VerificationSummary) -> str:
    lines = [f"{summary.groups} groups, {summary.consistent} consistent"]
    for name in summary.inconsistent:
        lines.append(f"  inconsistent: {name}")
    for name, error in summary.errors.items():
        lines.append(f"  error: {name}: {error}")
    for m in summary.pin_mismatches:
        lines.append(f"  pin mismatch: {m.name}.{m.field} expected {m.expected}, got {m.actual}")
    for pin in summary.unchecked_pins:
        lines.append(f"  pin not checked: {pin} (direct oracle skipped)")
    lines.append("coverage:")
    for row in summary.coverage:
        witnesses = ", ".join(row.witnesses) or "-"
        lines.append(f"  {row.condition:7} {row.target:10} {row.status:22} {witnesses}")
    for name, findings in summary.findings.items():
        for finding in findings:
            lines.append(f"  finding: {finding}")
    lines.append("OK" if summary.ok else "FAILED")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    spec = _load_spec(args.file)
    report = analyze_spec(spec, direct=True if args.direct else None, max_dim=args.max_dim)
    print(report.model_dump_json(indent=2) if args.json else render_report(report))
    return EXIT_FAILED if report.verdict == Verdict.INCONSISTENT else EXIT_OK


def _parse_params(items: List[str]) -> dict:
    params = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"family parameter '{item}' must look like key=value")
        params[key] = int(value)
    return params


def cmd_family(args) -> int:
    spec = family(args.name, _parse_params(args.params))
    text = serialize_spec(spec)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {spec.name} to {args.emit}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _corpus(directory: str) -> CorpusDataManager:
    if not os.path.isdir(directory):
        raise ValueError(f"{directory} is not a directory")
    manager = CorpusDataManager(directory)
    if manager.load_errors:
        for filename, error in manager.load_errors.items():
            print(f"{filename}: {error}", file=sys.stderr)
        raise SpecError("corpus contains unreadable specs")
    return manager


def _batch_exit(failed: bool, errors: dict, capped: List[str]) -> int:
    if failed or set(errors) - set(capped):
        return EXIT_FAILED
    return EXIT_RESOURCE if capped else EXIT_OK


def cmd_survey(args) -> int:
    reports, errors, capped = survey(_corpus(args.dir).get_all_specs(), args.jobs)
    if args.json:
        sys.stdout.write(dump_reports(reports))
    else:
        print("\n\n".join(render_report(r) for r in reports))
    for name, error in errors.items():
        print(f"{name}: {error}", file=sys.stderr)
    return _batch_exit(any(r.verdict == Verdict.INCONSISTENT for r in reports), errors, capped)


def cmd_verify(args) -> int:
    summary = verify_corpus(_corpus(args.dir).get_all_specs(), args.jobs)
    print(summary.model_dump_json(indent=2) if args.json else render_summary(summary))
    return _batch_exit(bool(summary.inconsistent or summary.pin_mismatches), summary.errors, summary.resource_limited)


def cmd_units(args) -> int:
    spec = resolve_family(_load_spec(args.file))
    G = build_from_spec(spec)
    gate = lie_gate(G, spec.characteristic or 2)
    if not gate.passed:
        print(f"{spec.name}: {gate.reason}")
        return EXIT_FAILED
    unit_class = unit_group_class(G, 2, args.cap)
    t_lower = lower_lie_chain(G, 2).index
    print(f"{spec.name}: cl(U(F_2 G)) = {unit_class}, t_L - 1 = {t_lower - 1}")
    return EXIT_OK if unit_class == t_lower - 1 else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m app", description="Lie nilpotency indices of modular group algebras")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Analyze one group spec")
    p.add_argument("file")
    p.add_argument("--direct", action="store_true", help="Run the direct ideal-chain oracle even above the default cap")
    p.add_argument("--max-dim", type=int, default=None, help="Direct-oracle cap on |G|")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("family", help="Emit a built-in family member as a spec")
    p.add_argument("name")
    p.add_argument("params", nargs="*", help="key=value, e.g. order=16")
    p.add_argument("--emit", metavar="FILE")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("survey", help="Analyze every spec in a directory")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("verify", help="Run every invariant and two-way theorem check over a corpus")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("units", help="Compare cl(U(F_2 G)) with t_L - 1")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=None, help="Largest unit group enumerated")
    p.set_defaults(func=cmd_units)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: get_settings().log_level, 1: "INFO"}.get(args.verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SpecError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
