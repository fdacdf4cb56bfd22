"""Corpus of group specs on disk, and the survey / verify workflows over it."""
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from app.config import get_settings
from app.engine.builder import build_from_spec, resolve_family
from app.engine.classifier import CONDITIONS, TARGET_LABELS, verify_iff
from app.engine.errors import EngineError, ResourceLimitExceeded
from app.models.group_spec import GroupSpec, SpecError, parse_spec
from app.models.report import (
    AnalysisReport,
    CoverageRow,
    PinMismatch,
    Verdict,
    VerificationSummary,
)

logger = logging.getLogger(__name__)


class CorpusDataManager:
    def __init__(self, corpus_dir: str):
        self.corpus_dir = corpus_dir
        self._spec_index: Dict[str, GroupSpec] = {}
        self._files: Dict[str, str] = {}
        self.load_errors: Dict[str, str] = {}
        self._build_spec_index()

    def _build_spec_index(self):
        if not os.path.isdir(self.corpus_dir):
            logger.warning(f"Corpus directory {self.corpus_dir} does not exist")
            return
        for filename in sorted(os.listdir(self.corpus_dir)):
            if not filename.endswith(".json"):
                continue
            path = os.path.join(self.corpus_dir, filename)
            try:
                with open(path, "r", encoding="utf-8") as f:
                    spec = parse_spec(f.read())
            except SpecError as e:
                self.load_errors[filename] = str(e)
                logger.error(f"Skipping {filename}: {e}")
                continue
            if spec.name in self._spec_index:
                self.load_errors[filename] = f"duplicate group name '{spec.name}'"
                continue
            self._spec_index[spec.name] = spec
            self._files[spec.name] = path
        logger.info(f"Loaded {len(self._spec_index)} specs from {self.corpus_dir}")

    def get_all_names(self) -> List[str]:
        return sorted(self._spec_index)

    def get_all_specs(self) -> List[GroupSpec]:
        return [self._spec_index[name] for name in self.get_all_names()]

    def get_spec(self, name: str) -> Optional[GroupSpec]:
        return self._spec_index.get(name)

    def get_path(self, name: str) -> Optional[str]:
        return self._files.get(name)


@lru_cache
def get_corpus_data_manager() -> CorpusDataManager:
    return CorpusDataManager(get_settings().corpus_dir)


def analyze_spec(
    spec: GroupSpec,
    *,
    direct: Optional[bool] = None,
    max_dim: Optional[int] = None,
    units: Optional[bool] = None,
    unit_cap: Optional[int] = None,
) -> AnalysisReport:
    spec = resolve_family(spec)
    G = build_from_spec(spec)
    return verify_iff(
        G, spec.name, spec.characteristic,
        direct=direct, max_dim=max_dim, units=units, unit_cap=unit_cap,
    )


def _survey_worker(payload: str) -> Tuple[str, str, str]:
    spec = GroupSpec.model_validate_json(payload)
    try:
        return spec.name, "ok", analyze_spec(spec).model_dump_json()
    except ResourceLimitExceeded as e:
        return spec.name, "resource", f"{type(e).__name__}: {e}"
    except (EngineError, ValueError) as e:
        return spec.name, "error", f"{type(e).__name__}: {e}"


def survey(
    specs: List[GroupSpec], jobs: int = 1
) -> Tuple[List[AnalysisReport], Dict[str, str], List[str]]:
    """Analyze every spec; results are ordered by group name whatever ``jobs`` is.

    Returns the reports, the error message per failed group, and the names of
    the failed groups that hit a size cap.
    """
    payloads = [s.model_dump_json() for s in sorted(specs, key=lambda s: s.name)]
    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_survey_worker, payloads))
    else:
        results = [_survey_worker(p) for p in payloads]
    reports: List[AnalysisReport] = []
    errors: Dict[str, str] = {}
    capped: List[str] = []
    for name, status, body in sorted(results):
        if status == "ok":
            reports.append(AnalysisReport.model_validate_json(body))
            continue
        errors[name] = body
        if status == "resource":
            capped.append(name)
        logger.error(f"{name}: {body}")
    return reports, errors, capped


def pin_mismatches(spec: GroupSpec, report: AnalysisReport) -> List[PinMismatch]:
    if spec.expected is None:
        return []
    actual = {
        "tL": report.tL_direct,
        "tU": report.tU_jennings,
        "cl": report.cl,
        "gprime_type": report.gprime_type,
    }
    mismatches = []
    for field, expected in spec.expected.model_dump(exclude_none=True).items():
        if field == "tL" and actual["tL"] is None:
            continue
        if actual[field] != expected:
            mismatches.append(PinMismatch(name=spec.name, field=field, expected=str(expected), actual=str(actual[field])))
    return mismatches


def unchecked_pins(spec: GroupSpec, report: AnalysisReport) -> List[str]:
    """Pins with no computed value to compare; t_L is only known when the oracle ran"""
    if spec.expected is None or spec.expected.tL is None or report.tL_direct is not None:
        return []
    return [f"{spec.name}.tL"]


def coverage(reports: List[AnalysisReport]) -> List[CoverageRow]:
    rows = []
    for condition in CONDITIONS:
        witnesses = sorted(r.name for r in reports if condition.id in r.matches)
        status = "witnessed" if witnesses else "one-directional only"
        if not witnesses:
            logger.warning(f"Condition {condition.id} has no corpus witness: {status}")
        rows.append(CoverageRow(
            condition=condition.id,
            target=TARGET_LABELS[condition.family],
            witnesses=witnesses,
            status=status,
        ))
    return rows


def verify_corpus(specs: List[GroupSpec], jobs: int = 1) -> VerificationSummary:
    reports, errors, capped = survey(specs, jobs)
    by_name = {s.name: s for s in specs}
    mismatches = [m for r in reports for m in pin_mismatches(by_name[r.name], r)]
    unchecked = [pin for r in reports for pin in unchecked_pins(by_name[r.name], r)]
    if unchecked:
        logger.warning(f"Pins not checked without the direct oracle: {unchecked}")
    summary = VerificationSummary(
        groups=len(specs),
        consistent=sum(1 for r in reports if r.verdict == Verdict.CONSISTENT),
        inconsistent=[r.name for r in reports if r.verdict == Verdict.INCONSISTENT],
        not_applicable=[r.name for r in reports if r.verdict == Verdict.NOT_APPLICABLE],
        errors=errors,
        resource_limited=capped,
        pin_mismatches=mismatches,
        unchecked_pins=unchecked,
        coverage=coverage(reports),
        findings={r.name: r.findings for r in reports if r.findings},
    )
    logger.info(
        f"Verified {summary.groups} groups: {summary.consistent} consistent, "
        f"{len(summary.inconsistent)} inconsistent, {len(summary.errors)} errors"
    )
    return summary


def dump_reports(reports: List[AnalysisReport]) -> str:
    return json.dumps([r.model_dump(mode="json") for r in reports], indent=2) + "\n"
