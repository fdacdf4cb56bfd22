import json
import os

import pytest

from app.config import get_settings
from app.engine.classifier import CONDITIONS
from app.corpus import (
    CorpusDataManager,
    coverage,
    dump_reports,
    pin_mismatches,
    survey,
    unchecked_pins,
    verify_corpus,
)
from app.models.group_spec import spec_from_dict
from app.models.report import Verdict
from tests.conftest import D8_SPEC


class TestCorpusDataManager:
    def test_loads_every_spec(self, corpus_dir):
        manager = CorpusDataManager(corpus_dir)
        assert manager.get_all_names() == ["D8", "Q8", "S3", "UT3(3)"]
        assert manager.load_errors == {}
        assert manager.get_spec("Q8").family == "quaternion"
        assert manager.get_path("D8").endswith("d8.json")
        assert manager.get_spec("Q16") is None

    def test_unreadable_files_are_reported(self, corpus_dir):
        with open(os.path.join(corpus_dir, "broken.json"), "w") as f:
            f.write('{"name": "B", "kind": "perm", "degree": 2, "generators": [[[1, 3]]]}')
        with open(os.path.join(corpus_dir, "zz_duplicate.json"), "w") as f:
            json.dump(D8_SPEC, f)
        manager = CorpusDataManager(corpus_dir)
        assert "outside 1..2" in manager.load_errors["broken.json"]
        assert "duplicate" in manager.load_errors["zz_duplicate.json"]
        assert len(manager.get_all_names()) == 4

    def test_missing_directory(self, tmp_path):
        manager = CorpusDataManager(str(tmp_path / "nowhere"))
        assert manager.get_all_names() == []

    def test_shipped_corpus_parses(self):
        manager = CorpusDataManager(get_settings().corpus_dir)
        assert manager.load_errors == {}
        expected = {
            "D8", "D8xD8xD8", "UT4(2)", "D16xD8", "C3wrC3", "UT4sub(3)", "UT4sub(5)", "MaxClass(5)",
            "E8ext(128)", "C4C2ext(64)",
        }
        assert expected <= set(manager.get_all_names())


class TestWorkflows:
    def test_survey_is_sorted(self, sample_specs):
        specs = [spec_from_dict(d) for d in reversed(sample_specs)]
        reports, errors, capped = survey(specs)
        assert errors == {}
        assert capped == []
        assert [r.name for r in reports] == ["D8", "Q8", "S3", "UT3(3)"]

    def test_parallel_survey_matches_serial(self, sample_specs):
        specs = [spec_from_dict(d) for d in sample_specs]
        serial, _, _ = survey(specs, jobs=1)
        parallel, _, _ = survey(specs, jobs=2)
        assert [r.model_dump() for r in serial] == [r.model_dump() for r in parallel]

    def test_engine_errors_are_collected(self):
        spec = spec_from_dict({"name": "Big", "kind": "family", "family": "dihedral", "params": {"order": 8192}})
        reports, errors, capped = survey([spec])
        assert reports == []
        assert errors["Big"].startswith("GroupTooLarge")
        assert capped == ["Big"]

    def test_pin_mismatch(self):
        data = dict(D8_SPEC, expected={"tU": 4, "cl": 2})
        spec = spec_from_dict(data)
        reports, _, _ = survey([spec])
        mismatches = pin_mismatches(spec, reports[0])
        assert [(m.field, m.expected, m.actual) for m in mismatches] == [("tU", "4", "3")]

    def test_lower_index_pin_skipped_without_oracle(self):
        spec = spec_from_dict(dict(D8_SPEC, expected={"tL": 99}))
        reports, _, _ = survey([spec])
        report = reports[0].model_copy(update={"tL_direct": None})
        assert pin_mismatches(spec, report) == []
        assert unchecked_pins(spec, report) == ["D8.tL"]
        assert unchecked_pins(spec, reports[0]) == []

    def test_verify_lists_unchecked_pins(self, monkeypatch):
        monkeypatch.setenv("LIE_ORACLE_MAX_DIM", "4")
        get_settings.cache_clear()
        try:
            summary = verify_corpus([spec_from_dict(D8_SPEC)])
        finally:
            get_settings.cache_clear()
        assert summary.ok
        assert summary.pin_mismatches == []
        assert summary.unchecked_pins == ["D8.tL"]

    def test_verify_corpus(self, sample_specs):
        summary = verify_corpus([spec_from_dict(d) for d in sample_specs])
        assert summary.ok
        assert summary.consistent == 3
        assert summary.not_applicable == ["S3"]
        assert len(summary.coverage) == 8

    def test_coverage_lists_witnesses(self, sample_specs):
        reports, _, _ = survey([spec_from_dict(d) for d in sample_specs])
        report = reports[0].model_copy(update={"matches": ["T2.i"]})
        rows = {row.condition: row for row in coverage([report])}
        assert rows["T2.i"].status == "witnessed"
        assert rows["T2.i"].witnesses == ["D8"]
        assert rows["T1.i"].status == "one-directional only"

    def test_dump_reports(self, sample_specs):
        reports, _, _ = survey([spec_from_dict(sample_specs[0])])
        data = json.loads(dump_reports(reports))
        assert data[0]["name"] == "D8"
        assert data[0]["verdict"] == Verdict.CONSISTENT.value


@pytest.mark.slow
def test_shipped_corpus_verifies():
    manager = CorpusDataManager(get_settings().corpus_dir)
    summary = verify_corpus(manager.get_all_specs(), jobs=4)
    assert summary.ok, summary.model_dump_json(indent=2)
    witnessed = {row.condition for row in summary.coverage if row.status == "witnessed"}
    assert witnessed == {c.id for c in CONDITIONS}
    assert summary.unchecked_pins == ["D8xD8xD8.tL", "MaxClass(5).tL"]
    assert summary.not_applicable == ["S3"]
