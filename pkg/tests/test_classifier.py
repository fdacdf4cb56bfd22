from unittest.mock import patch

import pytest

from app.config import get_settings
from app.corpus import CorpusDataManager
from app.engine.builder import build_from_spec
from app.engine.classifier import (
    CONDITIONS,
    condition_match,
    describe_structure,
    gamma3_descriptor,
    group_shape,
    lemma_d_match,
    target_value,
    unit_target_value,
    verify_iff,
)
from app.engine.errors import NotLieNilpotent
from app.engine.group_core import direct_product, lower_central_series
from app.engine.lie_dim import DSequence
from app.models.report import OracleStatus, Verdict


@pytest.fixture(scope="module")
def shipped():
    return CorpusDataManager(get_settings().corpus_dir)


def corpus_group(manager, name):
    return build_from_spec(manager.get_spec(name))


class TestTargets:
    def test_target_values(self):
        assert target_value("T1", 2, 8) == 5
        assert target_value("T2", 2, 8) == 6
        assert target_value("T3", 2, 8) == 7
        assert target_value("T1", 5, 25) == 10
        assert target_value("T2", 5, 25) == 14
        assert target_value("T3", 3, 9) == 6
        assert unit_target_value("T2", 2, 8) == 5

    def test_every_family_has_conditions(self):
        assert {c.family for c in CONDITIONS} == {"T1", "T2", "T3"}
        assert len({c.id for c in CONDITIONS}) == len(CONDITIONS)

    def test_lemma_cases(self):
        assert lemma_d_match(2, 3, DSequence(p=2, n=3, d={2: 3})) == {"L2.i"}
        assert lemma_d_match(3, 2, DSequence(p=3, n=2, d={2: 2})) == {"L7.ii"}
        assert lemma_d_match(2, 3, DSequence(p=2, n=3, d={2: 1, 4: 1})) == set()


class TestConditionMatch:
    def test_ut4_is_t2i(self, ut4_2):
        assert condition_match(ut4_2) == {"T2.i"}

    def test_c4_x_c2_with_squares_in_gamma3(self, d16xd8):
        assert condition_match(d16xd8) == {"T2.ii"}
        assert condition_match(d16xd8, literal=True) == {"T2.ii"}

    def test_elementary_gprime_with_noncyclic_gamma3(self, shipped):
        G = corpus_group(shipped, "E8ext(128)")
        assert condition_match(G) == {"T3.i"}
        assert condition_match(G, literal=True) == {"T3.i"}

    def test_c4_x_c2_with_gamma3_omega1(self, shipped):
        G = corpus_group(shipped, "C4C2ext(64)")
        assert condition_match(G) == {"T3.ii"}
        assert condition_match(G, literal=True) == {"T2.ii", "T3.ii"}

    def test_no_condition_for_small_commutator_subgroup(self, d8, d8xd8):
        assert condition_match(d8) == set()
        assert condition_match(d8xd8) == set()

    def test_wreath_product_matches_printed_form_only(self, c3wrc3):
        assert condition_match(c3wrc3) == set()
        assert condition_match(c3wrc3, literal=True) == {"T3.iii"}

    def test_gate_failure(self, s3):
        with pytest.raises(NotLieNilpotent):
            condition_match(s3)


class TestStructure:
    def test_gamma3_descriptor(self, ut4_2):
        series = lower_central_series(ut4_2)
        descriptor = gamma3_descriptor(group_shape(ut4_2, 2, series))
        assert descriptor.order == 2
        assert descriptor.is_cyclic
        assert not descriptor.equals_gprime_squared
        assert descriptor.equals_omega1 is False

    def test_describe_d16xd8(self, d16xd8):
        summary = describe_structure(d16xd8)
        assert summary.nilpotent
        assert summary.cl == 3
        assert summary.lower_central_orders == [128, 8, 2, 1]
        assert summary.gprime_type == "C4 x C2"
        assert summary.gprime_exponent == 4
        assert summary.gamma3.equals_gprime_squared

    def test_describe_s3(self, s3):
        summary = describe_structure(s3)
        assert not summary.nilpotent
        assert summary.cl is None
        assert summary.gprime_type == "C3"
        assert summary.center_order == 1
        assert summary.gamma3 is None


class TestVerifyIff:
    def test_d8(self, d8):
        report = verify_iff(d8, "D8")
        assert report.verdict == Verdict.CONSISTENT
        assert (report.tU_jennings, report.tU_direct, report.tL_direct) == (3, 3, 3)
        assert report.unit_class == 2
        assert report.oracle == OracleStatus.RAN
        assert report.matches == []
        assert report.gprime_type == "C2"
        assert report.d_sequence == {2: 1}
        names = {c.name for c in report.checks}
        assert {"d_sum", "series_recursive_product", "oracle_upper_index", "cyclic_gprime_maximal",
                "commutator_identity", "unit_class", "shalev"} <= names

    def test_not_applicable(self, s3, d8):
        report = verify_iff(s3, "S3")
        assert report.verdict == Verdict.NOT_APPLICABLE
        assert report.gate == "not Lie nilpotent"
        assert report.gate_reason == "KG not Lie nilpotent: G is not nilpotent"
        assert report.checks == []
        assert verify_iff(d8, "D8", 3).verdict == Verdict.NOT_APPLICABLE

    def test_ut4_attains_t2(self, ut4_2):
        report = verify_iff(ut4_2, "UT4(2)")
        assert report.verdict == Verdict.CONSISTENT
        assert report.matches == ["T2.i"]
        assert (report.tU_jennings, report.tL_direct) == (6, 6)
        assert report.lemma_cases == ["L4.i"]
        assert report.unit_class is None

    def test_d16xd8(self, d16xd8):
        report = verify_iff(d16xd8, "D16xD8")
        assert report.verdict == Verdict.CONSISTENT
        assert report.matches == ["T2.ii"]
        assert report.tL_direct == 6
        assert report.findings == []

    @pytest.mark.parametrize("name,condition", [("E8ext(128)", "T3.i"), ("C4C2ext(64)", "T3.ii")])
    def test_two_groups_attain_t3(self, shipped, name, condition):
        report = verify_iff(corpus_group(shipped, name), name)
        assert report.verdict == Verdict.CONSISTENT
        assert report.matches == [condition]
        assert report.tU_jennings == report.tL_direct == 7
        assert report.d_sequence == {2: 1, 3: 2}
        assert report.lemma_cases == ["L7.i"]

    def test_omega1_gamma3_finding(self, shipped):
        report = verify_iff(corpus_group(shipped, "C4C2ext(64)"), "C4C2ext(64)")
        assert report.literal_matches == ["T2.ii", "T3.ii"]
        assert len(report.findings) == 1
        assert "T2.ii holds as printed" in report.findings[0]

    def test_wreath_product_finding(self, c3wrc3):
        report = verify_iff(c3wrc3, "C3wrC3")
        assert report.verdict == Verdict.CONSISTENT
        assert report.tU_jennings == report.tL_direct == 8
        assert report.almost_maximal_value == 8
        assert report.literal_matches == ["T3.iii"]
        assert len(report.findings) == 1
        assert "T3.iii" in report.findings[0]

    def test_oracle_skipped_above_cap(self, d8):
        G = direct_product(direct_product(d8, d8), d8)
        report = verify_iff(G, "D8xD8xD8")
        assert report.oracle == OracleStatus.SKIPPED
        assert report.tL_direct is None
        assert report.tU_jennings == 5
        assert report.matches == ["T1.i"]
        assert report.lemma_cases == ["L2.i"]
        assert report.verdict == Verdict.CONSISTENT

    def test_oracle_forced_off(self, d16):
        report = verify_iff(d16, "D16", direct=False, units=False)
        assert report.oracle == OracleStatus.SKIPPED
        assert report.unit_class is None
        assert report.tU_jennings == 5

    def test_wrong_index_is_inconsistent(self, d8):
        with patch("app.engine.classifier.upper_index_jennings", return_value=4):
            report = verify_iff(d8, "D8")
        assert report.verdict == Verdict.INCONSISTENT
        failed = {c.name for c in report.failed_checks}
        assert "oracle_upper_index" in failed
        assert "upper_bound" in failed

    @pytest.mark.slow
    def test_f3_witness(self, shipped):
        report = verify_iff(corpus_group(shipped, "UT4sub(3)"), "UT4sub(3)")
        assert report.matches == ["T3.iii"]
        assert report.tL_direct == 6
        assert report.verdict == Verdict.CONSISTENT

    @pytest.mark.slow
    @pytest.mark.parametrize("name,condition,index", [("UT4sub(5)", "T1.ii", 10), ("MaxClass(5)", "T2.iii", 14)])
    def test_f5_witnesses(self, shipped, name, condition, index):
        report = verify_iff(corpus_group(shipped, name), name)
        assert report.matches == [condition]
        assert report.tU_jennings == index
        assert report.verdict == Verdict.CONSISTENT

    @pytest.mark.slow
    @pytest.mark.parametrize("name,max_dim,index", [("D8xD8xD8", 512, 5), ("MaxClass(5)", 625, 14)])
    def test_forced_oracle_matches_pinned_lower_index(self, shipped, name, max_dim, index):
        spec = shipped.get_spec(name)
        report = verify_iff(build_from_spec(spec), name, direct=True, max_dim=max_dim)
        assert report.verdict == Verdict.CONSISTENT
        assert report.oracle == OracleStatus.RAN
        assert report.tL_direct == report.tU_jennings == index
        assert report.tL_direct == spec.expected.tL
