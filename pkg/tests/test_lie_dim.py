import pytest

from app.engine.errors import NotLieNilpotent
from app.engine.group_core import direct_product
from app.engine.lie_dim import (
    DimensionSeries,
    DSequence,
    almost_maximal_value,
    ceil_div,
    d_sequence,
    dimension_series_product,
    dimension_series_recursive,
    lie_gate,
    maximal_value,
    nu_p_prime,
    require_gate,
    shalev_checks,
    upper_index_jennings,
)
from tests.conftest import family_group


@pytest.fixture(scope="module")
def d32():
    return family_group("dihedral", order=32)


class TestGate:
    def test_non_nilpotent(self, s3):
        gate = lie_gate(s3)
        assert not gate.passed
        assert gate.label == "not Lie nilpotent"
        assert gate.reason == "KG not Lie nilpotent: G is not nilpotent"

    def test_dihedral_passes_in_characteristic_two(self, d8):
        gate = lie_gate(d8)
        assert gate.passed
        assert (gate.p, gate.n, gate.cl) == (2, 1, 2)

    def test_wrong_characteristic(self, d8):
        gate = lie_gate(d8, 3)
        assert not gate.passed
        assert "not a 3-group" in gate.reason

    def test_mixed_commutator_subgroup(self, d8):
        G = direct_product(d8, family_group("heisenberg", p=3))
        gate = lie_gate(G)
        assert not gate.passed
        assert gate.reason == "KG not Lie nilpotent: G' is not a p-group"

    def test_abelian_group(self, c4):
        gate = lie_gate(c4)
        assert gate.passed
        assert (gate.p, gate.n) == (2, 0)

    def test_characteristic_must_be_prime(self, d8):
        with pytest.raises(ValueError):
            lie_gate(d8, 4)

    def test_require_gate(self, s3):
        with pytest.raises(NotLieNilpotent):
            require_gate(s3, 2)


class TestDimensionSeries:
    def test_d8(self, d8):
        series = dimension_series_product(d8, 2)
        assert series.orders() == [8, 2, 1]
        ds = d_sequence(d8, series)
        assert ds.d == {2: 1}
        assert upper_index_jennings(ds) == 3

    def test_d16(self, d16):
        series = dimension_series_product(d16, 2)
        assert series.orders() == [16, 4, 2, 1]
        ds = d_sequence(d16, series)
        assert (ds.n, ds.exp_log) == (2, 2)
        assert ds.d == {2: 1, 3: 1}
        assert upper_index_jennings(ds) == 5

    def test_d32_skips_a_level(self, d32):
        series = dimension_series_product(d32, 2)
        assert series.orders() == [32, 8, 4, 2, 2, 1]
        ds = d_sequence(d32, series)
        assert ds.d == {2: 1, 3: 1, 5: 1}
        assert upper_index_jennings(ds) == 9

    def test_wreath_product_is_almost_maximal(self, c3wrc3):
        series = dimension_series_product(c3wrc3, 3)
        ds = d_sequence(c3wrc3, series)
        assert ds.d == {2: 1, 3: 1}
        assert upper_index_jennings(ds) == almost_maximal_value(3, 2) == 8

    @pytest.mark.parametrize("name", ["d8", "d16", "q8", "ut4_2", "d16xd8", "c3wrc3"])
    def test_recursive_matches_product(self, request, name):
        G = request.getfixturevalue(name)
        gate = lie_gate(G)
        product = dimension_series_product(G, gate.p)
        recursive = dimension_series_recursive(G, gate.p)
        assert recursive.same_terms(product)
        ds = d_sequence(G, product)
        assert sum(ds.d.values()) == ds.n
        for k in range(1, len(product.terms)):
            assert product.term(k + 1).issubset(product.term(k))

    def test_term_past_the_end_is_trivial(self, d8):
        series = dimension_series_product(d8, 2)
        assert series.term(10).is_trivial

    def test_abelian_group_has_two_terms(self, c4):
        series = dimension_series_product(c4, 2)
        assert series.orders() == [4, 1]
        assert upper_index_jennings(d_sequence(c4, series)) == 2


class TestIndexValues:
    def test_helpers(self):
        assert ceil_div(5, 2) == 3
        assert ceil_div(4, 2) == 2
        assert nu_p_prime(12, 2) == 3
        assert nu_p_prime(7, 3) == 7

    def test_extremes(self):
        assert maximal_value(2, 3) == 9
        assert almost_maximal_value(5, 2) == 22

    def test_jennings_formula(self):
        assert upper_index_jennings(DSequence(p=2, n=3, d={2: 3})) == 5
        assert upper_index_jennings(DSequence(p=5, n=2, d={2: 1, 3: 1})) == 14


class TestShalevChecks:
    @pytest.mark.parametrize("name", ["d8", "d16", "q8", "ut4_2", "d8xd8", "d16xd8", "c3wrc3"])
    def test_computed_sequences_pass(self, request, name):
        G = request.getfixturevalue(name)
        p = lie_gate(G).p
        series = dimension_series_product(G, p)
        assert shalev_checks(d_sequence(G, series), series) == []

    def test_d32_passes(self, d32):
        series = dimension_series_product(d32, 2)
        assert shalev_checks(d_sequence(d32, series), series) == []

    def test_fabricated_gap_is_flagged(self, d16):
        series = dimension_series_product(d16, 2)
        ds = DSequence(p=2, n=2, d={2: 1, 4: 1})
        clauses = {v.clause for v in shalev_checks(ds, series)}
        assert clauses == {"i", "v"}

    def test_large_lower_index_is_flagged(self, c4):
        series = DimensionSeries(5, (c4.whole, c4.trivial), "product")
        ds = DSequence(p=5, n=2, d={2: 2})
        violations = shalev_checks(ds, series, t_lower=18)
        assert [v.clause for v in violations] == ["iii"]
        assert shalev_checks(ds, series, t_lower=10) == []
