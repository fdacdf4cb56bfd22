import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.engine.linalg import SubspaceBasis, mod_matmul, rank_mod_p, row_reduce


def test_row_reduce_over_f3():
    rows, pivots = row_reduce([[2, 1, 0], [1, 2, 0], [0, 0, 2]], 3)
    assert pivots == [0, 2]
    assert rows.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_rank_depends_on_characteristic():
    m = [[1, 1], [1, -1]]
    assert rank_mod_p(m, 2) == 1
    assert rank_mod_p(m, 3) == 2


def test_mod_matmul():
    a = np.array([[4, 4], [4, 4]])
    assert mod_matmul(a, a, 5).tolist() == [[2, 2], [2, 2]]


class TestSubspaceBasis:
    def test_empty(self):
        basis = SubspaceBasis(5, 4)
        assert basis.dim == 0
        assert basis.contains([0, 0, 0, 0])
        assert not basis.contains([1, 0, 0, 0])

    def test_whole_space(self):
        assert SubspaceBasis.whole_space(2, 6).dim == 6

    def test_extend_returns_new_rows_only(self):
        basis = SubspaceBasis.spanned_by([[1, 1, 0]], 2, 3)
        added = basis.extend([[1, 1, 0], [0, 1, 1]])
        assert added.shape[0] == 1
        assert basis.dim == 2
        assert basis.contains([1, 0, 1])
        assert not basis.contains([1, 0, 0])
        assert basis.extend([[1, 0, 1]]).shape[0] == 0

    def test_rows_stay_fully_reduced(self):
        basis = SubspaceBasis.spanned_by([[0, 1, 2], [1, 1, 1]], 3, 3)
        pivots = basis.pivots.tolist()
        assert pivots == sorted(pivots)
        assert (basis.rows[:, pivots] == np.eye(len(pivots), dtype=np.int64)).all()

    def test_contains_rows_and_inclusion(self):
        small = SubspaceBasis.spanned_by([[1, 2, 0, 0]], 3, 4)
        big = SubspaceBasis.spanned_by([[1, 0, 0, 0], [0, 1, 0, 0]], 3, 4)
        assert small.is_subspace_of(big)
        assert not big.is_subspace_of(small)
        assert big.contains_rows([[2, 2, 0, 0], [0, 0, 1, 0]]).tolist() == [True, False]

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([2, 3, 5]),
        st.lists(st.lists(st.integers(min_value=0, max_value=4), min_size=5, max_size=5), min_size=1, max_size=8),
    )
    def test_dimension_matches_rank(self, p, vectors):
        basis = SubspaceBasis.spanned_by(vectors, p, 5)
        assert basis.dim == rank_mod_p(vectors, p)
        assert basis.contains_rows(vectors).all()
