from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sipp.errors import FormatError, ShapeError, SingularMatrixError
from sipp.linalg import (Mat, block, determinant, direct_sum, hadamard,
                         inverse, left_nullspace, matrix_from_jsonable,
                         matrix_to_jsonable, nullspace, rank, rref, solve,
                         vec, vec_restrict)


def small_exact_matrices(max_dim=4, max_entry=4):
    dims = st.integers(1, max_dim)
    return dims.flatmap(lambda m: dims.flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-max_entry, max_entry), min_size=n, max_size=n),
            min_size=m, max_size=m).map(Mat.exact_matrix)))


class TestRref:
    def test_identity(self):
        res = rref(Mat.identity(3))
        assert res.rank == 3
        assert res.pivot_cols == (0, 1, 2)

    def test_repeated_row(self):
        assert rank(Mat.exact_matrix([[1, 1], [1, 1]])) == 1

    def test_float_mode_scale_invariance(self):
        m = Mat.float_matrix([[1e6, 2e6], [0.5e6, 1e6]])
        assert rank(m) == 1

    @settings(max_examples=60, deadline=None)
    @given(small_exact_matrices())
    def test_rank_equals_transpose_rank(self, m):
        assert rank(m) == rank(m.T)


class TestNullspace:
    def test_identity_trivial(self):
        assert nullspace(Mat.identity(3)) == []
        assert left_nullspace(Mat.identity(3)) == []

    def test_single_equation(self):
        basis = nullspace(Mat.exact_matrix([[1, 1]]))
        assert basis == [(Fraction(-1), Fraction(1))]

    def test_full_row_rank_has_empty_left_nullspace(self):
        rng = np.random.default_rng(5)
        a = rng.integers(-4, 5, size=(3, 5))
        assert np.linalg.matrix_rank(a) == 3  # independent oracle
        assert left_nullspace(Mat.exact_matrix(a.tolist())) == []

    def test_reduced_tangent_table_left_nullspace(self):
        # Row-reduced tangent verification table of the eight-zero orthogonal
        # matrix whose liberation is obstructed; its left nullspace is the
        # single alternating vector.
        table = Mat.exact_matrix([
            [1, 0, -1, 0, 0, 0, 1, 0],
            [0, 1, 0, -1, 0, 0, 0, 1],
            [-1, 0, 1, 0, 0, 0, 1, 0],
            [0, -1, 0, 1, 0, 0, 0, 1],
            [-1, 1, 0, 0, 1, 0, 0, 0],
            [0, 0, -1, 1, 0, 1, 0, 0],
            [1, -1, 0, 0, 1, 0, 0, 0],
            [0, 0, 1, -1, 0, 1, 0, 0],
        ])
        basis = left_nullspace(table)
        assert len(basis) == 1
        v = basis[0]
        scaled = tuple(x / v[0] for x in v)
        assert scaled == (1, -1, -1, 1, 1, -1, -1, 1)

    @settings(max_examples=60, deadline=None)
    @given(small_exact_matrices())
    def test_rank_nullity(self, m):
        basis = nullspace(m)
        assert len(basis) == m.cols - rank(m)
        for v in basis:
            assert all(x == 0 for x in m.matvec(v))


class TestSolveInverseDeterminant:
    def test_inverse_of_disjoint_row_example(self):
        a = Mat.exact_matrix([[2, 0, 0], [0, 1, 1], [-2, -1, 1]])
        expected = Mat.exact_matrix([["1/2", "0", "0"],
                                     ["-1/2", "1/2", "-1/2"],
                                     ["1/2", "1/2", "1/2"]])
        assert inverse(a) == expected

    def test_inverse_of_circulant(self):
        a = Mat.exact_matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        expected = Mat.exact_matrix([["1/2", "-1/2", "1/2"],
                                     ["1/2", "1/2", "-1/2"],
                                     ["-1/2", "1/2", "1/2"]])
        assert inverse(a) == expected

    def test_inverse_rejects_singular(self):
        with pytest.raises(SingularMatrixError):
            inverse(Mat.exact_matrix([[1, 1], [1, 1]]))

    def test_solve_consistent_and_inconsistent(self):
        a = Mat.exact_matrix([[1, 1], [2, 2]])
        assert solve(a, (1, 2)) == (Fraction(1), Fraction(0))
        assert solve(a, (1, 3)) is None

    def test_determinant_exact(self):
        a = Mat.exact_matrix([[1, 2], [3, 4]])
        assert determinant(a) == -2
        assert determinant(Mat.exact_matrix([[1, 1], [1, 1]])) == 0

    @settings(max_examples=40, deadline=None)
    @given(small_exact_matrices(max_dim=3))
    def test_determinant_matches_float(self, m):
        if not m.is_square:
            return
        assert float(determinant(m)) == pytest.approx(
            np.linalg.det(m.to_numpy()), abs=1e-6)


class TestVecAndProducts:
    def test_vec_column_stacking(self):
        a = Mat.exact_matrix([[11, 12, 13], [21, 22, 23]])
        assert vec(a) == (11, 21, 12, 22, 13, 23)

    def test_vec_restrict_empty(self):
        assert vec_restrict(Mat.identity(2), []) == ()

    def test_vec_restrict_off_diagonal(self):
        assert vec_restrict(Mat.identity(2), [(0, 1), (1, 0)]) == (0, 0)

    def test_vec_restrict_bounds(self):
        with pytest.raises(ShapeError):
            vec_restrict(Mat.identity(2), [(0, 5)])

    def test_hadamard_with_zero(self):
        a = Mat.exact_matrix([[1, 2], [3, 4]])
        assert hadamard(a, Mat.zeros(2, 2)) == Mat.zeros(2, 2)

    def test_hadamard_shape_mismatch(self):
        with pytest.raises(ShapeError):
            hadamard(Mat.identity(2), Mat.identity(3))

    def test_direct_sum_adds_vertex(self):
        q = Mat.exact_matrix([[1, 2], [3, 4]])
        s = direct_sum(Mat.identity(1), q)
        assert s.shape == (3, 3)
        assert s[0, 0] == 1
        assert s.row(0)[1:] == (0, 0)
        assert s.col(0)[1:] == (0, 0)
        assert s[1, 1] == 1 and s[2, 2] == 4

    def test_block_mismatch(self):
        with pytest.raises(ShapeError):
            block([[Mat.identity(2), Mat.identity(3)]])


class TestFloatExactAgreement:
    def test_rank_agreement_on_integer_matrices(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            m = int(rng.integers(1, 13))
            n = int(rng.integers(1, 13))
            a = rng.integers(-8, 9, size=(m, n))
            if rng.random() < 0.4:  # force some rank deficiency
                r = max(1, min(m, n) // 2)
                a = rng.integers(-3, 4, size=(m, r)) @ rng.integers(-3, 4, size=(r, n))
                a = np.clip(a, -8, 8)
            exact = rank(Mat.exact_matrix(a.tolist()))
            approx = rank(Mat.float_matrix(a.tolist()), tol=1e-9)
            assert exact == approx


class TestMatrixFileFormat:
    def test_exact_round_trip(self):
        m = Mat.exact_matrix([["1/2", "-1"], ["3", "0"]])
        assert matrix_from_jsonable(matrix_to_jsonable(m)) == m

    def test_float_round_trip(self):
        m = Mat.float_matrix([[0.5, -1.0], [3.0, 0.0]])
        assert matrix_from_jsonable(matrix_to_jsonable(m)) == m

    def test_mixed_forms_rejected(self):
        obj = {"rows": 1, "cols": 2, "entries": [["1/2", 0.5]]}
        with pytest.raises(FormatError):
            matrix_from_jsonable(obj)

    def test_bad_shape_rejected(self):
        with pytest.raises(FormatError):
            matrix_from_jsonable({"rows": 2, "cols": 1, "entries": [[1]]})
