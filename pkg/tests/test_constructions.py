import math
import random
from fractions import Fraction

import numpy as np
import pytest

from sipp import gallery
from sipp.constructions import (GivensSpec, block_lower_triangular,
                                bordered_block, cayley, givens,
                                hessenberg_orthogonal, hollow_orthogonal,
                                merge_hollow, merge_row_orthogonal,
                                pad_columns, post_apply, pre_apply)
from sipp.errors import (HollowOrderError, NotHollowError, ShapeError,
                         StructureError)
from sipp.linalg import Mat, determinant, dot
from sipp.realize import orthogonality_residual
from sipp.signpat import sign_of
from sipp.sipp_core import Verdict, has_sipp, hollow_sipp_by_signature


def random_skew(rng, n):
    k = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rng.randint(-3, 3)
            k[i][j] = x
            k[j][i] = -x
    return Mat.exact_matrix(k)


class TestHessenberg:
    def test_order3(self):
        h = hessenberg_orthogonal(3)
        assert h == Mat.exact_matrix([[1, -1, 0], [1, 1, -2], [1, 1, 1]])
        for i in range(3):
            for j in range(i + 1, 3):
                assert dot(h.row(i), h.row(j)) == 0

    def test_order2(self):
        assert hessenberg_orthogonal(2) == Mat.exact_matrix([[1, -1], [1, 1]])

    def test_row_norms(self):
        h = hessenberg_orthogonal(5)
        for i in range(4):
            assert dot(h.row(i), h.row(i)) == (i + 1) * (i + 2)
        assert dot(h.row(4), h.row(4)) == 5

    def test_sipp_exact_via_row_scaling(self):
        # Unnormalized rows differ from the orthogonal member by a positive
        # diagonal factor, under which the SIPP is invariant.
        for n in range(2, 7):
            assert has_sipp(hessenberg_orthogonal(n)).verdict is Verdict.HAS_SIPP

    def test_normalized_is_orthogonal(self):
        q = hessenberg_orthogonal(6, normalized=True)
        assert orthogonality_residual(q) <= 1e-12

    def test_too_small(self):
        with pytest.raises(ShapeError):
            hessenberg_orthogonal(1)


class TestGivens:
    def test_zero_angle_is_identity(self):
        assert givens(GivensSpec(3, 1, 2, 0.0)) == Mat.identity(3).to_float()

    def test_quarter_turn(self):
        g = givens(GivensSpec(2, 1, 2, math.pi / 2))
        assert np.allclose(g.to_numpy(), [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)

    def test_pre_post_match_matrix_products(self):
        rng = np.random.default_rng(0)
        a = Mat.from_numpy(rng.standard_normal((4, 4)))
        spec = GivensSpec(4, 2, 4, 0.37)
        g = givens(spec)
        assert np.allclose(pre_apply(spec, a).to_numpy(), (g @ a).to_numpy())
        assert np.allclose(post_apply(spec, a).to_numpy(), (a @ g).to_numpy())

    def test_untouched_entries_bit_identical(self):
        rng = np.random.default_rng(1)
        a = Mat.from_numpy(rng.standard_normal((5, 5)))
        spec = GivensSpec(5, 2, 3, 1.1)
        b = pre_apply(spec, a)
        for i in (0, 3, 4):
            assert b.row(i) == a.row(i)
        c = post_apply(spec, a)
        for i in range(5):
            for j in (0, 3, 4):
                assert c[i, j] == a[i, j]

    def test_conference_rotation_preserves_pattern(self):
        a = gallery.symmetric_hollow6()
        spec = GivensSpec(6, 1, 2, math.pi / 6)
        b = post_apply(spec, pre_apply(spec, a))
        assert sign_of(b) == sign_of(a)
        assert orthogonality_residual(b) <= 1e-12

    def test_bad_plane(self):
        with pytest.raises(ShapeError):
            GivensSpec(3, 2, 2, 0.1)


class TestHollow:
    def test_base_orders(self):
        h4 = hollow_orthogonal(4)
        s = 1.0 / math.sqrt(3.0)
        expected = [[0, s, s, s], [s, 0, -s, s], [s, s, 0, -s], [s, -s, s, 0]]
        assert np.allclose(h4.to_numpy(), expected, atol=1e-15)
        h5 = hollow_orthogonal(5)
        a = (-1.0 + math.sqrt(3.0)) / 4.0
        assert h5[1, 2] == pytest.approx(a)
        assert orthogonality_residual(h5) <= 1e-12

    def test_nonexistent_orders(self):
        for n in (1, 2, 3):
            with pytest.raises(HollowOrderError):
                hollow_orthogonal(n)

    def test_merged_orders_are_hollow_orthogonal_sipp(self):
        for n in (6, 7, 8):
            q = hollow_orthogonal(n)
            assert q.shape == (n, n)
            assert orthogonality_residual(q) <= 1e-10
            assert hollow_sipp_by_signature(q).verdict is Verdict.HAS_SIPP
            assert has_sipp(q).verdict is Verdict.HAS_SIPP


class TestMerges:
    def test_merge_two_order4(self):
        q = merge_hollow(hollow_orthogonal(4), hollow_orthogonal(4))
        assert q.shape == (6, 6)
        assert orthogonality_residual(q) <= 1e-10

    def test_merge_4_and_5(self):
        q = merge_hollow(hollow_orthogonal(4), hollow_orthogonal(5))
        assert q.shape == (7, 7)
        assert orthogonality_residual(q) <= 1e-10

    def test_merge_rejects_non_hollow(self):
        with pytest.raises(NotHollowError):
            merge_hollow(Mat.identity(3).to_float(), hollow_orthogonal(4))

    def test_general_merge_specializes_to_hollow(self):
        m, n = hollow_orthogonal(4), hollow_orthogonal(5)
        assert merge_row_orthogonal(m, n) == merge_hollow(m, n)

    def test_general_merge_of_sipp_inputs(self):
        m = hollow_orthogonal(5)
        q = merge_row_orthogonal(m, m)
        assert q.shape == (8, 8)
        assert orthogonality_residual(q) <= 1e-10
        assert has_sipp(q).verdict is Verdict.HAS_SIPP

    def test_general_merge_rejects_zero_in_border(self):
        bad = Mat.float_matrix([[1.0, 0.0, 0.0],
                                [0.0, 1.0, 0.0],
                                [0.0, 0.0, 0.0]])
        with pytest.raises((StructureError, Exception)):
            merge_row_orthogonal(bad, hollow_orthogonal(4))


VERTEX = Mat.exact_matrix([[Fraction(x, 3) for x in row]
                           for row in ((1, 2, 2), (2, 1, -2), (2, -2, 1))])


class TestBlockAssemblies:
    def test_oblock_instance_has_sipp(self):
        a = VERTEX.take_rows([0, 1])
        avec = VERTEX.row(2)
        n23 = VERTEX.take_rows([0, 1])
        b = Mat.exact_matrix([[n23[i, 0] * avec[j] for j in range(3)]
                              for i in range(2)])
        c = Mat.exact_matrix([[n23[i, j] for j in (1, 2)] for i in range(2)])
        q = block_lower_triangular(a, b, c)
        assert q.shape == (4, 5)
        assert has_sipp(q).verdict is Verdict.HAS_SIPP

    def test_oblock_rejects_zero_b(self):
        a = VERTEX.take_rows([0, 1])
        with pytest.raises(StructureError):
            block_lower_triangular(a, Mat.zeros(2, 3), Mat.identity(2))

    def test_bordered_both_sipp_gives_sipp(self):
        q = bordered_block(VERTEX, VERTEX)
        assert q.shape == (5, 5)
        assert orthogonality_residual(q) == 0.0
        assert has_sipp(q).verdict is Verdict.HAS_SIPP

    def test_bordered_inherits_failure(self):
        # The left factor lacks the SIPP, so the bordered matrix must too.
        m = gallery.obstructed_orthogonal()
        assert has_sipp(m).verdict is Verdict.NOT_SIPP
        q = bordered_block(m, VERTEX.to_float())
        assert q.shape == (9, 9)
        assert orthogonality_residual(q) <= 1e-10
        assert has_sipp(q).verdict is Verdict.NOT_SIPP


class TestPadColumns:
    def test_identity_padding_keeps_not_sipp(self):
        padded = pad_columns(Mat.identity(2), 4)
        assert padded.shape == (2, 4)
        assert has_sipp(padded).verdict is has_sipp(Mat.identity(2)).verdict

    def test_biplane_padding_keeps_sipp(self):
        padded = pad_columns(gallery.biplane_orthogonal(), 9)
        assert has_sipp(padded).verdict is Verdict.HAS_SIPP

    def test_requires_growth(self):
        with pytest.raises(ShapeError):
            pad_columns(Mat.identity(2), 2)


class TestCayley:
    def test_zero_skew_is_identity(self):
        assert cayley(Mat.zeros(3, 3), Fraction(1, 2)) == Mat.identity(3)

    def test_2x2_quarter_turn(self):
        k = Mat.exact_matrix([[0, 1], [-1, 0]])
        assert cayley(k, 1) == Mat.exact_matrix([[0, -1], [1, 0]])

    def test_random_skew_orthogonal_det_one(self):
        rng = random.Random(4)
        for n in (3, 5, 8):
            for eps in (Fraction(1, 8), Fraction(1, 64)):
                k = random_skew(rng, n)
                p = cayley(k, eps)
                assert determinant(p) == 1
                assert p.T @ p == Mat.identity(n)

    def test_rejects_non_skew(self):
        with pytest.raises(StructureError):
            cayley(Mat.identity(2), 1)
