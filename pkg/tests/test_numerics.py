import numpy as np
import pytest

from synrep.errors import (
    DegenerateInput,
    NonFiniteEvaluation,
    NonFiniteInput,
)
from synrep.numerics import check_gradient, make_rng, pca_2d, svd


def reconstruction_error(a, u, s, v):
    return np.abs(u @ np.diag(s) @ v.T - a).max()


def orthonormality_error(u):
    k = u.shape[1]
    return np.abs(u.T @ u - np.eye(k)).max()


class TestSvd:
    def test_diagonal(self):
        u, s, v = svd(np.diag([3.0, 4.0]))
        assert np.allclose(s, [4.0, 3.0], atol=1e-12)

    def test_identity(self):
        _, s, _ = svd(np.eye(3))
        assert np.allclose(s, [1.0, 1.0, 1.0], atol=1e-14)

    def test_rank_one(self):
        a = np.ones((2, 2))
        u, s, v = svd(a)
        assert abs(s[0] - 2.0) <= 1e-12 and abs(s[1]) <= 1e-12
        assert reconstruction_error(a, u, s, v) <= 1e-12
        assert orthonormality_error(u) <= 1e-12
        assert orthonormality_error(v) <= 1e-12

    def test_zero_matrix(self):
        a = np.zeros((3, 2))
        u, s, v = svd(a)
        assert np.all(s == 0.0)
        assert orthonormality_error(u) <= 1e-12
        assert orthonormality_error(v) <= 1e-12

    @pytest.mark.parametrize("shape", [(1, 1), (1, 5), (5, 1), (4, 7), (7, 4)])
    def test_shapes(self, shape):
        rng = make_rng(11)
        a = rng.normal(size=shape)
        u, s, v = svd(a)
        k = min(shape)
        assert u.shape == (shape[0], k) and v.shape == (shape[1], k)
        scale = max(1.0, np.linalg.norm(a))
        assert reconstruction_error(a, u, s, v) <= 1e-10 * scale
        assert orthonormality_error(u) <= 1e-10
        assert orthonormality_error(v) <= 1e-10
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)

    def test_against_lapack_singular_values(self):
        rng = make_rng(5)
        for _ in range(100):
            m = int(rng.integers(1, 12))
            n = int(rng.integers(1, 12))
            a = rng.normal(size=(m, n)) * float(rng.uniform(0.01, 10))
            s_ours = svd(a)[1]
            s_ref = np.linalg.svd(a, compute_uv=False)
            assert np.allclose(s_ours, s_ref, rtol=1e-10, atol=1e-12 * max(1, s_ref[0]))

    def test_rank_deficient_random(self):
        rng = make_rng(19)
        left = rng.normal(size=(8, 2))
        right = rng.normal(size=(2, 5))
        a = left @ right  # rank 2 in an 8x5 matrix
        u, s, v = svd(a)
        scale = max(1.0, np.linalg.norm(a))
        assert reconstruction_error(a, u, s, v) <= 1e-10 * scale
        assert orthonormality_error(u) <= 1e-10
        assert s[2] <= 1e-12 * scale

    def test_reconstruction_sweep(self):
        rng = make_rng(7)
        for _ in range(200):
            m = int(rng.integers(1, 31))
            n = int(rng.integers(1, 31))
            a = rng.normal(size=(m, n))
            u, s, v = svd(a)
            scale = max(1.0, np.linalg.norm(a))
            assert reconstruction_error(a, u, s, v) <= 1e-10 * scale
            assert orthonormality_error(u) <= 1e-10
            assert orthonormality_error(v) <= 1e-10

    def test_nuclear_vs_frobenius(self):
        rng = make_rng(23)
        # Rank one: equality.
        a = np.outer(rng.normal(size=4), rng.normal(size=3))
        s = svd(a)[1]
        assert abs(s.sum() - np.linalg.norm(a)) <= 1e-10
        # Rank >= 2: strictly larger.
        b = rng.normal(size=(4, 4))
        s = svd(b)[1]
        assert s.sum() > np.linalg.norm(b) + 1e-6

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteInput):
            svd(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_rejects_empty(self):
        with pytest.raises(DegenerateInput):
            svd(np.zeros((0, 3)))


class TestPca2d:
    def test_collinear_points(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        scores = pca_2d(pts)
        assert np.abs(scores[:, 1]).max() <= 1e-10

    def test_preserves_2d_geometry(self):
        rng = make_rng(3)
        pts = rng.normal(size=(10, 2))
        pts -= pts.mean(axis=0)
        scores = pca_2d(pts)
        before = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        after = np.linalg.norm(scores[:, None] - scores[None, :], axis=2)
        assert np.abs(before - after).max() <= 1e-9

    def test_identical_rows_give_zero_scores(self):
        pts = np.tile([2.0, -1.0, 3.0], (4, 1))
        assert np.abs(pca_2d(pts)).max() == 0.0

    def test_translation_invariance(self):
        rng = make_rng(13)
        pts = rng.normal(size=(8, 5))
        scores = pca_2d(pts)
        shifted = pca_2d(pts + np.array([10.0, -3.0, 0.5, 2.0, 7.0]))
        assert np.abs(scores - shifted).max() <= 1e-9

    def test_score_variance_matches_spectrum(self):
        rng = make_rng(29)
        pts = rng.normal(size=(12, 6))
        centered = pts - pts.mean(axis=0)
        s = svd(centered)[1]
        scores = pca_2d(pts)
        total_var = (scores ** 2).sum() / (pts.shape[0] - 1)
        assert abs(total_var - (s[0] ** 2 + s[1] ** 2) / (pts.shape[0] - 1)) <= 1e-9

    def test_deterministic_signs(self):
        rng = make_rng(31)
        pts = rng.normal(size=(9, 4))
        a = pca_2d(pts)
        b = pca_2d(pts.copy())
        assert np.array_equal(a, b)

    def test_too_few_rows(self):
        with pytest.raises(DegenerateInput):
            pca_2d(np.ones((1, 3)))


class TestCheckGradient:
    def test_quadratic(self):
        rng = make_rng(1)
        x = rng.normal(size=(3, 4))
        err = check_gradient(lambda m: float((m * m).sum()), 2 * x, x, eps=1e-5)
        assert err <= 1e-6

    def test_wrong_gradient_detected(self):
        # Entries of magnitude >= 1 make the expected relative error 1/3:
        # claimed 4x against true 2x under |a-n| / (|a|+|n|).
        x = np.array([[1.5, -2.0], [1.0, 3.0]])
        err = check_gradient(lambda m: float((m * m).sum()), 4 * x, x, eps=1e-5)
        assert abs(err - 1.0 / 3.0) <= 0.05

    def test_constant_function(self):
        x = np.ones((2, 2))
        err = check_gradient(lambda m: 7.0, np.zeros((2, 2)), x, eps=1e-4)
        assert err <= 1e-9

    def test_eps_validation(self):
        x = np.ones((1, 1))
        with pytest.raises(ValueError):
            check_gradient(lambda m: 0.0, x, x, eps=0.5)

    def test_non_finite_evaluation(self):
        x = np.zeros((1, 1))
        with pytest.raises(NonFiniteEvaluation):
            check_gradient(lambda m: float("nan"), x, x, eps=1e-5)

    def test_vector_input(self):
        v = np.array([1.0, 2.0, 3.0])
        err = check_gradient(lambda m: float((m ** 2).sum()), 2 * v, v, eps=1e-5)
        assert err <= 1e-6


class TestRng:
    def test_same_seed_same_stream(self):
        a = make_rng(99).uniform(size=16)
        b = make_rng(99).uniform(size=16)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        assert not np.array_equal(make_rng(1).uniform(size=8), make_rng(2).uniform(size=8))
