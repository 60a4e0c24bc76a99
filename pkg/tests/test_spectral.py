"""
Tests for matrix spectral tools and the tensor spectral norm estimator.
"""

import math

import numpy as np
import pytest

from tensorsketch.core.exceptions import (
    ContractViolationError, RankError, ShapeError, UndefinedQuantityError
)
from tensorsketch.models.tensor_models import DenseTensor, FactorBasis
from tensorsketch.spectral import (
    davis_kahan_bound, eigengap, high_accuracy_threshold, is_gap_degenerate, matrix_svd,
    spectral_norm, stable_rank, subspace_distance, tensor_spectral_norm, top_left_singular_vectors,
)
from tensorsketch.tensors.ops import sparsify_exact

from tests.helpers import outer, superdiagonal


class TestMatrixSvd:
    def test_diagonal(self):
        np.testing.assert_allclose(matrix_svd(np.diag([3.0, 1.0])).singular_values, [3.0, 1.0])

    def test_zero_matrix(self):
        np.testing.assert_array_equal(matrix_svd(np.zeros((4, 3))).singular_values, [0.0, 0.0, 0.0])

    def test_reconstruction(self, rng):
        M = rng.standard_normal((5, 7))
        result = matrix_svd(M)
        np.testing.assert_allclose(result.left * result.singular_values @ result.right.T, M, atol=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(ShapeError):
            matrix_svd(np.array([[1.0, np.inf]]))

    def test_singular_values_match_gram_eigenvalues(self, rng):
        M = rng.standard_normal((6, 40))
        gram = np.sort(np.linalg.eigvalsh(M @ M.T))[::-1]
        np.testing.assert_allclose(matrix_svd(M).singular_values, np.sqrt(np.clip(gram, 0.0, None)), atol=1e-8)


class TestTopLeftSingularVectors:
    def test_diagonal_rank_two(self):
        basis = top_left_singular_vectors(np.diag([3.0, 2.0, 1.0]), 2)
        assert subspace_distance(basis, FactorBasis(np.eye(3)[:, :2])) <= 1e-12
        np.testing.assert_allclose(basis.singular_values, [3.0, 2.0])

    def test_rank_one_matrix(self):
        x = np.array([1.0, -2.0, 2.0])
        y = np.array([0.5, 1.0])
        basis = top_left_singular_vectors(np.outer(x, y), 1)
        np.testing.assert_allclose(np.abs(basis.columns[:, 0]), np.abs(x) / 3.0, atol=1e-12)

    def test_rank_above_column_count(self, rng):
        basis = top_left_singular_vectors(rng.standard_normal((5, 2)), 4)
        assert basis.rank == 4
        assert basis.singular_values[3] == 0.0

    def test_rank_out_of_range(self):
        with pytest.raises(RankError):
            top_left_singular_vectors(np.eye(3), 4)

    def test_degenerate_gap_flagged(self):
        assert top_left_singular_vectors(np.eye(3), 1).gap_degenerate
        assert not top_left_singular_vectors(np.diag([2.0, 1.0]), 1).gap_degenerate

    def test_projector_matches_gram_eigenvectors(self, rng):
        M = rng.standard_normal((10, 50))
        _, vectors = np.linalg.eigh(M @ M.T)
        expected = vectors[:, -3:] @ vectors[:, -3:].T
        basis = top_left_singular_vectors(M, 3)
        assert np.linalg.norm(basis.projector() - expected, ord=2) <= 1e-7


class TestSubspaceDistance:
    def test_identical(self, rng):
        U = FactorBasis(np.linalg.qr(rng.standard_normal((6, 3)))[0])
        assert subspace_distance(U, U) <= 1e-12

    def test_orthogonal_lines(self):
        assert subspace_distance(FactorBasis(np.array([1.0, 0.0])), FactorBasis(np.array([0.0, 1.0]))) == 1.0

    def test_rotation_invariant(self, rng):
        U = np.linalg.qr(rng.standard_normal((8, 3)))[0]
        Q = np.linalg.qr(rng.standard_normal((3, 3)))[0]
        assert subspace_distance(FactorBasis(U), FactorBasis(U @ Q)) <= 1e-12

    def test_matches_projector_difference(self, rng):
        U = FactorBasis(np.linalg.qr(rng.standard_normal((7, 2)))[0])
        V = FactorBasis(np.linalg.qr(rng.standard_normal((7, 2)))[0])
        expected = np.linalg.norm(U.projector() - V.projector(), ord=2)
        assert subspace_distance(U, V) == pytest.approx(expected, abs=1e-12)

    def test_symmetric(self, rng):
        for r in (1, 2, 4):
            U = FactorBasis(np.linalg.qr(rng.standard_normal((9, r)))[0])
            V = FactorBasis(np.linalg.qr(rng.standard_normal((9, r)))[0])
            assert subspace_distance(U, V) == pytest.approx(subspace_distance(V, U), abs=1e-12)

    def test_rank_mismatch(self):
        with pytest.raises(ShapeError):
            subspace_distance(FactorBasis(np.eye(3)[:, :1]), FactorBasis(np.eye(3)[:, :2]))


class TestEigengap:
    def test_examples(self):
        assert eigengap(np.diag([3.0, 1.0]), 1) == pytest.approx(2.0)
        assert eigengap(np.diag([5.0, 4.0, 0.0]), 2) == pytest.approx(4.0)

    def test_identity_is_degenerate(self):
        gap = eigengap(np.eye(3), 1)
        assert gap == 0.0
        assert is_gap_degenerate(gap, 1.0)

    def test_full_rank_uses_zero_next_value(self):
        assert eigengap(np.diag([3.0, 2.0]), 2) == pytest.approx(2.0)

    @pytest.mark.parametrize("r", [0, 3])
    def test_rank_out_of_range(self, r):
        with pytest.raises(RankError):
            eigengap(np.eye(2), r)


class TestDavisKahan:
    def test_bound_holds_for_random_perturbations(self, rng):
        for _ in range(200):
            M = rng.standard_normal((8, 12))
            r = int(rng.integers(1, 4))
            gap = eigengap(M, r)
            delta = rng.standard_normal(M.shape)
            # perturbation norm strictly inside half the gap
            delta *= rng.uniform(0.05, 0.95) * gap / (2.0 * spectral_norm(delta))
            M_hat = M + delta
            assert gap > 2.0 * spectral_norm(delta)

            exact = top_left_singular_vectors(M, r)
            estimate = top_left_singular_vectors(M_hat, r)
            assert subspace_distance(exact, estimate) <= davis_kahan_bound(M, M_hat, r) + 1e-12

    def test_zero_gap_gives_infinity(self):
        assert davis_kahan_bound(np.eye(2), np.eye(2) * 1.1, 1) == math.inf


class TestTensorSpectralNorm:
    def test_rank_one(self, rank_one_tensor):
        A, (u, v, w) = rank_one_tensor
        estimate = tensor_spectral_norm(A, seed=1)
        expected = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
        assert estimate.value == pytest.approx(expected, rel=1e-10)

    def test_matrix_matches_svd(self, rng):
        for i in range(100):
            M = rng.standard_normal((8, 8))
            estimate = tensor_spectral_norm(DenseTensor.from_array(M), restarts=5, max_iters=500, tol=1e-14, seed=i)
            assert estimate.value == pytest.approx(spectral_norm(M), abs=1e-8)

    @pytest.mark.parametrize("scale", [1e-200, 1e200])
    def test_extreme_scales(self, rank_one_tensor, scale):
        A, (u, v, w) = rank_one_tensor
        scaled = DenseTensor.from_array(A.array * scale)
        estimate = tensor_spectral_norm(scaled, seed=1)
        expected = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w) * scale
        assert estimate.value == pytest.approx(expected, rel=1e-10, abs=0.0)
        assert all(np.isfinite(estimate.history))
        assert stable_rank(scaled, estimate) == pytest.approx(1.0, abs=1e-8)

    def test_orthogonal_diagonal(self):
        A = DenseTensor.from_array(superdiagonal([2.0, 1.0]))
        assert tensor_spectral_norm(A).value == pytest.approx(2.0, abs=1e-6)

    def test_zero_tensor(self):
        estimate = tensor_spectral_norm(DenseTensor.zeros((3, 3, 3)))
        assert estimate.value == 0.0
        assert estimate.converged

    def test_sparse_input(self, rank_one_tensor):
        A, _ = rank_one_tensor
        dense = tensor_spectral_norm(A, seed=2)
        sparse = tensor_spectral_norm(sparsify_exact(A), seed=2)
        assert sparse.value == pytest.approx(dense.value, rel=1e-12)

    def test_lower_bound_and_monotone_sweeps(self, rng):
        A = rng.standard_normal((5, 6, 4))
        estimate = tensor_spectral_norm(A, restarts=5, seed=9)
        history = np.array(estimate.history)
        assert np.all(np.diff(history) >= -1e-12 * estimate.value)
        for factor in estimate.unit_factors:
            assert abs(np.linalg.norm(factor) - 1.0) <= 1e-12
        # attained value never exceeds the Frobenius norm
        assert estimate.value <= np.linalg.norm(A) + 1e-12
        attained = np.einsum("ijk,i,j,k->", A, *[np.array(f) for f in estimate.unit_factors])
        assert attained == pytest.approx(estimate.value, rel=1e-10)

    def test_more_restarts_never_worse(self, rng):
        A = rng.standard_normal((4, 4, 4))
        few = tensor_spectral_norm(A, restarts=1, seed=3)
        many = tensor_spectral_norm(A, restarts=8, seed=3)
        assert many.value >= few.value

    def test_deterministic(self, rng):
        A = rng.standard_normal((4, 5, 3))
        assert tensor_spectral_norm(A, seed=7).value == tensor_spectral_norm(A, seed=7).value

    @pytest.mark.parametrize("kwargs", [{"restarts": 0}, {"max_iters": 0}, {"tol": 0.0}])
    def test_invalid_settings(self, kwargs):
        with pytest.raises(ContractViolationError):
            tensor_spectral_norm(np.ones((2, 2, 2)), **kwargs)


class TestStableRank:
    def test_rank_one(self, rank_one_tensor):
        A, _ = rank_one_tensor
        assert stable_rank(A, tensor_spectral_norm(A)) == pytest.approx(1.0, abs=1e-8)

    def test_identity_matrix(self):
        A = DenseTensor.from_array(np.eye(5))
        assert stable_rank(A, tensor_spectral_norm(A)) == pytest.approx(5.0)

    def test_orthogonal_diagonal(self):
        A = DenseTensor.from_array(superdiagonal([2.0, 1.0]))
        assert stable_rank(A, tensor_spectral_norm(A)) == pytest.approx(1.25, abs=1e-5)

    def test_zero_norm(self):
        A = DenseTensor.zeros((2, 2))
        with pytest.raises(UndefinedQuantityError):
            stable_rank(A, tensor_spectral_norm(A))


def test_high_accuracy_threshold():
    assert high_accuracy_threshold((20, 20, 20), 1.0) == pytest.approx(20 ** -0.5)
    assert high_accuracy_threshold((10, 30), 2.0) == pytest.approx(2.0)
