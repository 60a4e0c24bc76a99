"""
Tests for the planted Tucker and matrix generators.
"""

import numpy as np
import pytest

from tensorsketch.core.exceptions import SpecError
from tensorsketch.generators import core_diagonal, gen_matrix, gen_tucker
from tensorsketch.hosvd import hosvd_exact
from tensorsketch.models.report_models import TuckerSpec
from tensorsketch.spectral import matrix_svd, subspace_distance, top_left_singular_vectors
from tensorsketch.tensors.ops import frobenius_norm, matricize


class TestGenTucker:
    def test_rank_one_planted_factors(self):
        spec = TuckerSpec(dims=[5, 6, 7], ranks=[1, 1, 1], noise_sigma=0.0, seed=1)
        A, planted = gen_tucker(spec)
        assert A.shape.dims == (5, 6, 7)
        for j, basis in enumerate(planted, start=1):
            assert basis.rank == 1
            assert subspace_distance(hosvd_exact(A, j, 1).basis, basis) <= 1e-8

    def test_unfolding_spectrum_follows_core(self, planted_spec):
        A, _ = gen_tucker(planted_spec)
        s = matrix_svd(matricize(A, 2)).singular_values
        np.testing.assert_allclose(s[:3], [1.0, 0.5, 0.0], atol=1e-12)
        np.testing.assert_allclose(core_diagonal(planted_spec), [1.0, 0.5])

    @pytest.mark.parametrize("dims, ranks, decay", [
        ([12, 10, 8], [2, 2, 2], 0.5),
        ([6, 7, 5, 4], [3, 2, 4, 3], 0.8),
        ([9, 11], [4, 4], 0.3),
    ])
    def test_noiseless_frobenius_norm(self, dims, ranks, decay):
        spec = TuckerSpec(dims=dims, ranks=ranks, core_decay=decay, noise_sigma=0.0, seed=5)
        A, _ = gen_tucker(spec)
        expected = sum(decay ** (2 * t) for t in range(min(ranks)))
        assert frobenius_norm(A) ** 2 == pytest.approx(expected, abs=1e-10)

    def test_deterministic(self, planted_spec):
        first, _ = gen_tucker(planted_spec)
        second, _ = gen_tucker(planted_spec)
        np.testing.assert_array_equal(first.values, second.values)

    def test_noise_scale(self):
        spec = TuckerSpec(dims=[20, 20, 20], ranks=[1, 1, 1], noise_sigma=0.5, seed=2)
        noisy, _ = gen_tucker(spec)
        clean, _ = gen_tucker(spec.model_copy(update={"noise_sigma": 0.0}))
        # noise Frobenius norm is about noise_sigma
        assert np.linalg.norm(noisy.values - clean.values) == pytest.approx(0.5, rel=0.05)

    @pytest.mark.parametrize("spec", [
        {"dims": [3, 3], "ranks": [4, 1]},
        {"dims": [3, 3], "ranks": [1]},
        {"dims": [3, 3], "ranks": [1, 1], "core_decay": 0.0},
        {"dims": [3, 3], "ranks": [1, 1], "noise_sigma": -1.0},
    ])
    def test_invalid_spec(self, spec):
        with pytest.raises(SpecError):
            gen_tucker(spec)


class TestGenMatrix:
    def test_rank_one(self):
        M, planted = gen_matrix(6, 9, 1, seed=3)
        s = matrix_svd(M).singular_values
        assert s[0] == pytest.approx(1.0)
        assert s[1] == pytest.approx(0.0, abs=1e-12)
        assert planted.rank == 1

    def test_decaying_spectrum(self):
        M, _ = gen_matrix(10, 1000, 3, decay=0.5, seed=4)
        s = matrix_svd(M).singular_values
        np.testing.assert_allclose(s[:4], [1.0, 0.5, 0.25, 0.0], atol=1e-12)

    def test_noisy_recovery(self):
        M, planted = gen_matrix(10, 200, 2, decay=0.5, noise_sigma=0.01, seed=5)
        assert subspace_distance(top_left_singular_vectors(M, 2), planted) <= 0.05

    def test_invalid(self):
        with pytest.raises(SpecError):
            gen_matrix(3, 3, 5)
