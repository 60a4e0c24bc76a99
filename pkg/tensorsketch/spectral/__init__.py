"""Spectral norms, singular subspaces and eigengap diagnostics."""

from .linalg import (
    SVDResult,
    matrix_svd,
    top_left_singular_vectors,
    subspace_distance,
    eigengap,
    is_gap_degenerate,
    spectral_norm,
    davis_kahan_bound,
    high_accuracy_threshold,
)
from .tensor_norm import tensor_spectral_norm, stable_rank, multilinear_form
