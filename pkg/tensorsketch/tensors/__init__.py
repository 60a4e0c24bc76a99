"""Tensor index arithmetic, matricization and conversions."""

from .ops import (
    linear_index,
    multi_index,
    matricize,
    unmatricize,
    matricize_sparse,
    frobenius_norm,
    scaled_norm,
    densify,
    sparsify_exact,
)
