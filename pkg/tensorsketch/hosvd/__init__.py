"""Sketch-based higher-order SVD."""

from .estimators import (
    hosvd_exact,
    hosvd_direct,
    hosvd_product,
    hosvd_from_sketch,
    hosvd_all_modes,
    sketch_product_matrix,
)
