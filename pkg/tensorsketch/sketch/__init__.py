"""Entry-wise tensor sparsification and budget diagnostics."""

from tensorsketch.core.rng import per_entry_uniform
from .sparsifier import (
    classify_entry,
    keep_probability,
    keep_probabilities,
    expected_nnz,
    sparsify,
    sparsify_baseline_zero_small,
)
