"""
Mode-j singular subspace estimation: exact HOSVD, the direct estimator
from one sketch, and the product estimator from two independent sketches.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np

from tensorsketch.core.exceptions import RankError
from tensorsketch.core.rng import derive_seed, product_child_seeds
from tensorsketch.models.report_models import HosvdDiagnostics, HosvdMethod, HosvdResult, SketchReport
from tensorsketch.models.tensor_models import DenseTensor, SparseTensor
from tensorsketch.sketch.sparsifier import sparsify
from tensorsketch.spectral.linalg import (
    eigengap, is_gap_degenerate, top_left_singular_vectors
)
from tensorsketch.tensors.ops import matricize, matricize_sparse


logger = logging.getLogger(__name__)


def _check_rank(A: DenseTensor, j: int, r: int) -> None:
    # matricize validates the mode; rank is checked against d_j
    d_j = A.shape.dims[j - 1] if 1 <= j <= A.shape.order else None
    if d_j is not None and not 1 <= r <= d_j:
        raise RankError(f"rank {r} outside [1, {d_j}] for mode {j}")


def _exact_diagnostics(M: np.ndarray, r: int, reports: Sequence[SketchReport] = ()) -> HosvdDiagnostics:
    limit = min(M.shape)
    s = np.linalg.svd(M, compute_uv=False)
    gap = eigengap(M, r) if r <= limit else 0.0
    sigma_1 = float(s[0]) if s.size else 0.0
    return HosvdDiagnostics(
        eigengap=gap,
        gap_degenerate=is_gap_degenerate(gap, sigma_1),
        sketch_reports=list(reports),
    )


def hosvd_exact(A: DenseTensor, j: int, r: int) -> HosvdResult:
    """Top-r left singular vectors of the mode-j unfolding of ``A``."""
    _check_rank(A, j, r)
    M = matricize(A, j).array
    basis = top_left_singular_vectors(M, r)
    return HosvdResult(j, r, basis, HosvdMethod.EXACT, _exact_diagnostics(M, r))


def hosvd_from_sketch(A: DenseTensor, sketch: SparseTensor, report: SketchReport, j: int, r: int) -> HosvdResult:
    """Direct estimate from an already computed sketch of ``A``."""
    _check_rank(A, j, r)
    M = matricize(A, j).array
    M_hat = matricize_sparse(sketch, j).toarray()
    basis = top_left_singular_vectors(M_hat, r)
    return HosvdResult(j, r, basis, HosvdMethod.DIRECT, _exact_diagnostics(M, r, [report]))


def hosvd_direct(A: DenseTensor, n: int, j: int, r: int, seed: int) -> HosvdResult:
    """Top-r left singular vectors of the mode-j unfolding of one sketch."""
    _check_rank(A, j, r)
    sketch, report = sparsify(A, n, seed)
    return hosvd_from_sketch(A, sketch, report, j, r)


def sketch_product_matrix(first: SparseTensor, second: SparseTensor, j: int) -> np.ndarray:
    """d_j x d_j product M_j(first) M_j(second)^T, computed sparse."""
    left = matricize_sparse(first, j)
    right = matricize_sparse(second, j)
    return np.asarray((left @ right.T).toarray(), dtype=np.float64)


def hosvd_product(A: DenseTensor, n: int, j: int, r: int, seed: int) -> HosvdResult:
    """
    Top-r left singular vectors of M_j(S_1) M_j(S_2)^T for two independent
    sketches S_1, S_2 of ``A``.

    The sketches use the child seeds of ``seed`` given by
    :func:`tensorsketch.core.rng.product_child_seeds`.
    """
    _check_rank(A, j, r)
    seed_1, seed_2 = product_child_seeds(seed)
    first, report_1 = sparsify(A, n, seed_1)
    second, report_2 = sparsify(A, n, seed_2)

    product = sketch_product_matrix(first, second, j)
    basis = top_left_singular_vectors(product, r)

    M = matricize(A, j).array
    diagnostics = _exact_diagnostics(M, r, [report_1, report_2])
    diagnostics.product_eigengap = eigengap(M @ M.T, r)
    logger.debug(f"Product estimate for mode {j}, rank {r}, n={n}: child seeds {seed_1}, {seed_2}")
    return HosvdResult(j, r, basis, HosvdMethod.PRODUCT, diagnostics)


def hosvd_all_modes(
    A: DenseTensor,
    ranks: Sequence[int],
    method: Union[HosvdMethod, str] = HosvdMethod.EXACT,
    n: Optional[int] = None,
    seed: int = 0,
) -> List[HosvdResult]:
    """Subspace estimates for every mode; mode j uses the seed derived from (seed, j)."""
    method = HosvdMethod(method)
    if len(ranks) != A.shape.order:
        raise RankError(f"need {A.shape.order} ranks, got {len(ranks)}")

    results = []
    for j, r in enumerate(ranks, start=1):
        if method == HosvdMethod.EXACT:
            results.append(hosvd_exact(A, j, r))
        elif method == HosvdMethod.DIRECT:
            results.append(hosvd_direct(A, n, j, r, derive_seed(seed, j)))
        else:
            results.append(hosvd_product(A, n, j, r, derive_seed(seed, j)))
    return results
