"""
Matrix spectral tools: SVD, top singular subspaces, eigengaps and
projector distances.
"""

import math
from typing import NamedTuple, Optional, Union

import numpy as np

from tensorsketch.config import settings
from tensorsketch.core.exceptions import RankError, ShapeError
from tensorsketch.models.tensor_models import FactorBasis, Matrix, as_shape


MatrixLike = Union[Matrix, np.ndarray]


class SVDResult(NamedTuple):
    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray


def _as_array(M: MatrixLike) -> np.ndarray:
    array = M.array if isinstance(M, Matrix) else np.asarray(M, dtype=np.float64)
    if array.ndim != 2:
        raise ShapeError(f"expected a matrix, got an array with {array.ndim} dimensions")
    if not np.all(np.isfinite(array)):
        raise ShapeError("matrix entries must be finite")
    return array


def _singular_values(array: np.ndarray) -> np.ndarray:
    return np.linalg.svd(array, compute_uv=False)


def matrix_svd(M: MatrixLike) -> SVDResult:
    """Thin SVD ``M = U diag(s) V^T`` with ``s`` descending."""
    array = _as_array(M)
    left, s, right_t = np.linalg.svd(array, full_matrices=False)
    return SVDResult(s, left, right_t.T)


def is_gap_degenerate(gap: float, sigma_1: float, rtol: Optional[float] = None) -> bool:
    """True when ``gap`` is negligible relative to the top singular value."""
    rtol = settings.gap_degenerate_rtol if rtol is None else rtol
    return bool(gap <= rtol * sigma_1)


def _gap_from_values(s: np.ndarray, r: int) -> float:
    s_next = s[r] if r < s.size else 0.0
    s_r = s[r - 1] if r - 1 < s.size else 0.0
    return max(0.0, float(s_r - s_next))


def top_left_singular_vectors(M: MatrixLike, r: int) -> FactorBasis:
    """Left singular vectors of the ``r`` largest singular values."""
    array = _as_array(M)
    rows, cols = array.shape
    if not 1 <= r <= rows:
        raise RankError(f"rank {r} outside [1, {rows}]")

    # beyond min(rows, cols) the extra columns span the null space
    full = r > min(rows, cols)
    left, s, _ = np.linalg.svd(array, full_matrices=full)
    sigma = np.zeros(r)
    sigma[: min(r, s.size)] = s[:r]

    sigma_1 = float(s[0]) if s.size else 0.0
    degenerate = is_gap_degenerate(_gap_from_values(s, r), sigma_1)
    return FactorBasis(left[:, :r], singular_values=sigma, gap_degenerate=degenerate)


def eigengap(M: MatrixLike, r: int) -> float:
    """sigma_r(M) - sigma_{r+1}(M), with sigma_{r+1} = 0 at full rank."""
    array = _as_array(M)
    limit = min(array.shape)
    if not 1 <= r <= limit:
        raise RankError(f"rank {r} outside [1, {limit}]")
    return _gap_from_values(_singular_values(array), r)


def subspace_distance(U: FactorBasis, V: FactorBasis) -> float:
    """
    Spectral distance ||U U^T - V V^T|| between equal-rank subspaces.

    Computed as the largest singular value of (I - U U^T) V, which equals
    sqrt(1 - sigma_min(U^T V)^2) without the cancellation near zero.
    """
    if U.dim != V.dim or U.rank != V.rank:
        raise ShapeError(f"bases differ: {U.dim}x{U.rank} vs {V.dim}x{V.rank}")
    residual = V.columns - U.columns @ (U.columns.T @ V.columns)
    distance = float(np.linalg.norm(residual, ord=2))
    return min(1.0, max(0.0, distance))


def spectral_norm(M: MatrixLike) -> float:
    array = _as_array(M)
    return float(_singular_values(array)[0]) if array.size else 0.0


def davis_kahan_bound(M: MatrixLike, M_hat: MatrixLike, r: int) -> float:
    """2 ||M_hat - M|| / gap_r(M); infinite when the gap vanishes."""
    array = _as_array(M)
    perturbation = spectral_norm(_as_array(M_hat) - array)
    gap = eigengap(array, r)
    if gap == 0.0:
        return math.inf
    return 2.0 * perturbation / gap


def high_accuracy_threshold(shape, sr: float) -> float:
    """
    Relative error sr(A) * d_max^(1 - k/2) below which the sample size
    needed scales like d * sr(A) / eps^2 whatever the order k.
    """
    shape = as_shape(shape)
    d_max = max(shape.dims)
    return float(sr * d_max ** (1.0 - shape.order / 2.0))
