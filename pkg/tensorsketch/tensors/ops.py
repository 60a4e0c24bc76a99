"""
Index arithmetic, matricization, norms and dense/sparse conversion.

Multi-indices are 1-based at the API boundary; linear indices are 0-based
row-major offsets (last index fastest).
"""

from typing import Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from tensorsketch.core.exceptions import IndexRangeError, ModeError, ShapeError
from tensorsketch.models.tensor_models import (
    DenseTensor, SparseTensor, Matrix, Shape, as_shape
)


def linear_index(shape, multi: Sequence[int]) -> int:
    """Row-major linear index of a 1-based multi-index."""
    shape = as_shape(shape)
    multi = tuple(int(i) for i in multi)
    if len(multi) != shape.order:
        raise IndexRangeError(f"expected {shape.order} index components, got {len(multi)}")

    offset = 0
    for component, extent in zip(multi, shape.dims):
        if not 1 <= component <= extent:
            raise IndexRangeError(f"index {multi} outside shape {shape.dims}")
        offset = offset * extent + (component - 1)
    return offset


def multi_index(shape, linear: int) -> Tuple[int, ...]:
    """1-based multi-index of a row-major linear index."""
    shape = as_shape(shape)
    linear = int(linear)
    if not 0 <= linear < shape.total:
        raise IndexRangeError(f"linear index {linear} outside [0, {shape.total})")

    components = []
    for extent in reversed(shape.dims):
        linear, rem = divmod(linear, extent)
        components.append(rem + 1)
    return tuple(reversed(components))


def _check_mode(shape: Shape, j: int) -> int:
    if not 1 <= int(j) <= shape.order:
        raise ModeError(f"mode {j} outside 1..{shape.order}")
    return int(j) - 1


def matricize(A: DenseTensor, j: int) -> Matrix:
    """
    Mode-j unfolding: rows index mode j, columns run over the remaining
    modes in their original order, last one fastest.
    """
    axis = _check_mode(A.shape, j)
    unfolded = np.moveaxis(A.array, axis, 0).reshape(A.shape.dims[axis], -1)
    return Matrix.from_array(np.ascontiguousarray(unfolded))


def unmatricize(M: Union[Matrix, np.ndarray], shape, j: int) -> DenseTensor:
    """Inverse of :func:`matricize`."""
    shape = as_shape(shape)
    axis = _check_mode(shape, j)
    array = M.array if isinstance(M, Matrix) else np.asarray(M, dtype=np.float64)
    rest = tuple(d for s, d in enumerate(shape.dims) if s != axis)
    if array.shape != (shape.dims[axis], int(np.prod(rest, dtype=np.int64))):
        raise ShapeError(f"matrix of shape {array.shape} does not unfold shape {shape.dims} at mode {j}")
    folded = np.moveaxis(array.reshape((shape.dims[axis],) + rest), 0, axis)
    return DenseTensor.from_array(folded)


def matricize_sparse(S: SparseTensor, j: int) -> sp.csr_matrix:
    """Mode-j unfolding of a sparse tensor, using the same column map as :func:`matricize`."""
    shape = S.shape
    axis = _check_mode(shape, j)
    rest = tuple(d for s, d in enumerate(shape.dims) if s != axis)
    n_cols = int(np.prod(rest, dtype=np.int64))

    if S.nnz == 0:
        return sp.csr_matrix((shape.dims[axis], n_cols), dtype=np.float64)

    components = np.unravel_index(S.indices, shape.dims)
    rows = components[axis]
    others = tuple(c for s, c in enumerate(components) if s != axis)
    cols = np.ravel_multi_index(others, rest) if others else np.zeros_like(rows)
    return sp.csr_matrix((S.values, (rows, cols)), shape=(shape.dims[axis], n_cols))


def scaled_norm(values) -> float:
    """Euclidean norm of a flat array, scaled by max |value| so squaring cannot overflow or underflow."""
    values = np.ravel(np.asarray(values, dtype=np.float64))
    if values.size == 0:
        return 0.0
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        return 0.0
    return scale * float(np.linalg.norm(values / scale))


def frobenius_norm(A: Union[DenseTensor, SparseTensor]) -> float:
    """Square root of the sum of squared entries."""
    return scaled_norm(A.values)


def densify(S: SparseTensor) -> DenseTensor:
    values = np.zeros(S.shape.total)
    values[S.indices] = S.values
    return DenseTensor(S.shape, values)


def sparsify_exact(A: DenseTensor) -> SparseTensor:
    """Sparse copy of ``A`` that drops exact zeros only."""
    indices = np.flatnonzero(A.values)
    return SparseTensor(A.shape, indices, A.values[indices])
