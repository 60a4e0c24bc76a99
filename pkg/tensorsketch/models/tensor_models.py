"""
Immutable tensor containers: shapes, dense and sparse tensors, matrices
and orthonormal factor bases.

All containers copy their inputs into read-only float64 / int64 arrays,
so instances can be shared freely between threads.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Sequence

import numpy as np

from tensorsketch.config import settings
from tensorsketch.core.exceptions import ShapeError


_MAX_TOTAL = 2 ** 63 - 1


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Shape:
    """Extents d_1..d_k of a k-way tensor."""
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1:
            raise ShapeError("a shape needs at least one dimension")
        if any(d < 1 for d in dims):
            raise ShapeError(f"every dimension must be >= 1, got {dims}")
        total = 1
        for d in dims:
            total *= d
        if total > _MAX_TOTAL:
            raise ShapeError(f"shape {dims} has more than 2**63 - 1 cells")
        object.__setattr__(self, "dims", dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)


def as_shape(shape) -> Shape:
    return shape if isinstance(shape, Shape) else Shape(tuple(shape))


@dataclass(frozen=True, eq=False)
class DenseTensor:
    """Dense k-way tensor stored row-major (last index fastest)."""
    shape: Shape
    values: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        values = _frozen(np.ravel(self.values), np.float64)
        if values.size != shape.total:
            raise ShapeError(
                f"expected {shape.total} values for shape {shape.dims}, got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise ShapeError("dense tensor values must be finite")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, array) -> "DenseTensor":
        array = np.asarray(array, dtype=np.float64)
        if array.ndim == 0:
            array = array.reshape(1)
        return cls(Shape(array.shape), array.ravel(order="C"))

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "DenseTensor":
        shape = as_shape(dims)
        return cls(shape, np.zeros(shape.total))

    @property
    def array(self) -> np.ndarray:
        """Read-only k-dimensional view of the values."""
        return self.values.reshape(self.shape.dims)

    @property
    def order(self) -> int:
        return self.shape.order


@dataclass(frozen=True, eq=False)
class SparseTensor:
    """COO tensor: strictly increasing linear indices with nonzero values."""
    shape: Shape
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        indices = _frozen(np.ravel(self.indices), np.int64)
        values = _frozen(np.ravel(self.values), np.float64)
        if indices.size != values.size:
            raise ShapeError("sparse tensor needs one value per index")
        if indices.size:
            if indices[0] < 0 or indices[-1] >= shape.total:
                raise ShapeError(f"linear index out of range for shape {shape.dims}")
            if np.any(np.diff(indices) <= 0):
                raise ShapeError("sparse indices must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ShapeError("sparse tensor values must be finite")
        if np.any(values == 0.0):
            raise ShapeError("sparse tensor values must be nonzero")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @classmethod
    def empty(cls, dims: Sequence[int]) -> "SparseTensor":
        return cls(as_shape(dims), np.empty(0, dtype=np.int64), np.empty(0))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    @property
    def order(self) -> int:
        return self.shape.order

    @property
    def entries(self):
        """List of (linear_index, value) pairs."""
        return list(zip(self.indices.tolist(), self.values.tolist()))


@dataclass(frozen=True, eq=False)
class Matrix:
    """Row-major real matrix."""
    rows: int
    cols: int
    values: np.ndarray

    def __post_init__(self):
        rows, cols = int(self.rows), int(self.cols)
        if rows < 1 or cols < 1:
            raise ShapeError(f"matrix extents must be positive, got {rows}x{cols}")
        values = _frozen(np.ravel(self.values), np.float64)
        if values.size != rows * cols:
            raise ShapeError(f"expected {rows * cols} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ShapeError("matrix values must be finite")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, array) -> "Matrix":
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2:
            raise ShapeError(f"a matrix needs a 2-d array, got {array.ndim}-d")
        return cls(array.shape[0], array.shape[1], array.ravel(order="C"))

    @property
    def array(self) -> np.ndarray:
        return self.values.reshape(self.rows, self.cols)

    def to_tensor(self) -> DenseTensor:
        return DenseTensor(Shape((self.rows, self.cols)), self.values)


@dataclass(frozen=True, eq=False)
class FactorBasis:
    """
    d x r matrix with orthonormal columns, e.g. the top-r left singular
    vectors of a matricization.

    ``gap_degenerate`` marks bases taken across a vanishing eigengap,
    where the subspace is not well defined.
    """
    columns: np.ndarray
    singular_values: Optional[np.ndarray] = None
    gap_degenerate: bool = False
    tol: Optional[float] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        columns = np.asarray(self.columns, dtype=np.float64)
        if columns.ndim == 1:
            columns = columns.reshape(-1, 1)
        if columns.ndim != 2 or columns.shape[1] < 1 or columns.shape[1] > columns.shape[0]:
            raise ShapeError(f"basis must be d x r with 1 <= r <= d, got {columns.shape}")
        tol = self.tol if self.tol is not None else settings.orthonormality_tol
        gram_error = np.max(np.abs(columns.T @ columns - np.eye(columns.shape[1])))
        if not gram_error <= tol:
            raise ShapeError(f"basis columns are not orthonormal (max error {gram_error:.3e})")
        object.__setattr__(self, "columns", _frozen(columns, np.float64))
        if self.singular_values is not None:
            object.__setattr__(self, "singular_values", _frozen(self.singular_values, np.float64))

    @property
    def dim(self) -> int:
        return int(self.columns.shape[0])

    @property
    def rank(self) -> int:
        return int(self.columns.shape[1])

    def projector(self) -> np.ndarray:
        return self.columns @ self.columns.T
