"""
File storage for tensors, bases, reports and sweep results.

Binary formats, all little-endian:

    DTEN: b"DTEN", u32 k, k x u64 dims, total x f64 values (row-major)
    STEN: b"STEN", u32 k, k x u64 dims, u64 nnz, nnz x (u64 linear index, f64 value)
"""

import csv
import json
import logging
import struct
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from tensorsketch.core.exceptions import FormatError, ShapeError, StorageError
from tensorsketch.models.report_models import SweepRecord
from tensorsketch.models.tensor_models import DenseTensor, FactorBasis, Shape, SparseTensor


DENSE_MAGIC = b"DTEN"
SPARSE_MAGIC = b"STEN"

_SPARSE_RECORD = np.dtype([("index", "<u8"), ("value", "<f8")])

SWEEP_FIXED_COLUMNS = ("budget_n", "trial_seed", "nnz", "rel_spectral_error")


def sweep_csv_header(modes: Sequence[int]) -> List[str]:
    """Column order of the sweep CSV."""
    return (list(SWEEP_FIXED_COLUMNS)
            + [f"subspace_error_mode{j}" for j in modes]
            + ["converged", "wall_time_ms"])


class TensorFileManager:
    """
    Reads and writes DTEN/STEN tensors, JSON documents and sweep CSVs.
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    # Binary tensors

    def encode_dense(self, tensor: DenseTensor) -> bytes:
        dims = tensor.shape.dims
        header = DENSE_MAGIC + struct.pack(f"<I{len(dims)}Q", len(dims), *dims)
        return header + tensor.values.astype("<f8").tobytes()

    def encode_sparse(self, tensor: SparseTensor) -> bytes:
        dims = tensor.shape.dims
        header = SPARSE_MAGIC + struct.pack(f"<I{len(dims)}QQ", len(dims), *dims, tensor.nnz)
        records = np.empty(tensor.nnz, dtype=_SPARSE_RECORD)
        records["index"] = tensor.indices
        records["value"] = tensor.values
        return header + records.tobytes()

    def _parse_header(self, data: bytes, magic: bytes) -> Tuple[Tuple[int, ...], int]:
        if len(data) < 8:
            raise FormatError("truncated header", offset=len(data))
        if data[:4] != magic:
            raise FormatError(f"bad magic {data[:4]!r}, expected {magic!r}", offset=0)
        (k,) = struct.unpack_from("<I", data, 4)
        if k < 1:
            raise FormatError("tensor order must be >= 1", offset=4)
        end = 8 + 8 * k
        if len(data) < end:
            raise FormatError("truncated dimension list", offset=len(data))
        dims = struct.unpack_from(f"<{k}Q", data, 8)
        for position, d in enumerate(dims):
            if d < 1:
                raise FormatError("dimension must be >= 1", offset=8 + 8 * position)
        try:
            Shape(dims)
        except ShapeError as e:
            raise FormatError(e.message, offset=8)
        return tuple(int(d) for d in dims), end

    def decode_dense(self, data: bytes) -> DenseTensor:
        dims, start = self._parse_header(data, DENSE_MAGIC)
        shape = Shape(dims)
        expected = 8 * shape.total
        available = len(data) - start
        if available < expected:
            raise FormatError(f"expected {shape.total} values", offset=len(data))
        if available > expected:
            raise FormatError("trailing bytes after values", offset=start + expected)

        values = np.frombuffer(data, dtype="<f8", count=shape.total, offset=start)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise FormatError("non-finite value", offset=start + 8 * int(bad[0]))
        return DenseTensor(shape, values.astype(np.float64))

    def decode_sparse(self, data: bytes) -> SparseTensor:
        dims, start = self._parse_header(data, SPARSE_MAGIC)
        shape = Shape(dims)
        if len(data) < start + 8:
            raise FormatError("truncated nnz field", offset=len(data))
        (nnz,) = struct.unpack_from("<Q", data, start)
        start += 8
        expected = _SPARSE_RECORD.itemsize * nnz
        available = len(data) - start
        if available < expected:
            raise FormatError(f"expected {nnz} entries", offset=len(data))
        if available > expected:
            raise FormatError("trailing bytes after entries", offset=start + expected)
        if nnz == 0:
            return SparseTensor.empty(shape)

        records = np.frombuffer(data, dtype=_SPARSE_RECORD, count=nnz, offset=start)
        indices = records["index"]
        values = records["value"]

        def record_offset(position: int) -> int:
            return start + _SPARSE_RECORD.itemsize * position

        out_of_range = np.flatnonzero(indices >= np.uint64(shape.total))
        if out_of_range.size:
            raise FormatError("linear index out of range", offset=record_offset(int(out_of_range[0])))
        unsorted = np.flatnonzero(indices[1:] <= indices[:-1])
        if unsorted.size:
            raise FormatError("linear indices not strictly increasing", offset=record_offset(int(unsorted[0]) + 1))
        invalid = np.flatnonzero(~np.isfinite(values) | (values == 0.0))
        if invalid.size:
            raise FormatError("zero or non-finite value", offset=record_offset(int(invalid[0])) + 8)

        return SparseTensor(shape, indices.astype(np.int64), values.astype(np.float64))

    def write_dense(self, tensor: DenseTensor, path: Union[str, Path]) -> Path:
        return self._write_bytes(self.encode_dense(tensor), path)

    def write_sparse(self, tensor: SparseTensor, path: Union[str, Path]) -> Path:
        return self._write_bytes(self.encode_sparse(tensor), path)

    def write_basis(self, basis: FactorBasis, path: Union[str, Path]) -> Path:
        """Write a d x r basis as a 2-tensor."""
        return self.write_dense(DenseTensor.from_array(basis.columns), path)

    def read_dense(self, path: Union[str, Path]) -> DenseTensor:
        return self.decode_dense(self._read_bytes(path))

    def read_sparse(self, path: Union[str, Path]) -> SparseTensor:
        return self.decode_sparse(self._read_bytes(path))

    def read_tensor(self, path: Union[str, Path]) -> Union[DenseTensor, SparseTensor]:
        """Read either format, dispatching on the magic bytes."""
        data = self._read_bytes(path)
        if data[:4] == SPARSE_MAGIC:
            return self.decode_sparse(data)
        return self.decode_dense(data)

    # JSON and CSV

    def write_json(self, document: Union[BaseModel, Any], path: Union[str, Path]) -> Path:
        if isinstance(document, BaseModel):
            text = document.model_dump_json(indent=2)
        else:
            text = json.dumps(document, indent=2, default=str)
        return self._write_bytes((text + "\n").encode("utf-8"), path)

    def read_json(self, path: Union[str, Path]) -> Any:
        data = self._read_bytes(path)
        try:
            return json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            offset = getattr(e, "pos", getattr(e, "start", 0))
            raise FormatError(f"invalid JSON in {path}: {str(e)}", offset=offset)

    def write_sweep_csv(self, records: Iterable[SweepRecord], modes: Sequence[int],
                        path: Union[str, Path]) -> Path:
        """Write sweep records with a fixed header; floats use their shortest repr."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(sweep_csv_header(modes))
                for record in records:
                    row = [record.budget_n, record.trial_seed, record.nnz, repr(record.rel_spectral_error)]
                    row += [repr(record.subspace_errors.get(j, float("nan"))) for j in modes]
                    row += [str(record.converged).lower(), f"{record.wall_time_ms:.3f}"]
                    writer.writerow(row)
        except OSError as e:
            self.logger.error(f"Error writing sweep CSV: {str(e)}")
            raise StorageError(f"Failed to write {path}: {str(e)}")

        self.logger.info(f"Wrote sweep results: {path}")
        return path

    # Raw I/O

    def _write_bytes(self, content: bytes, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "wb") as f:
                f.write(content)
        except OSError as e:
            self.logger.error(f"Error writing {path}: {str(e)}")
            raise StorageError(f"Failed to write {path}: {str(e)}")

        self.logger.debug(f"Wrote {len(content)} bytes to {path}")
        return path

    def _read_bytes(self, path: Union[str, Path]) -> bytes:
        path = Path(path)
        try:
            with open(path, "rb") as f:
                return f.read()
        except OSError as e:
            self.logger.error(f"Error reading {path}: {str(e)}")
            raise StorageError(f"Failed to read {path}: {str(e)}")
