"""Binary tensor formats and result files."""

from .file_manager import TensorFileManager, sweep_csv_header, DENSE_MAGIC, SPARSE_MAGIC
