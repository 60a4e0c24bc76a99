"""Synthetic tensors with planted subspaces and controlled eigengaps."""

from .synthetic import gen_tucker, gen_matrix, core_diagonal
