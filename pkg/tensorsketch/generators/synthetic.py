"""
Synthetic test tensors with planted singular subspaces.

The core is superdiagonal with entries core_decay^(t-1), so the singular
values of every unfolding and hence every eigengap are known in closed form.
"""

import logging
from typing import List, Tuple

import numpy as np

from tensorsketch.core.exceptions import SpecError
from tensorsketch.models.report_models import TuckerSpec
from tensorsketch.models.tensor_models import DenseTensor, FactorBasis, Matrix


logger = logging.getLogger(__name__)


def _orthonormal_columns(rng: np.random.Generator, d: int, r: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((d, r)))
    return q


def core_diagonal(spec: TuckerSpec) -> np.ndarray:
    """Superdiagonal core entries core_decay^(t-1), t = 1..min(ranks)."""
    return spec.core_decay ** np.arange(min(spec.ranks), dtype=np.float64)


def gen_tucker(spec: TuckerSpec) -> Tuple[DenseTensor, List[FactorBasis]]:
    """
    A = core x_1 U_1 ... x_k U_k + noise_sigma * G / sqrt(total).

    Returns the tensor and, per mode, the planted basis: the first
    min(ranks) columns of U_j, the only ones carrying signal.
    """
    if not isinstance(spec, TuckerSpec):
        try:
            spec = TuckerSpec.model_validate(spec)
        except Exception as e:
            raise SpecError(f"Invalid Tucker specification: {str(e)}")

    rng = np.random.default_rng(spec.seed)
    factors = [_orthonormal_columns(rng, d, r) for d, r in zip(spec.dims, spec.ranks)]
    diagonal = core_diagonal(spec)
    signal_rank = diagonal.size

    # sum_t lambda_t u_1t x ... x u_kt, built one mode at a time
    result = factors[0][:, :signal_rank] * diagonal
    for U in factors[1:]:
        result = np.einsum("...t,it->...it", result, U[:, :signal_rank])
    tensor = result.sum(axis=-1)

    total = tensor.size
    if spec.noise_sigma > 0:
        tensor = tensor + spec.noise_sigma * rng.standard_normal(tensor.shape) / np.sqrt(total)

    planted = [FactorBasis(U[:, :signal_rank]) for U in factors]
    logger.debug(f"Generated Tucker tensor {tuple(spec.dims)} with core {diagonal.tolist()}")
    return DenseTensor.from_array(tensor), planted


def gen_matrix(rows: int, cols: int, rank: int, decay: float = 0.5,
               noise_sigma: float = 0.0, seed: int = 0) -> Tuple[Matrix, FactorBasis]:
    """Planted rank-``rank`` matrix with singular values decay^(t-1) plus scaled noise."""
    try:
        spec = TuckerSpec(dims=[rows, cols], ranks=[rank, rank], core_decay=decay,
                          noise_sigma=noise_sigma, seed=seed)
    except Exception as e:
        raise SpecError(f"Invalid matrix specification: {str(e)}")

    tensor, planted = gen_tucker(spec)
    return Matrix.from_array(tensor.array), planted[0]
