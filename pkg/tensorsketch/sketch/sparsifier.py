"""
Entry-wise tensor sparsification.

Entries with |a| >= ||A||_F / sqrt(n) are kept verbatim, entries with
|a| <= ||A||_F / sqrt(d_1...d_k) are kept with the uniform probability
n / (d_1...d_k), and the entries in between are kept with probability
n a^2 / ||A||_F^2. Every kept entry is divided by its keep probability, so
the sketch is an unbiased estimate of the input.
"""

import logging
import math
from typing import Tuple

import numpy as np

from tensorsketch.core.exceptions import BudgetError, ContractViolationError
from tensorsketch.core.rng import MASK64, per_entry_uniform
from tensorsketch.models.report_models import (
    Regime, RegimeCounts, SketchCounts, SketchReport, SketchScheme
)
from tensorsketch.models.tensor_models import DenseTensor, SparseTensor
from tensorsketch.tensors.ops import frobenius_norm


logger = logging.getLogger(__name__)

LARGE, MODERATE, SMALL = 0, 1, 2
_REGIME_BY_CODE = {LARGE: Regime.LARGE, MODERATE: Regime.MODERATE, SMALL: Regime.SMALL}


def validate_budget(n) -> int:
    try:
        value = int(n)
    except (TypeError, ValueError):
        raise BudgetError(f"sampling budget must be an integer >= 1, got {n!r}")
    if isinstance(n, bool) or value != n or value < 1:
        raise BudgetError(f"sampling budget must be an integer >= 1, got {n!r}")
    return value


def _thresholds(fro: float, n: int, total: int) -> Tuple[float, float]:
    """(large threshold ||A||_F / sqrt(n), small threshold ||A||_F / sqrt(total))."""
    return fro / math.sqrt(n), fro / math.sqrt(total)


def keep_probabilities(values, fro: float, n: int, total: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized regime codes and keep probabilities for an array of entries.

    Zero entries are classified Small with probability 0: they are never stored.
    """
    n = validate_budget(n)
    a = np.abs(np.asarray(values, dtype=np.float64))
    codes = np.full(a.shape, SMALL, dtype=np.int8)
    probs = np.zeros(a.shape, dtype=np.float64)

    if fro == 0.0:
        if np.any(a > 0):
            raise ContractViolationError("nonzero entry in a tensor with zero Frobenius norm")
        return codes, probs

    large_thr, small_thr = _thresholds(fro, n, total)
    # Large wins the overlap that exists only when n >= total
    large = a >= large_thr
    small = (a <= small_thr) & ~large
    moderate = ~(large | small)

    codes[large] = LARGE
    codes[moderate] = MODERATE
    probs[large] = 1.0
    probs[moderate] = np.minimum(n * (a[moderate] / fro) ** 2, 1.0)
    probs[small & (a > 0)] = min(1.0, n / total)
    return codes, probs


def classify_entry(abs_a: float, fro: float, n: int, total: int) -> Regime:
    """Regime of a single entry with magnitude ``abs_a``."""
    if abs_a < 0 or fro < 0:
        raise ContractViolationError("entry magnitude and Frobenius norm must be nonnegative")
    if total < 1:
        raise ContractViolationError("tensor must have at least one cell")
    codes, _ = keep_probabilities(np.array([abs_a]), fro, n, total)
    return _REGIME_BY_CODE[int(codes[0])]


def keep_probability(a: float, fro: float, n: int, total: int) -> float:
    """Probability that an entry of value ``a`` survives sparsification."""
    if fro < 0:
        raise ContractViolationError("Frobenius norm must be nonnegative")
    _, probs = keep_probabilities(np.array([a]), fro, n, total)
    return float(probs[0])


def expected_nnz(A: DenseTensor, n: int) -> float:
    """Expected number of retained entries: the sum of keep probabilities."""
    values = A.values[A.values != 0]
    _, probs = keep_probabilities(values, frobenius_norm(A), n, A.shape.total)
    return float(probs.sum())


def _sample(A: DenseTensor, n: int, seed: int, scheme: SketchScheme) -> Tuple[SparseTensor, SketchReport]:
    n = validate_budget(n)
    seed = int(seed) & MASK64
    total = A.shape.total
    fro = frobenius_norm(A)

    indices = np.flatnonzero(A.values)
    a = A.values[indices]
    codes, probs = keep_probabilities(a, fro, n, total)
    if scheme == SketchScheme.ZERO_SMALL:
        probs = np.where(codes == SMALL, 0.0, probs)

    # one draw per entry, a pure function of (seed, linear index)
    draws = per_entry_uniform(seed, indices)
    keep = draws < probs
    sketch = SparseTensor(A.shape, indices[keep], a[keep] / probs[keep])

    counts = {}
    for code, regime in _REGIME_BY_CODE.items():
        in_regime = codes == code
        counts[regime.value] = RegimeCounts(
            candidates=int(np.count_nonzero(in_regime)),
            retained=int(np.count_nonzero(in_regime & keep)),
        )

    small_probability = 0.0 if scheme == SketchScheme.ZERO_SMALL else min(1.0, n / total)
    report = SketchReport(
        budget_n=n,
        seed=seed,
        scheme=scheme,
        counts=SketchCounts(**counts),
        expected_nnz=float(probs.sum()),
        actual_nnz=sketch.nnz,
        fro_norm_input=fro,
        small_probability=small_probability,
    )

    logger.debug(
        f"Sketched shape {A.shape.dims} with n={n}, seed={seed}: "
        f"large {counts['large'].retained}/{counts['large'].candidates}, "
        f"moderate {counts['moderate'].retained}/{counts['moderate'].candidates}, "
        f"small {counts['small'].retained}/{counts['small'].candidates}"
    )
    return sketch, report


def sparsify(A: DenseTensor, n: int, seed: int) -> Tuple[SparseTensor, SketchReport]:
    """Unbiased sparse sketch of ``A`` with sampling budget ``n``."""
    return _sample(A, n, seed, SketchScheme.TENSOR_SPARSIFICATION)


def sparsify_baseline_zero_small(A: DenseTensor, n: int, seed: int) -> Tuple[SparseTensor, SketchReport]:
    """
    Comparison baseline that drops every Small entry instead of sampling it.

    Uses the same thresholds and the same per-entry draws as :func:`sparsify`,
    so its support is a subset of the unbiased sketch for equal seeds.
    The estimate is biased whenever Small entries exist.
    """
    return _sample(A, n, seed, SketchScheme.ZERO_SMALL)
