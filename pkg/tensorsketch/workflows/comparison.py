"""
Head-to-head comparison of the direct and product subspace estimators.
"""

import asyncio
import logging
import time
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tensorsketch.config import settings
from tensorsketch.core.exceptions import GapDegenerateError
from tensorsketch.core.rng import derive_seed
from tensorsketch.methods import get_method_by_name
from tensorsketch.models.report_models import ComparisonRow, ComparisonTable
from tensorsketch.models.tensor_models import DenseTensor, FactorBasis
from tensorsketch.sketch.sparsifier import validate_budget
from tensorsketch.spectral.linalg import (
    eigengap, is_gap_degenerate, matrix_svd, subspace_distance, top_left_singular_vectors
)
from tensorsketch.tensors.ops import matricize

from .executor import gather_in_threads


def bootstrap_median_iqr(errors: Sequence[float], resamples: int, seed: int) -> Tuple[float, float]:
    """25th and 75th percentiles of the bootstrap distribution of the median."""
    errors = np.asarray(errors, dtype=np.float64)
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, errors.size, size=(resamples, errors.size))
    medians = np.median(errors[draws], axis=1)
    low, high = np.percentile(medians, [25.0, 75.0])
    return float(low), float(high)


class ComparisonEngine:
    """Runs direct and product estimates for every (budget, trial) pair."""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.direct = get_method_by_name("direct")
        self.product = get_method_by_name("product")

    def _check_gap(self, A: DenseTensor, j: int, r: int) -> Tuple[float, FactorBasis]:
        M = matricize(A, j).array
        gap = eigengap(M, r)
        sigma_1 = float(matrix_svd(M).singular_values[0])
        if is_gap_degenerate(gap, sigma_1):
            raise GapDegenerateError(
                f"eigengap sigma_{r} - sigma_{r + 1} = {gap:.3g} of mode {j} is degenerate "
                f"relative to sigma_1 = {sigma_1:.3g}",
                details={"eigengap": gap, "sigma_1": sigma_1},
            )
        return gap, top_left_singular_vectors(M, r)

    def _run_trial(self, A: DenseTensor, exact: FactorBasis, budget: int, j: int, r: int,
                   trial_seed: int) -> Tuple[float, float]:
        direct = self.direct.estimate(A, j, r, budget=budget, seed=trial_seed)
        product = self.product.estimate(A, j, r, budget=budget, seed=trial_seed)
        return subspace_distance(exact, direct.basis), subspace_distance(exact, product.basis)

    async def execute(self, A: DenseTensor, budgets: Sequence[int], j: int, r: int, trials: int,
                      seed: int, max_workers: Optional[int] = None) -> ComparisonTable:
        """
        Median subspace errors of both estimators per budget.

        Raises:
            GapDegenerateError: if the exact mode-j eigengap at rank r is degenerate
        """
        max_workers = max_workers or settings.max_workers
        budgets = [validate_budget(n) for n in budgets]
        if trials < 1:
            raise ValueError("trials must be at least 1")

        start_time = time.time()
        gap, exact = self._check_gap(A, j, r)
        self.logger.info(f"Comparing estimators on mode {j}, rank {r}, eigengap {gap:.4g}")

        calls = [
            (lambda n=budget, s=derive_seed(seed, budget, trial): self._run_trial(A, exact, n, j, r, s))
            for budget in budgets
            for trial in range(trials)
        ]
        results = await gather_in_threads(calls, max_workers)

        rows: List[ComparisonRow] = []
        for position, budget in enumerate(budgets):
            chunk = results[position * trials:(position + 1) * trials]
            direct_errors = [d for d, _ in chunk]
            product_errors = [p for _, p in chunk]
            direct_median = float(np.median(direct_errors))
            product_median = float(np.median(product_errors))
            if direct_median > 0:
                ratio = product_median / direct_median
            else:
                ratio = 1.0 if product_median == 0 else float("inf")

            bootstrap_seed = derive_seed(seed, budget)
            rows.append(ComparisonRow(
                budget_n=budget,
                direct_median=direct_median,
                product_median=product_median,
                direct_iqr=bootstrap_median_iqr(direct_errors, settings.bootstrap_resamples, bootstrap_seed),
                product_iqr=bootstrap_median_iqr(product_errors, settings.bootstrap_resamples, bootstrap_seed),
                ratio=ratio,
            ))
            self.logger.debug(f"n={budget}: direct {direct_median:.4g}, product {product_median:.4g}")

        self.logger.info(f"Comparison finished in {time.time() - start_time:.2f}s")
        return ComparisonTable(mode=j, rank=r, trials=trials, seed=seed, eigengap=gap, rows=rows)


def compare_direct_vs_product(A: DenseTensor, budgets: Sequence[int], j: int, r: int, trials: int,
                              seed: int, max_workers: Optional[int] = None) -> ComparisonTable:
    """Blocking wrapper around :meth:`ComparisonEngine.execute`."""
    return asyncio.run(ComparisonEngine().execute(A, budgets, j, r, trials, seed, max_workers=max_workers))
