"""
Budget sweep engine: sparsify an input at a list of budgets, several trials
each, and record the relative spectral error, nnz and subspace errors.
"""

import asyncio
import logging
import time
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from tensorsketch.config import settings
from tensorsketch.core.exceptions import (
    PlanError, StorageError, TensorSketchBaseException, UndefinedQuantityError
)
from tensorsketch.core.rng import derive_seed
from tensorsketch.generators.synthetic import gen_tucker
from tensorsketch.models.report_models import SweepPlan, SweepRecord
from tensorsketch.models.tensor_models import DenseTensor, FactorBasis, SparseTensor
from tensorsketch.sketch.sparsifier import sparsify
from tensorsketch.spectral.linalg import spectral_norm, subspace_distance, top_left_singular_vectors
from tensorsketch.spectral.tensor_norm import tensor_spectral_norm
from tensorsketch.storage.file_manager import TensorFileManager
from tensorsketch.tensors.ops import densify, matricize, matricize_sparse

from .executor import gather_in_threads


def load_plan(path: Union[str, Path]) -> SweepPlan:
    """Load a plan JSON file; a relative ``input`` is resolved against the plan's directory."""
    path = Path(path)
    try:
        document = TensorFileManager().read_json(path)
        plan = SweepPlan.model_validate(document)
    except ValidationError as e:
        raise PlanError(f"Invalid sweep plan {path}: {str(e)}")
    except StorageError as e:
        raise PlanError(f"Cannot load sweep plan {path}: {e.message}")

    if plan.input is not None and not plan.input.is_absolute():
        plan = plan.model_copy(update={"input": path.parent / plan.input})
    return plan


class BudgetSweepEngine:
    """
    Runs the trials of a sweep plan on worker threads.

    Each trial draws its randomness from ``derive_seed(plan.seed, budget, trial)``
    only, so the records do not depend on scheduling.
    """

    def __init__(self, file_manager: Optional[TensorFileManager] = None):
        self.logger = logging.getLogger(__name__)
        self.file_manager = file_manager or TensorFileManager()

    def load_input(self, plan: SweepPlan) -> DenseTensor:
        if plan.generator is not None:
            tensor, _ = gen_tucker(plan.generator)
            return tensor
        tensor = self.file_manager.read_tensor(plan.input)
        if isinstance(tensor, SparseTensor):
            tensor = densify(tensor)
        return tensor

    def _norm(self, array: np.ndarray, plan: SweepPlan):
        """(value, converged) with the plan's estimator settings; exact for matrices."""
        if array.ndim == 2:
            return spectral_norm(array), True
        estimate = tensor_spectral_norm(array, restarts=plan.restarts, max_iters=plan.max_iters,
                                        tol=plan.tol, seed=plan.seed)
        return estimate.value, estimate.converged

    def _run_trial(self, A: DenseTensor, plan: SweepPlan, reference_norm: float,
                   exact_bases: Dict[int, FactorBasis], budget: int, trial: int) -> SweepRecord:
        trial_seed = derive_seed(plan.seed, budget, trial)
        start_time = time.perf_counter()
        try:
            sketch, report = sparsify(A, budget, trial_seed)
            difference = densify(sketch).array - A.array
            error_norm, converged = self._norm(difference, plan)

            subspace_errors = {}
            for j, r in zip(plan.modes, plan.ranks):
                estimate = top_left_singular_vectors(matricize_sparse(sketch, j).toarray(), r)
                subspace_errors[j] = subspace_distance(exact_bases[j], estimate)

            elapsed_ms = (time.perf_counter() - start_time) * 1000.0
            if not converged:
                self.logger.warning(f"Norm estimate did not converge at n={budget}, trial {trial}")
            self.logger.debug(f"Trial n={budget} #{trial}: nnz={sketch.nnz}, error={error_norm / reference_norm:.6g}")
            return SweepRecord(
                budget_n=budget,
                trial_seed=trial_seed,
                nnz=report.actual_nnz,
                rel_spectral_error=error_norm / reference_norm,
                subspace_errors=subspace_errors,
                converged=converged,
                wall_time_ms=elapsed_ms,
            )

        except (TensorSketchBaseException, np.linalg.LinAlgError) as e:
            # Failed trials stay in the table as NaN rows
            self.logger.error(f"Trial n={budget} #{trial} failed: {str(e)}")
            return SweepRecord(
                budget_n=budget,
                trial_seed=trial_seed,
                nnz=0,
                rel_spectral_error=float("nan"),
                subspace_errors={j: float("nan") for j in plan.modes},
                converged=False,
                wall_time_ms=(time.perf_counter() - start_time) * 1000.0,
                error=str(e),
            )

    async def execute_sweep(self, plan: SweepPlan, max_workers: Optional[int] = None) -> List[SweepRecord]:
        """
        Execute every (budget, trial) of ``plan``.

        Returns:
            Records ordered by budget, then trial index
        """
        max_workers = max_workers or settings.max_workers
        start_time = time.time()

        A = self.load_input(plan)
        self.logger.info(f"Starting sweep on tensor {A.shape.dims}: {len(plan.budgets)} budgets x {plan.trials} trials")

        reference_norm, converged = self._norm(A.array, plan)
        if reference_norm <= 0:
            raise UndefinedQuantityError("relative error is undefined for a zero input tensor")
        if not converged:
            self.logger.warning("Norm estimate of the input did not converge")

        exact_bases = {j: top_left_singular_vectors(matricize(A, j).array, r)
                       for j, r in zip(plan.modes, plan.ranks)}

        calls = [
            (lambda n=budget, t=trial: self._run_trial(A, plan, reference_norm, exact_bases, n, t))
            for budget in plan.budgets
            for trial in range(plan.trials)
        ]
        records = await gather_in_threads(calls, max_workers)

        failed = sum(1 for record in records if record.error is not None)
        self.logger.info(f"Sweep finished in {time.time() - start_time:.2f}s with {failed} failed trials")
        return records


def run_budget_sweep(plan: SweepPlan, max_workers: Optional[int] = None) -> List[SweepRecord]:
    """Blocking wrapper around :meth:`BudgetSweepEngine.execute_sweep`."""
    return asyncio.run(BudgetSweepEngine().execute_sweep(plan, max_workers=max_workers))
