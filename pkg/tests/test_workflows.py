"""
Tests for the budget sweep and comparison engines.
"""

import json
import math

import numpy as np
import pytest

from tensorsketch.core.exceptions import EstimatorError, GapDegenerateError, PlanError
from tensorsketch.generators import gen_matrix, gen_tucker
from tensorsketch.models.report_models import SweepPlan, TuckerSpec
from tensorsketch.models.tensor_models import DenseTensor
from tensorsketch.storage import TensorFileManager
from tensorsketch.workflows import (
    BudgetSweepEngine, ComparisonEngine, bootstrap_median_iqr, compare_direct_vs_product,
    fit_high_accuracy_slope, gather_in_threads, load_plan, median_by_budget, run_budget_sweep,
)
from tensorsketch.workflows import budget_sweep


def small_plan(**overrides) -> SweepPlan:
    fields = dict(
        generator=TuckerSpec(dims=[6, 6, 6], ranks=[2, 2, 2], core_decay=0.5, noise_sigma=0.01, seed=1),
        budgets=[20, 40, 80],
        trials=3,
        seed=99,
        modes=[1, 2],
        ranks=[1, 1],
        restarts=3,
        max_iters=50,
        tol=1e-9,
    )
    fields.update(overrides)
    return SweepPlan(**fields)


def without_wall_time(records):
    return [record.model_dump(exclude={"wall_time_ms"}) for record in records]


class TestExecutor:
    @pytest.mark.asyncio
    async def test_results_keep_call_order(self):
        calls = [lambda i=i: i * i for i in range(20)]
        assert await gather_in_threads(calls, max_workers=3) == [i * i for i in range(20)]


class TestSweepPlan:
    def test_budgets_must_increase(self):
        with pytest.raises(ValueError):
            small_plan(budgets=[40, 20])

    def test_exactly_one_source(self):
        with pytest.raises(ValueError):
            small_plan(input="a.dten")

    def test_load_plan_resolves_input(self, tmp_path, gaussian_tensor):
        TensorFileManager().write_dense(gaussian_tensor, tmp_path / "a.dten")
        (tmp_path / "plan.json").write_text(json.dumps({"input": "a.dten", "budgets": [5, 10, 20]}))
        plan = load_plan(tmp_path / "plan.json")
        assert plan.input == tmp_path / "a.dten"

    def test_load_plan_rejects_invalid(self, tmp_path):
        (tmp_path / "plan.json").write_text(json.dumps({"budgets": [5]}))
        with pytest.raises(PlanError):
            load_plan(tmp_path / "plan.json")

    def test_load_plan_missing_file(self, tmp_path):
        with pytest.raises(PlanError):
            load_plan(tmp_path / "missing.json")


class TestBudgetSweep:
    @pytest.mark.asyncio
    async def test_rows_cover_budgets_and_trials(self):
        plan = small_plan()
        records = await BudgetSweepEngine().execute_sweep(plan, max_workers=2)
        assert [(r.budget_n) for r in records] == [20, 20, 20, 40, 40, 40, 80, 80, 80]
        for record in records:
            assert record.rel_spectral_error >= 0
            assert set(record.subspace_errors) == {1, 2}
            assert record.error is None

    @pytest.mark.asyncio
    async def test_schedule_independent(self):
        plan = small_plan()
        serial = await BudgetSweepEngine().execute_sweep(plan, max_workers=1)
        parallel = await BudgetSweepEngine().execute_sweep(plan, max_workers=8)
        assert without_wall_time(serial) == without_wall_time(parallel)

    @pytest.mark.asyncio
    async def test_full_budget_has_zero_error(self):
        plan = small_plan(budgets=[216], trials=2)
        records = await BudgetSweepEngine().execute_sweep(plan)
        A, _ = gen_tucker(plan.generator)
        for record in records:
            assert record.rel_spectral_error == 0.0
            assert record.nnz == np.count_nonzero(A.values)
            assert all(error <= 1e-10 for error in record.subspace_errors.values())

    @pytest.mark.asyncio
    async def test_matrix_input_uses_exact_norm(self, tmp_path):
        M, _ = gen_matrix(8, 12, 2, noise_sigma=0.05, seed=2)
        TensorFileManager().write_dense(M.to_tensor(), tmp_path / "m.dten")
        plan = SweepPlan(input=tmp_path / "m.dten", budgets=[10, 96], trials=2, seed=1,
                         modes=[1], ranks=[2])
        records = await BudgetSweepEngine().execute_sweep(plan)
        assert records[0].rel_spectral_error > 0
        assert records[-1].rel_spectral_error == 0.0

    @pytest.mark.asyncio
    async def test_failed_trials_become_nan_rows(self, monkeypatch):
        real_sparsify = budget_sweep.sparsify

        def flaky_sparsify(A, n, seed):
            if n == 40:
                raise EstimatorError("simulated failure")
            return real_sparsify(A, n, seed)

        monkeypatch.setattr(budget_sweep, "sparsify", flaky_sparsify)
        records = await BudgetSweepEngine().execute_sweep(small_plan())
        assert len(records) == 9
        failed = [r for r in records if r.budget_n == 40]
        assert all(math.isnan(r.rel_spectral_error) and not r.converged for r in failed)
        assert all(r.error == "simulated failure" for r in failed)
        assert all(r.error is None for r in records if r.budget_n != 40)

    def test_blocking_wrapper(self):
        records = run_budget_sweep(small_plan(trials=1), max_workers=2)
        assert len(records) == 3

    @pytest.mark.slow
    def test_error_and_nnz_scaling(self):
        """Planted 20^3 rank-1 tensor, budgets doubling from 200 to 102400, 10 trials each."""
        budgets = [200 * 2 ** i for i in range(10)]
        plan = SweepPlan(
            generator=TuckerSpec(dims=[20, 20, 20], ranks=[1, 1, 1], noise_sigma=0.0, seed=5),
            budgets=budgets, trials=10, seed=17, restarts=3, max_iters=100,
        )
        records = run_budget_sweep(plan)
        errors = median_by_budget(records)
        nnz = median_by_budget(records, "nnz")
        total = 8000

        medians = [errors[n] for n in budgets]
        for previous, current in zip(medians, medians[1:]):
            if previous > 0:
                assert current < previous
            else:
                assert current == 0.0
        for n in budgets:
            if n < total:
                assert 0.3 * n <= nnz[n] <= 2 * n

    @pytest.mark.slow
    def test_high_accuracy_slope(self):
        """Log-log slope of the median error over the high-accuracy budgets is about -1/2."""
        budgets = [400, 566, 800, 1131, 1600, 2263]
        plan = SweepPlan(
            generator=TuckerSpec(dims=[20, 20, 20], ranks=[1, 1, 1], noise_sigma=0.0, seed=5),
            budgets=budgets, trials=10, seed=23, restarts=3, max_iters=100,
        )
        records = run_budget_sweep(plan)
        fit = fit_high_accuracy_slope(records, (20, 20, 20), sr=1.0)
        assert -0.65 <= fit.slope <= -0.35
        assert fit.r_squared >= 0.9


class TestComparison:
    def test_bootstrap_interval_brackets_median(self):
        errors = np.linspace(0.1, 1.0, 21)
        low, high = bootstrap_median_iqr(errors, 500, seed=1)
        assert low <= np.median(errors) <= high

    def test_full_budget_row(self, planted_spec):
        A, _ = gen_tucker(planted_spec)
        table = compare_direct_vs_product(A, [A.shape.total], 1, 2, trials=3, seed=4)
        row = table.rows[0]
        assert row.direct_median <= 1e-10
        assert row.product_median <= 1e-10
        assert table.eigengap == pytest.approx(0.5)

    @pytest.mark.asyncio
    async def test_table_shape(self, planted_spec):
        A, _ = gen_tucker(planted_spec)
        table = await ComparisonEngine().execute(A, [100, 200], 2, 2, trials=4, seed=9, max_workers=2)
        assert [row.budget_n for row in table.rows] == [100, 200]
        for row in table.rows:
            assert row.direct_iqr[0] <= row.direct_iqr[1]
            assert row.product_iqr[0] <= row.product_iqr[1]
            if row.direct_median > 0:
                assert row.ratio == pytest.approx(row.product_median / row.direct_median)

    @pytest.mark.asyncio
    async def test_schedule_independent(self, planted_spec):
        A, _ = gen_tucker(planted_spec)
        serial = await ComparisonEngine().execute(A, [150], 1, 2, trials=5, seed=2, max_workers=1)
        parallel = await ComparisonEngine().execute(A, [150], 1, 2, trials=5, seed=2, max_workers=8)
        assert serial.model_dump() == parallel.model_dump()

    def test_degenerate_gap_refused(self):
        A = DenseTensor.from_array(np.eye(4))
        with pytest.raises(GapDegenerateError) as info:
            compare_direct_vs_product(A, [8], 1, 1, trials=2, seed=0)
        assert "eigengap" in info.value.message

    @pytest.mark.slow
    def test_product_beats_direct_on_planted_tensor(self):
        spec = TuckerSpec(dims=[30, 30, 30], ranks=[2, 2, 2], core_decay=0.5, noise_sigma=0.0, seed=11)
        A, _ = gen_tucker(spec)
        table = compare_direct_vs_product(A, [6750, 13500], 1, 2, trials=50, seed=31)
        for row in table.rows:
            assert row.product_median <= row.direct_median

    @pytest.mark.slow
    def test_product_advantage_grows_with_aspect_ratio(self):
        ratios = []
        for cols in (100, 1000):
            M, _ = gen_matrix(10, cols, 2, decay=0.5, seed=13)
            table = compare_direct_vs_product(M.to_tensor(), [500], 1, 2, trials=50, seed=37)
            ratios.append(table.rows[0].ratio)
        assert ratios[1] <= 1.0
        assert ratios[1] <= ratios[0]
