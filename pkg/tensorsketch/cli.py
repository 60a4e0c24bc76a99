"""
Command-line interface for tensorsketch.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.
"""

import json
import logging
from pathlib import Path
from typing import List

import click
import numpy as np
from pydantic import ValidationError

from tensorsketch import __version__
from tensorsketch.config import settings
from tensorsketch.core.exceptions import (
    NUMERICAL_EXIT_CODE, SpecError, TensorSketchBaseException
)
from tensorsketch.core.logging_config import setup_logging
from tensorsketch.generators.synthetic import gen_tucker
from tensorsketch.methods import METHOD_REGISTRY, get_method_by_name
from tensorsketch.models.report_models import TuckerSpec
from tensorsketch.models.tensor_models import DenseTensor, SparseTensor
from tensorsketch.sketch.sparsifier import sparsify, sparsify_baseline_zero_small
from tensorsketch.spectral.tensor_norm import tensor_spectral_norm
from tensorsketch.storage.file_manager import TensorFileManager
from tensorsketch.tensors.ops import densify
from tensorsketch.workflows.budget_sweep import load_plan, run_budget_sweep
from tensorsketch.workflows.comparison import compare_direct_vs_product


logger = logging.getLogger(__name__)


class TensorSketchGroup(click.Group):
    """Maps package exceptions to exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except TensorSketchBaseException as e:
            logger.debug(f"Command failed: {e.details}")
            click.echo(f"Error: {e.message}", err=True)
            ctx.exit(e.exit_code)
        except np.linalg.LinAlgError as e:
            click.echo(f"Error: linear algebra failure: {str(e)}", err=True)
            ctx.exit(NUMERICAL_EXIT_CODE)


def _load_dense(file_manager: TensorFileManager, path: Path) -> DenseTensor:
    tensor = file_manager.read_tensor(path)
    if isinstance(tensor, SparseTensor):
        tensor = densify(tensor)
    return tensor


def _parse_budgets(ctx, param, value: str) -> List[int]:
    try:
        budgets = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("budgets must be a comma-separated list of integers")
    if not budgets:
        raise click.BadParameter("at least one budget is required")
    return budgets


@click.group(cls=TensorSketchGroup)
@click.version_option(__version__, prog_name=settings.app_name)
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
              help="Override the configured log level.")
def cli(log_level):
    """Randomized tensor sparsification and sketched HOSVD."""
    setup_logging(log_level)


@cli.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(path_type=Path), help="Tucker spec JSON.")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Output DTEN path.")
def gen(spec_path, out):
    """Generate a planted Tucker tensor."""
    file_manager = TensorFileManager()
    try:
        spec = TuckerSpec.model_validate(file_manager.read_json(spec_path))
    except ValidationError as e:
        raise SpecError(f"Invalid Tucker specification {spec_path}: {str(e)}")

    tensor, planted = gen_tucker(spec)
    file_manager.write_dense(tensor, out)

    basis_paths = []
    for j, basis in enumerate(planted, start=1):
        basis_path = out.with_name(f"{out.stem}.basis{j}.dten")
        file_manager.write_basis(basis, basis_path)
        basis_paths.append(str(basis_path))

    sidecar = {"spec": spec.model_dump(), "tensor": str(out), "planted_bases": basis_paths}
    file_manager.write_json(sidecar, out.with_suffix(".json"))
    click.echo(json.dumps(sidecar, indent=2))


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path), help="Input DTEN.")
@click.option("--budget", required=True, type=int, help="Sampling budget n.")
@click.option("--seed", default=0, type=click.IntRange(0, 2 ** 64 - 1), help="64-bit seed.")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Output STEN path.")
@click.option("--baseline-zero-small", is_flag=True, help="Drop Small entries instead of sampling them.")
@click.option("--report", "report_path", type=click.Path(path_type=Path), help="SketchReport JSON path.")
def sketch(in_path, budget, seed, out, baseline_zero_small, report_path):
    """Sparsify a dense tensor."""
    file_manager = TensorFileManager()
    tensor = _load_dense(file_manager, in_path)
    method = sparsify_baseline_zero_small if baseline_zero_small else sparsify
    sparse, report = method(tensor, budget, seed)

    file_manager.write_sparse(sparse, out)
    if report_path is not None:
        file_manager.write_json(report, report_path)
    click.echo(report.model_dump_json(indent=2))


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path), help="DTEN or STEN input.")
@click.option("--restarts", default=None, type=int, help="Multi-start count.")
@click.option("--iters", default=None, type=int, help="Maximum sweeps per restart.")
@click.option("--tol", default=None, type=float, help="Relative convergence tolerance.")
@click.option("--seed", default=0, type=click.IntRange(0, 2 ** 64 - 1), help="Seed for random restarts.")
def norm(in_path, restarts, iters, tol, seed):
    """Estimate the spectral norm and print it as JSON."""
    tensor = TensorFileManager().read_tensor(in_path)
    estimate = tensor_spectral_norm(tensor, restarts=restarts, max_iters=iters, tol=tol, seed=seed)
    click.echo(estimate.model_dump_json(indent=2))


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path), help="Input DTEN.")
@click.option("--mode", required=True, type=int, help="1-based mode j.")
@click.option("--rank", required=True, type=int, help="Number of singular vectors.")
@click.option("--method", "method_name", default="exact", type=click.Choice(sorted(METHOD_REGISTRY)),
              help="Subspace estimator.")
@click.option("--budget", default=None, type=int, help="Sampling budget for sketched methods.")
@click.option("--seed", default=0, type=click.IntRange(0, 2 ** 64 - 1), help="64-bit seed.")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Output basis DTEN.")
def hosvd(in_path, mode, rank, method_name, budget, seed, out):
    """Estimate the mode-j singular subspace."""
    file_manager = TensorFileManager()
    tensor = _load_dense(file_manager, in_path)
    method = get_method_by_name(method_name)
    if method.requires_budget and budget is None:
        raise click.UsageError(f"--budget is required for method {method_name}")

    result, elapsed_ms = method.run_timed(tensor, mode, rank, budget=budget, seed=seed)
    file_manager.write_basis(result.basis, out)

    summary = {
        "method": result.method.value,
        "mode": result.mode,
        "rank": result.rank,
        "singular_values": [] if result.basis.singular_values is None else result.basis.singular_values.tolist(),
        "diagnostics": result.diagnostics.model_dump(mode="json"),
        "wall_time_ms": elapsed_ms,
    }
    click.echo(json.dumps(summary, indent=2))


@cli.command()
@click.option("--plan", "plan_path", required=True, type=click.Path(path_type=Path), help="Sweep plan JSON.")
@click.option("--out", default=None, type=click.Path(path_type=Path), help="Output CSV; defaults to the plan's output.")
@click.option("--workers", default=None, type=click.IntRange(1), help="Worker threads.")
def bench(plan_path, out, workers):
    """Run a budget sweep and write the results CSV."""
    plan = load_plan(plan_path)
    out = out or plan.output
    if out is None:
        raise click.UsageError("no --out given and the plan has no output path")

    records = run_budget_sweep(plan, max_workers=workers)
    TensorFileManager().write_sweep_csv(records, plan.modes, out)
    failed = sum(1 for record in records if record.error is not None)
    click.echo(f"{len(records)} rows written to {out} ({failed} failed)")


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path), help="Input DTEN.")
@click.option("--mode", required=True, type=int, help="1-based mode j.")
@click.option("--rank", required=True, type=int, help="Number of singular vectors.")
@click.option("--budgets", required=True, callback=_parse_budgets, help="Comma-separated budgets.")
@click.option("--trials", default=20, type=click.IntRange(1), help="Trials per budget.")
@click.option("--seed", default=0, type=click.IntRange(0, 2 ** 64 - 1), help="64-bit seed.")
@click.option("--workers", default=None, type=click.IntRange(1), help="Worker threads.")
@click.option("--out", default=None, type=click.Path(path_type=Path), help="Output JSON path.")
def compare(in_path, mode, rank, budgets, trials, seed, workers, out):
    """Compare direct and product subspace estimates across budgets."""
    file_manager = TensorFileManager()
    tensor = _load_dense(file_manager, in_path)
    table = compare_direct_vs_product(tensor, budgets, mode, rank, trials, seed, max_workers=workers)
    if out is not None:
        file_manager.write_json(table, out)
    click.echo(table.model_dump_json(indent=2))


def main():
    cli(prog_name=settings.app_name)


if __name__ == "__main__":
    main()
