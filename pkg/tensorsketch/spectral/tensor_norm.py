"""
Tensor spectral norm estimation by multi-start higher-order power iteration.

The spectral norm sup <A, u_1 x ... x u_k> over unit vectors is NP-hard to
compute for k >= 3. The estimator below alternates exact maximization over
one factor at a time; every returned value is attained at explicit unit
vectors and is therefore a certified lower bound on the true norm.
"""

import logging
from typing import List, Optional, Union

import numpy as np

from tensorsketch.config import settings
from tensorsketch.core.exceptions import ContractViolationError, UndefinedQuantityError
from tensorsketch.core.rng import derive_seed
from tensorsketch.models.report_models import NormEstimate
from tensorsketch.models.tensor_models import DenseTensor, SparseTensor
from tensorsketch.tensors.ops import densify, frobenius_norm, scaled_norm


logger = logging.getLogger(__name__)

TensorLike = Union[DenseTensor, SparseTensor, np.ndarray]

_TINY = np.finfo(np.float64).tiny


def _as_array(A: TensorLike) -> np.ndarray:
    if isinstance(A, SparseTensor):
        return densify(A).array
    if isinstance(A, DenseTensor):
        return A.array
    return np.asarray(A, dtype=np.float64)


def _contract_except(array: np.ndarray, factors: List[np.ndarray], skip: int) -> np.ndarray:
    """Contract every mode but ``skip`` with its factor; returns a vector."""
    result = array
    # highest modes first so the remaining axis numbers stay valid
    for m in reversed(range(array.ndim)):
        if m == skip:
            continue
        result = np.tensordot(result, factors[m], axes=([m], [0]))
    return result


def multilinear_form(array: np.ndarray, factors: List[np.ndarray]) -> float:
    """<A, u_1 x ... x u_k>."""
    last = array.ndim - 1
    return float(np.dot(_contract_except(array, factors, last), factors[last]))


def _unfolding_starts(array: np.ndarray) -> List[np.ndarray]:
    starts = []
    for j in range(array.ndim):
        unfolded = np.moveaxis(array, j, 0).reshape(array.shape[j], -1)
        left, _, _ = np.linalg.svd(unfolded, full_matrices=False)
        starts.append(left[:, 0].copy())
    return starts


def _random_starts(shape, seed: int) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    starts = []
    for d in shape:
        u = rng.standard_normal(d)
        norm = np.linalg.norm(u)
        starts.append(u / norm if norm > 0 else np.eye(d)[0])
    return starts


def _power_iteration(array: np.ndarray, factors: List[np.ndarray], max_iters: int, tol: float):
    k = array.ndim
    history = []
    converged = False
    sweeps = 0

    for sweeps in range(1, max_iters + 1):
        for j in range(k):
            g = _contract_except(array, factors, j)
            norm = np.linalg.norm(g)
            if norm > 0:
                factors[j] = g / norm
        objective = float(np.dot(g, factors[k - 1]))
        if history and abs(objective - history[-1]) <= tol * max(abs(objective), _TINY):
            history.append(objective)
            converged = True
            break
        history.append(objective)

    return factors, history, converged, sweeps


def tensor_spectral_norm(
    A: TensorLike,
    restarts: Optional[int] = None,
    max_iters: Optional[int] = None,
    tol: Optional[float] = None,
    seed: int = 0,
) -> NormEstimate:
    """
    Lower-bound estimate of the spectral norm of ``A``.

    The first start uses the top left singular vector of every unfolding;
    the remaining ``restarts - 1`` starts are Gaussian, seeded per restart
    from ``seed`` so the result does not depend on execution order.
    """
    restarts = settings.norm_restarts if restarts is None else int(restarts)
    max_iters = settings.norm_max_iters if max_iters is None else int(max_iters)
    tol = settings.norm_tol if tol is None else float(tol)
    if restarts < 1 or max_iters < 1 or not tol > 0:
        raise ContractViolationError("restarts and max_iters must be >= 1 and tol > 0")

    array = _as_array(A)
    if not np.any(array):
        factors = [np.eye(d)[0].tolist() for d in array.shape]
        return NormEstimate(value=0.0, unit_factors=factors, restarts_used=0,
                            iterations_used=0, converged=True, seed=seed, history=[0.0])

    # iterate on A / max|A| so contractions and norms stay in floating-point range
    scale = float(np.max(np.abs(array)))
    array = array / scale

    best = None
    for restart in range(restarts):
        if restart == 0:
            start = _unfolding_starts(array)
        else:
            start = _random_starts(array.shape, derive_seed(seed, restart))
        factors, history, converged, sweeps = _power_iteration(array, start, max_iters, tol)
        value = multilinear_form(array, factors)
        logger.debug(f"Restart {restart}: value {value:.12g} after {sweeps} sweeps (converged={converged})")
        if best is None or value > best[0]:
            best = (value, factors, history, converged, sweeps)

    value, factors, history, converged, sweeps = best

    if array.ndim == 2:
        sigma_1 = float(np.linalg.svd(array, compute_uv=False)[0])
        if value < sigma_1 * (1 - 1e-8):
            logger.warning(f"Power iteration value {value * scale:.12g} below exact sigma_1 {sigma_1 * scale:.12g}")

    return NormEstimate(
        value=max(0.0, value) * scale,
        unit_factors=[u.tolist() for u in factors],
        restarts_used=restarts,
        iterations_used=sweeps,
        converged=converged,
        seed=seed,
        history=[h * scale for h in history],
    )


def stable_rank(A: TensorLike, norm_estimate: NormEstimate) -> float:
    """||A||_F^2 / ||A||^2 using the estimated norm, an upper bound on the true value."""
    if norm_estimate.value <= 0:
        raise UndefinedQuantityError("stable rank is undefined for a zero spectral norm")
    if isinstance(A, (DenseTensor, SparseTensor)):
        fro = frobenius_norm(A)
    else:
        fro = scaled_norm(A)
    return (fro / norm_estimate.value) ** 2
