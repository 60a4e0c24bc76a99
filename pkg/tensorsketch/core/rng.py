"""
Counter-based random numbers.

Every random decision in the package is a pure function of a 64-bit seed
and a 64-bit counter, computed with the Philox-4x32-10 block function.
The same (seed, counter) pair gives the same number on any platform and
under any thread schedule, which makes parallel sketching reproducible.
"""

from typing import Union

import numpy as np


MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF

_PHILOX_M0 = np.uint64(0xD2511F53)
_PHILOX_M1 = np.uint64(0xCD9E8D57)
_PHILOX_W0 = np.uint64(0x9E3779B9)
_PHILOX_W1 = np.uint64(0xBB67AE85)
_U32 = np.uint64(MASK32)
_SHIFT32 = np.uint64(32)
_PHILOX_ROUNDS = 10

# Salts for the two independent sketches of the product estimator.
PRODUCT_SALT_1 = 0x9E3779B97F4A7C15
PRODUCT_SALT_2 = 0xBF58476D1CE4E5B9


def _as_seed(seed: int) -> int:
    return int(seed) & MASK64


def philox4x32(seed: int, counters: np.ndarray):
    """
    Run Philox-4x32-10 on a vector of 64-bit counters under a 64-bit key.

    Returns the four 32-bit output words, each as a uint64 array.
    """
    seed = _as_seed(seed)
    ctr = np.asarray(counters, dtype=np.uint64)
    c0 = ctr & _U32
    c1 = ctr >> _SHIFT32
    c2 = np.zeros_like(ctr)
    c3 = np.zeros_like(ctr)
    k0 = np.uint64(seed & MASK32)
    k1 = np.uint64(seed >> 32)

    for _ in range(_PHILOX_ROUNDS):
        # both factors are below 2**32, so the products fit in 64 bits
        p0 = c0 * _PHILOX_M0
        p1 = c2 * _PHILOX_M1
        hi0, lo0 = p0 >> _SHIFT32, p0 & _U32
        hi1, lo1 = p1 >> _SHIFT32, p1 & _U32
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + _PHILOX_W0) & _U32
        k1 = (k1 + _PHILOX_W1) & _U32

    return c0, c1, c2, c3


def per_entry_uniform(seed: int, linear_index: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Uniform number in [0, 1) derived purely from (seed, linear_index).

    Accepts a scalar index or an array of indices; 53 random bits per draw.
    """
    scalar = np.isscalar(linear_index)
    idx = np.atleast_1d(np.asarray(linear_index, dtype=np.int64))
    if idx.size and idx.min() < 0:
        raise ValueError("linear indices must be nonnegative")

    x0, x1, _, _ = philox4x32(seed, idx.astype(np.uint64))
    bits = ((x0 >> np.uint64(5)) << np.uint64(26)) | (x1 >> np.uint64(6))
    u = bits.astype(np.float64) * (2.0 ** -53)

    if scalar:
        return float(u[0])
    return u.reshape(np.shape(linear_index))


def derive_seed(seed: int, *path: int) -> int:
    """
    Derive a child seed by feeding each path component as a counter under
    the running seed as key. ``derive_seed(s)`` mixes ``s`` at counter 0.
    """
    current = _as_seed(seed)
    for component in (path or (0,)):
        counter = np.array([_as_seed(component)], dtype=np.uint64)
        x0, x1, _, _ = philox4x32(current, counter)
        current = (int(x1[0]) << 32) | int(x0[0])
    return current


def product_child_seeds(seed: int):
    """Seeds of the two independent sketches used by the product estimator."""
    seed = _as_seed(seed)
    return derive_seed(seed ^ PRODUCT_SALT_1), derive_seed(seed ^ PRODUCT_SALT_2)
