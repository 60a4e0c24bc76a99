"""Small builders shared by several test modules."""

import numpy as np


def outer(*vectors) -> np.ndarray:
    """Outer product u_1 x ... x u_k."""
    result = np.asarray(vectors[0], dtype=np.float64)
    for v in vectors[1:]:
        result = np.multiply.outer(result, np.asarray(v, dtype=np.float64))
    return result


def superdiagonal(values, order: int = 3) -> np.ndarray:
    """k-way tensor with ``values`` on its superdiagonal."""
    d = len(values)
    array = np.zeros((d,) * order)
    for t, value in enumerate(values):
        array[(t,) * order] = value
    return array
