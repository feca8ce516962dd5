"""Polar encoding over GF(2) with G = F^{(x)n}, natural order (no bit reversal).

Public indices are 1-based. Bit vectors are ``numpy.uint8`` arrays; every
encoder also accepts a leading batch axis.
"""

import logging
from typing import Iterable, Sequence

import numpy as np

from errors import IndexRangeError, LengthMismatchError

logger = logging.getLogger(__name__)

MAX_N = 24


def as_bits(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    """Validate and convert to a uint8 bit array."""
    arr = np.asarray(bits)
    if arr.size == 0:
        raise LengthMismatchError("bit vector must be non-empty")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bit vector entries must be 0 or 1")
    return arr.astype(np.uint8)


def _check_index(i: int, n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise IndexRangeError(f"n={n} outside 0..{MAX_N}")
    if not 1 <= i <= 1 << n:
        raise IndexRangeError(f"index {i} outside 1..{1 << n}")


def generator_row(i: int, n: int) -> np.ndarray:
    """Row ``i`` of F^{(x)n} by the Kronecker bit-product rule.

    Entry (i, j) is the product of F[b_k(i-1), b_k(j-1)] over bit positions;
    with F = [[1, 0], [1, 1]] that is 1 exactly when the bits of j-1 are a
    subset of the bits of i-1.
    """
    _check_index(i, n)
    cols = np.arange(1 << n)
    return ((cols & ~(i - 1)) == 0).astype(np.uint8)


def generator_row_recursive(i: int, n: int) -> np.ndarray:
    """Row ``i`` from the block recursion G^{n+1} = [[G^n, 0], [G^n, G^n]]."""
    _check_index(i, n)
    if n == 0:
        return np.ones(1, dtype=np.uint8)
    half = 1 << (n - 1)
    if i <= half:
        upper = generator_row_recursive(i, n - 1)
        return np.concatenate([upper, np.zeros(half, dtype=np.uint8)])
    lower = generator_row_recursive(i - half, n - 1)
    return np.concatenate([lower, lower])


def generator_matrix(n: int, rows: Iterable[int] | None = None) -> np.ndarray:
    """Selected rows (1-based) of F^{(x)n}; all rows when ``rows`` is None."""
    if rows is None:
        rows = range(1, (1 << n) + 1)
    selected = [generator_row(i, n) for i in rows]
    if not selected:
        return np.zeros((0, 1 << n), dtype=np.uint8)
    return np.vstack(selected)


def row_weight(i: int, n: int) -> int:
    """Hamming weight of row ``i``; equals 2^popcount(i-1)."""
    _check_index(i, n)
    return 1 << bin(i - 1).count("1")


def encode(u: Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    """x = u F^{(x)n} over GF(2) by the in-place butterfly recursion.

    The last axis has length 2^n; any leading axes are treated as a batch.
    """
    x = np.array(u, dtype=np.uint8, copy=True)
    N = 1 << n
    if x.shape[-1] != N:
        raise LengthMismatchError(f"expected length {N}, got {x.shape[-1]}")
    lead = x.shape[:-1]
    span = 1
    while span < N:
        view = x.reshape(*lead, N // (2 * span), 2, span)
        view[..., 0, :] ^= view[..., 1, :]
        span *= 2
    return x


def support(bits: np.ndarray) -> tuple[int, ...]:
    """1-based positions of the ones."""
    return tuple(int(k) + 1 for k in np.flatnonzero(bits))
