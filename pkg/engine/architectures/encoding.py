"""End-to-end encoders. Inputs may carry a leading batch axis."""

from typing import Sequence

import numpy as np

from architectures.codes import AugmentedCode, LocalGlobalCode
from errors import LengthMismatchError
from polar.core import encode
from polar.profile import systematic_encode


def _bits(values: Sequence[int] | np.ndarray, expected: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.uint8)
    if arr.shape[-1] != expected:
        raise LengthMismatchError(f"{what}: expected {expected} bits, got {arr.shape[-1]}")
    return arr


def encode_augmented(code: AugmentedCode, outer_info: np.ndarray, inner_info: np.ndarray) -> np.ndarray:
    """Outer codeword onto the semipolarized inputs, inner info on A_1, then encode."""
    outer_info = _bits(outer_info, code.K0, "outer information")
    inner_info = _bits(inner_info, code.K1, "inner information")
    lead = np.broadcast_shapes(outer_info.shape[:-1], inner_info.shape[:-1])

    u0 = np.zeros(lead + (code.N0,), dtype=np.uint8)
    u0[..., code.outer.info_positions] = outer_info
    c0 = encode(u0, code.outer.n)

    _, inner_idx = code.connection.arrays()
    u1 = np.zeros(lead + (code.N,), dtype=np.uint8)
    u1[..., code.layout.info_positions] = inner_info
    u1[..., inner_idx] = c0
    return encode(u1, code.inner.n)


def encode_local_global(
    code: LocalGlobalCode,
    global_info: np.ndarray,
    local_infos: Sequence[np.ndarray] | np.ndarray,
) -> np.ndarray:
    """Systematic outer encode, split by the connection map, encode each inner code.

    Returns shape (..., M, N).
    """
    global_info = _bits(global_info, code.K_a, "global information")
    if isinstance(local_infos, np.ndarray):
        if local_infos.ndim < 2 or local_infos.shape[-2] != code.M:
            raise LengthMismatchError(f"expected local information of shape (..., {code.M}, K_b)")
        parts = [local_infos[..., m, :] for m in range(code.M)]
    else:
        parts = list(local_infos)
    if len(parts) != code.M:
        raise LengthMismatchError(f"expected {code.M} local information vectors, got {len(parts)}")
    locals_ = [_bits(v, code.K_b[m], f"local information {m + 1}") for m, v in enumerate(parts)]
    lead = np.broadcast_shapes(global_info.shape[:-1], *(v.shape[:-1] for v in locals_))

    x0, _ = systematic_encode(np.broadcast_to(global_info, lead + (code.K_a,)), code.outer)
    block_idx, inner_idx = code.connection.arrays()
    u = np.zeros(lead + (code.M, code.N), dtype=np.uint8)
    for m, layout in enumerate(code.layouts):
        u[..., m, layout.info_positions] = locals_[m]
    u[..., block_idx, inner_idx] = x0
    return encode(u, code.inners[0].n)
