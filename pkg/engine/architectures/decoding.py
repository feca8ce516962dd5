"""Local and global decode entry points returning information-bit decisions."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from architectures.codes import AugmentedCode, LocalGlobalCode, PolarCode
from decoders.bp import bp_decode
from decoders.concatenated import bp_decode_concatenated
from errors import IndexRangeError, LengthMismatchError


@dataclass
class LocalDecision:
    local_info: np.ndarray
    global_info: np.ndarray
    converged: np.ndarray


@dataclass
class GlobalDecision:
    """``outer_info``: K0 (augmented) or K_a (local-global) bits; ``inner_info`` per block."""

    outer_info: np.ndarray
    inner_info: list[np.ndarray]
    converged: np.ndarray


def decode_local(code: LocalGlobalCode, m: int, llrs: np.ndarray, max_iters: Optional[int] = None) -> LocalDecision:
    """BP on inner code m alone with its semipolarized inputs unfrozen.

    Returns the K_{b_m} decisions and the K_{a_m} decisions in ascending
    outer-position order; parity inputs are decoded and discarded.
    """
    if not 1 <= m <= code.M:
        raise IndexRangeError(f"inner code {m} outside 1..{code.M}")
    layout = code.layouts[m - 1]
    result = bp_decode(llrs, code.inners[m - 1], max_iters, frozen_mask=layout.frozen_mask)
    lookup = code.connection.lookup
    carriers = np.array([lookup[p][1] - 1 for p in code.global_positions(m)], dtype=np.int64)
    return LocalDecision(
        local_info=result.u_hat[..., layout.info_positions],
        global_info=result.u_hat[..., carriers],
        converged=result.converged,
    )


def decode_global(
    code: AugmentedCode | LocalGlobalCode,
    llrs: np.ndarray,
    max_iters: Optional[int] = None,
) -> GlobalDecision:
    """Joint BP over all blocks; ``llrs`` is (M, N) or (frames, M, N).

    An augmented code also accepts (N,) or (frames, N).
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if isinstance(code, AugmentedCode) and llrs.shape[-1] == code.N and (llrs.ndim == 1 or llrs.shape[-2] != 1):
        llrs = llrs[..., None, :]
    if llrs.ndim < 2 or llrs.shape[-2] != code.M:
        raise LengthMismatchError(f"expected LLRs for {code.M} blocks")
    result = bp_decode_concatenated(code, llrs, max_iters)
    layouts = code.layouts() if isinstance(code, AugmentedCode) else code.layouts
    inner_info = [result.inner_u[..., m, layout.info_positions] for m, layout in enumerate(layouts)]
    if isinstance(code, AugmentedCode):
        outer_info = result.outer_u[..., code.outer.info_positions]
    else:
        outer_info = result.outer_x[..., code.outer.base.info_positions]
    return GlobalDecision(outer_info=outer_info, inner_info=inner_info, converged=result.converged)


def decode_single(code: PolarCode, llrs: np.ndarray, max_iters: Optional[int] = None) -> np.ndarray:
    """Plain BP; returns the information-bit decisions."""
    result = bp_decode(llrs, code.profile, max_iters)
    return result.u_hat[..., code.profile.info_positions]
