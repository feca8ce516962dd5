"""Successive-cancellation decoding in natural order."""

import numpy as np

from errors import LengthMismatchError
from polar.core import encode
from polar.llr import boxplus, hard_decision
from polar.profile import CodeProfile


def _decode(llrs: np.ndarray, frozen: np.ndarray) -> np.ndarray:
    N = llrs.shape[-1]
    if N == 1:
        bit = hard_decision(llrs)
        bit[..., frozen] = 0
        return bit
    h = N // 2
    left, right = llrs[..., :h], llrs[..., h:]
    u_a = _decode(boxplus(left, right), frozen[:h])
    sign = 1.0 - 2.0 * encode(u_a, h.bit_length() - 1)
    u_b = _decode(right + sign * left, frozen[h:])
    return np.concatenate([u_a, u_b], axis=-1)


def sc_decode(llrs: np.ndarray, profile: CodeProfile) -> np.ndarray:
    """Return u-hat; frozen positions decide 0, ties (LLR 0) decide 0.

    ``llrs`` may carry a leading batch axis.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape[-1] != profile.N:
        raise LengthMismatchError(f"expected {profile.N} LLRs, got {llrs.shape[-1]}")
    return _decode(llrs, profile.frozen_mask)
