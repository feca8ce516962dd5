"""Genie-aided SC bit-channel simulation, the Monte-Carlo check on DE."""

import logging

import numpy as np

from config import SETTINGS
from density.channel import ChannelModel
from density.evolution import ErrorProfile
from errors import IndexRangeError
from polar.llr import boxplus
from sim.channel import seeded_rng, transmit

logger = logging.getLogger(__name__)

MAX_GENIE_N = 64


def genie_llrs(llrs: np.ndarray) -> np.ndarray:
    """Bit-channel LLRs of the all-zero codeword with every earlier bit known.

    With u_a = 0 the SC update for the second half is a plain sum.
    """
    N = llrs.shape[-1]
    if N == 1:
        return llrs
    h = N // 2
    left, right = llrs[..., :h], llrs[..., h:]
    return np.concatenate([genie_llrs(boxplus(left, right)), genie_llrs(right + left)], axis=-1)


def genie_aided_bitchannel_sim(
    n: int,
    model: ChannelModel,
    frames: int,
    seed: int = 0,
    batch_size: int = 4096,
) -> ErrorProfile:
    """Per bit-channel error rate (AWGN, ties count half) or erasure rate (BEC)."""
    N = 1 << n
    if N > MAX_GENIE_N:
        raise IndexRangeError(f"N={N} exceeds {MAX_GENIE_N} for genie-aided simulation")
    if frames < 1:
        raise IndexRangeError("frames must be at least 1")
    limit = SETTINGS.decoder.llr_clamp
    errors = np.zeros(N, dtype=np.float64)
    done, batch = 0, 0
    while done < frames:
        size = min(batch_size, frames - done)
        rng = seeded_rng(seed, batch)
        llrs = transmit(np.zeros((size, N), dtype=np.uint8), model, rng)
        bit_llrs = np.clip(genie_llrs(llrs), -limit, limit)
        if model.is_erasure:
            errors += np.count_nonzero(bit_llrs == 0, axis=0)
        else:
            errors += np.count_nonzero(bit_llrs < 0, axis=0) + 0.5 * np.count_nonzero(bit_llrs == 0, axis=0)
        done += size
        batch += 1
    metric = "erasure" if model.is_erasure else "error"
    logger.info("Genie-aided simulation: N=%d, %d frames", N, frames)
    return ErrorProfile(values=tuple((errors / frames).tolist()), metric=metric)
