"""BPSK over AWGN and the binary erasure channel, emitting clamped LLRs."""

import numpy as np

from config import SETTINGS
from density.channel import ChannelModel
from errors import ConfigError
from polar.llr import clamp


def seeded_rng(*key: int) -> np.random.Generator:
    """Generator keyed by a tuple such as (seed, snr_index, batch_index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(k) for k in key])))


def awgn_transmit(codeword: np.ndarray, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """BPSK 0 -> +1, 1 -> -1, noise variance sigma2, LLR = 2y / sigma2."""
    if sigma2 <= 0:
        raise ConfigError(f"noise variance must be positive, got {sigma2}")
    symbols = 1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)
    y = symbols + rng.normal(0.0, np.sqrt(sigma2), size=symbols.shape)
    return clamp(2.0 * y / sigma2, SETTINGS.decoder.llr_clamp)


def bec_transmit(codeword: np.ndarray, eps: float, rng: np.random.Generator) -> np.ndarray:
    """Known bits at +-clamp, erasures at exactly 0."""
    limit = SETTINGS.decoder.llr_clamp
    llrs = limit * (1.0 - 2.0 * np.asarray(codeword, dtype=np.float64))
    llrs[rng.random(llrs.shape) < eps] = 0.0
    return llrs


def transmit(codeword: np.ndarray, model: ChannelModel, rng: np.random.Generator) -> np.ndarray:
    if model.kind == "bec":
        return bec_transmit(codeword, model.epsilon, rng)
    return awgn_transmit(codeword, model.noise_variance, rng)
