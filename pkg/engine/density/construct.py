"""Closed-form constructions: Bhattacharyya recursion on the BEC and GA on AWGN."""

import json
import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.stats import norm

from config.settings import GA_SEGMENTS_FILE
from density.channel import ChannelModel
from density.evolution import ErrorProfile, de_construct
from errors import ConfigError, IndexRangeError

logger = logging.getLogger(__name__)

GaVariant = Literal["segments", "phi"]


class GaSegment(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: Optional[float]
    a: float
    b: float
    c: float


class PhiApproximation(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    alpha: float
    beta: float
    gamma: float


class GaData(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str
    form: str
    segments: tuple[GaSegment, ...]
    phi: PhiApproximation


@lru_cache(maxsize=2)
def load_ga_data(path: Path = GA_SEGMENTS_FILE) -> GaData:
    try:
        return GaData.model_validate(json.loads(Path(path).read_text()))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load GA data from {path}: {exc}") from exc


def _split_level(values: np.ndarray, minus, plus) -> np.ndarray:
    """One recursion level: position pairs (minus, plus) interleaved in natural order."""
    return np.stack((minus(values), plus(values)), axis=1).ravel()


def bhattacharyya_construct(eps: float, n: int) -> ErrorProfile:
    """Exact Z recursion on BEC(eps): Z -> 2Z - Z^2 (check), Z -> Z^2 (variable)."""
    if not 0.0 <= eps <= 1.0:
        raise IndexRangeError(f"erasure probability {eps} outside [0, 1]")
    if n < 0:
        raise IndexRangeError(f"n={n} must be non-negative")
    z = np.array([eps], dtype=np.float64)
    for _ in range(n):
        z = _split_level(z, lambda v: 2 * v - v * v, lambda v: v * v)
    return ErrorProfile(values=tuple(z.tolist()), metric="erasure")


def _segments_minus(m: np.ndarray, data: GaData) -> np.ndarray:
    out = np.zeros_like(m)
    for seg in data.segments:
        upper = np.inf if seg.upper is None else seg.upper
        mask = (m > seg.lower) & (m <= upper)
        out[mask] = seg.a * m[mask] ** 2 + seg.b * m[mask] + seg.c
    return np.clip(out, 0.0, None)


def _phi_minus(m: np.ndarray, data: GaData) -> np.ndarray:
    """phi^-1(1 - (1 - phi(m))^2) with phi(m) = exp(alpha m^beta + gamma).

    Evaluated in the log domain, where phi inverts in closed form.
    """
    p = data.phi
    log_phi = np.minimum(p.alpha * np.power(np.clip(m, 0.0, None), p.beta) + p.gamma, 0.0)
    log_target = log_phi + np.log(2.0 - np.exp(log_phi))
    base = np.clip((log_target - p.gamma) / p.alpha, 0.0, None)
    return np.power(base, 1.0 / p.beta)


def ga_construct(model: ChannelModel, n: int, variant: GaVariant = "segments") -> ErrorProfile:
    """Mean-value recursion with LLR variance twice the mean; P(A_i) = Q(sqrt(m_i / 2))."""
    if model.kind != "awgn":
        raise ConfigError("Gaussian approximation needs an AWGN channel model")
    if n < 0:
        raise IndexRangeError(f"n={n} must be non-negative")
    data = load_ga_data()
    minus = _phi_minus if variant == "phi" else _segments_minus
    m = np.array([model.llr_mean], dtype=np.float64)
    for _ in range(n):
        m = _split_level(m, lambda v: minus(v, data), lambda v: 2.0 * v)
    probs = norm.sf(np.sqrt(m / 2.0))
    logger.info("GA construction (%s): N=%d, mean %.4f", variant, 1 << n, model.llr_mean)
    return ErrorProfile(values=tuple(float(v) for v in probs), metric="error")


def construct(model: ChannelModel, n: int, method: str = "de") -> ErrorProfile:
    """Dispatch on construction name: de, ga, ga-phi or bhattacharyya."""
    if method == "de":
        return de_construct(model, n)
    if method == "ga":
        return ga_construct(model, n, "segments")
    if method == "ga-phi":
        return ga_construct(model, n, "phi")
    if method == "bhattacharyya":
        if model.kind == "bec":
            return bhattacharyya_construct(model.epsilon, n)
        # BEC surrogate with the same Bhattacharyya parameter exp(-1/(2 sigma^2))
        return bhattacharyya_construct(math.exp(-1.0 / (2.0 * model.noise_variance)), n)
    raise ConfigError(f"unknown construction method {method!r}")
