"""LLR arithmetic shared by the decoders and the density engine."""

import numpy as np

LLR_CLAMP = 40.0


def clamp(llr: np.ndarray, limit: float = LLR_CLAMP) -> np.ndarray:
    return np.clip(llr, -limit, limit)


def boxplus(x: np.ndarray, y: np.ndarray, limit: float = LLR_CLAMP) -> np.ndarray:
    """Exact check-node rule 2*atanh(tanh(x/2)*tanh(y/2)), clamped to +-limit.

    Evaluated as sign*min + log1p(e^-|x+y|) - log1p(e^-|x-y|) so that large
    magnitudes never hit atanh(1). A zero input gives exactly zero; an
    operand at the clamp counts as saturated and passes the other one
    through with its sign applied.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = np.sign(x) * np.sign(y) * np.minimum(np.abs(x), np.abs(y))
    correction = np.log1p(np.exp(-np.abs(x + y))) - np.log1p(np.exp(-np.abs(x - y)))
    saturated = np.maximum(np.abs(x), np.abs(y)) >= limit
    return clamp(out + np.where(saturated, 0.0, correction), limit)


def hard_decision(llr: np.ndarray) -> np.ndarray:
    """0 for non-negative LLRs, 1 otherwise."""
    return (np.asarray(llr) < 0).astype(np.uint8)
