"""Belief-propagation decoding on the polar factor graph.

Messages live on columns 0..n: column 0 is the u side (leftmost stage),
column n the codeword side. The layer between columns c and c+1 pairs
rows k and k+s with s = 2^(n-1-c). ``left[c]`` carries messages flowing
towards the u side, ``right[c]`` those flowing towards the codeword side.
Every array may carry leading batch axes.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config import SETTINGS
from errors import LengthMismatchError
from polar.core import encode
from polar.llr import boxplus, clamp, hard_decision
from polar.profile import CodeProfile

logger = logging.getLogger(__name__)


def _pairs(arr: np.ndarray, span: int) -> tuple[np.ndarray, np.ndarray]:
    N = arr.shape[-1]
    view = arr.reshape(*arr.shape[:-1], N // (2 * span), 2, span)
    return view[..., 0, :], view[..., 1, :]


@dataclass
class BpState:
    """Left/right messages per column, pinned priors and the iteration count."""

    n: int
    left: list[np.ndarray] = field(repr=False)
    right: list[np.ndarray] = field(repr=False)
    max_iterations: int = SETTINGS.decoder.max_iters
    iteration: int = 0
    limit: float = SETTINGS.decoder.llr_clamp

    @classmethod
    def from_channel(
        cls,
        llrs: np.ndarray,
        frozen_mask: np.ndarray,
        max_iterations: int = SETTINGS.decoder.max_iters,
        limit: float = SETTINGS.decoder.llr_clamp,
    ) -> "BpState":
        llrs = np.asarray(llrs, dtype=np.float64)
        N = llrs.shape[-1]
        n = N.bit_length() - 1
        if N != 1 << n or frozen_mask.shape[-1] != N:
            raise LengthMismatchError(f"LLR length {N} does not match the code")
        left = [np.zeros_like(llrs) for _ in range(n + 1)]
        right = [np.zeros_like(llrs) for _ in range(n + 1)]
        left[n] = clamp(llrs, limit)
        right[0] = np.where(frozen_mask, limit, 0.0) + np.zeros_like(llrs)
        return cls(n=n, left=left, right=right, max_iterations=max_iterations, limit=limit)

    @property
    def N(self) -> int:
        return 1 << self.n

    def span(self, c: int) -> int:
        return 1 << (self.n - 1 - c)

    def leftward(self) -> None:
        for c in range(self.n - 1, -1, -1):
            s = self.span(c)
            la, lb = _pairs(self.left[c + 1], s)
            ra, rb = _pairs(self.right[c], s)
            out = np.empty_like(self.left[c])
            oa, ob = _pairs(out, s)
            oa[...] = boxplus(la, lb + rb, self.limit)
            ob[...] = clamp(boxplus(ra, la, self.limit) + lb, self.limit)
            self.left[c] = out

    def rightward(self) -> None:
        for c in range(self.n):
            s = self.span(c)
            la, lb = _pairs(self.left[c + 1], s)
            ra, rb = _pairs(self.right[c], s)
            out = np.empty_like(self.right[c + 1])
            oa, ob = _pairs(out, s)
            oa[...] = boxplus(ra, rb + lb, self.limit)
            ob[...] = clamp(boxplus(ra, la, self.limit) + rb, self.limit)
            self.right[c + 1] = out

    def u_totals(self) -> np.ndarray:
        return self.left[0] + self.right[0]

    def x_totals(self) -> np.ndarray:
        return self.left[self.n] + self.right[self.n]

    def decisions(self, frozen_mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u_hat = np.where(frozen_mask, 0, hard_decision(self.u_totals())).astype(np.uint8)
        return u_hat, hard_decision(self.x_totals())

    def satisfied(self, frozen_mask: np.ndarray) -> np.ndarray:
        """Per leading index: re-encoded u-hat matches x-hat and no codeword total is 0."""
        u_hat, x_hat = self.decisions(frozen_mask)
        ok = np.all(encode(u_hat, self.n) == x_hat, axis=-1)
        return ok & np.all(self.x_totals() != 0, axis=-1)

    def select(self, keep: np.ndarray) -> None:
        """Drop frames (first axis) not in ``keep``."""
        self.left = [arr[keep] for arr in self.left]
        self.right = [arr[keep] for arr in self.right]


@dataclass
class BpResult:
    u_hat: np.ndarray
    x_hat: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray

    def squeeze(self) -> "BpResult":
        return BpResult(self.u_hat[0], self.x_hat[0], self.converged[0], self.iterations[0])


def bp_decode(
    llrs: np.ndarray,
    profile: CodeProfile,
    max_iters: Optional[int] = None,
    early_stop: bool = True,
    frozen_mask: Optional[np.ndarray] = None,
) -> BpResult:
    """Round-trip BP: each iteration sweeps leftward then rightward.

    Frames stop individually once the early-stop test holds; with
    ``early_stop`` off every frame runs ``max_iters`` iterations and
    ``converged`` reports the test after the last one. ``frozen_mask``
    overrides the profile's frozen set (used to unfreeze positions).
    """
    max_iters = SETTINGS.decoder.max_iters if max_iters is None else max_iters
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape[-1] != profile.N:
        raise LengthMismatchError(f"expected {profile.N} LLRs, got {llrs.shape[-1]}")
    single = llrs.ndim == 1
    frames = llrs.reshape(-1, profile.N)
    frozen = profile.frozen_mask if frozen_mask is None else np.asarray(frozen_mask, dtype=bool)

    state = BpState.from_channel(frames, frozen, max_iters)
    B = frames.shape[0]
    u_out = np.zeros((B, profile.N), dtype=np.uint8)
    x_out = np.zeros((B, profile.N), dtype=np.uint8)
    converged = np.zeros(B, dtype=bool)
    iterations = np.zeros(B, dtype=np.int64)
    active = np.arange(B)

    for it in range(1, max_iters + 1):
        state.leftward()
        state.rightward()
        state.iteration = it
        ok = state.satisfied(frozen)
        done = ok if early_stop else np.zeros(active.size, dtype=bool)
        if it == max_iters:
            done = np.ones(active.size, dtype=bool)
        if done.any():
            u_hat, x_hat = state.decisions(frozen)
            rows = active[done]
            u_out[rows], x_out[rows] = u_hat[done], x_hat[done]
            converged[rows] = ok[done]
            iterations[rows] = it
            active = active[~done]
            state.select(~done)
        if active.size == 0:
            break

    if max_iters > 0 and (~converged).any():
        logger.debug("BP: %d of %d frames did not converge in %d iterations", int((~converged).sum()), B, max_iters)
    result = BpResult(u_out, x_out, converged, iterations)
    return result.squeeze() if single else result
