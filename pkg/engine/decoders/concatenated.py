"""BP over the joint graph of an outer polar code grafted onto M inner codes."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Protocol

import numpy as np

from config import SETTINGS
from decoders.bp import BpState
from errors import LengthMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class JointGraph:
    """Frozen masks of both levels and the outer-to-inner wiring (0-based).

    Outer position p feeds leftmost input ``inner[p]`` of block ``block[p]``.
    """

    outer_frozen: np.ndarray = field(repr=False)
    inner_frozen: np.ndarray = field(repr=False)
    block: np.ndarray = field(repr=False)
    inner: np.ndarray = field(repr=False)

    @property
    def M(self) -> int:
        return self.inner_frozen.shape[0]

    @property
    def N(self) -> int:
        return self.inner_frozen.shape[1]

    @property
    def N0(self) -> int:
        return self.outer_frozen.shape[0]


class ConcatenatedCode(Protocol):
    def joint_graph(self) -> JointGraph: ...


@dataclass
class ConcatenatedResult:
    outer_u: np.ndarray
    outer_x: np.ndarray
    inner_u: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray


def _exchange_up(inner: BpState, outer: BpState, graph: JointGraph) -> None:
    outer.left[outer.n] = inner.left[0][:, graph.block, graph.inner]


def _exchange_down(inner: BpState, outer: BpState, graph: JointGraph) -> None:
    inner.right[0][:, graph.block, graph.inner] = outer.right[outer.n]


def bp_decode_concatenated(
    code: ConcatenatedCode | JointGraph,
    llrs: np.ndarray,
    max_iters: Optional[int] = None,
    early_stop: bool = True,
) -> ConcatenatedResult:
    """Joint BP; ``llrs`` has shape (M, N) or (frames, M, N).

    One global iteration: inner leftward, inner-to-outer exchange, outer
    leftward, outer rightward, outer-to-inner exchange, inner rightward.
    Outer codeword positions get no channel observation.
    """
    graph = code if isinstance(code, JointGraph) else code.joint_graph()
    max_iters = SETTINGS.decoder.max_iters if max_iters is None else max_iters
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape[-2:] != (graph.M, graph.N):
        raise LengthMismatchError(f"expected LLR blocks of shape {(graph.M, graph.N)}, got {llrs.shape[-2:]}")
    single = llrs.ndim == 2
    frames = llrs.reshape(-1, graph.M, graph.N)
    F = frames.shape[0]

    inner = BpState.from_channel(frames, graph.inner_frozen, max_iters)
    outer = BpState.from_channel(np.zeros((F, graph.N0)), graph.outer_frozen, max_iters)

    outer_u = np.zeros((F, graph.N0), dtype=np.uint8)
    outer_x = np.zeros((F, graph.N0), dtype=np.uint8)
    inner_u = np.zeros((F, graph.M, graph.N), dtype=np.uint8)
    converged = np.zeros(F, dtype=bool)
    iterations = np.zeros(F, dtype=np.int64)
    active = np.arange(F)

    for it in range(1, max_iters + 1):
        inner.leftward()
        _exchange_up(inner, outer, graph)
        outer.leftward()
        outer.rightward()
        _exchange_down(inner, outer, graph)
        inner.rightward()

        ok = inner.satisfied(graph.inner_frozen).all(axis=-1) & outer.satisfied(graph.outer_frozen)
        done = ok if early_stop else np.zeros(active.size, dtype=bool)
        if it == max_iters:
            done = np.ones(active.size, dtype=bool)
        if done.any():
            rows = active[done]
            ou, ox = outer.decisions(graph.outer_frozen)
            iu, _ = inner.decisions(graph.inner_frozen)
            outer_u[rows], outer_x[rows], inner_u[rows] = ou[done], ox[done], iu[done]
            converged[rows] = ok[done]
            iterations[rows] = it
            active = active[~done]
            inner.select(~done)
            outer.select(~done)
        if active.size == 0:
            break

    if (~converged).any():
        logger.debug("joint BP: %d of %d frames did not converge", int((~converged).sum()), F)
    result = ConcatenatedResult(outer_u, outer_x, inner_u, converged, iterations)
    if single:
        return ConcatenatedResult(outer_u[0], outer_x[0], inner_u[0], converged[0], iterations[0])
    return result
