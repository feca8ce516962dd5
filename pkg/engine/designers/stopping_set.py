"""Stopping-set swap design of the outer unfrozen set."""

import logging
from typing import Optional

import numpy as np

from architectures.connection import ConnectionMap, check_swap_safety
from designers.types import DesignInput, DesignResult, UnfrozenSet
from errors import IndexRangeError, InfeasibleDesignError
from polar.core import generator_row, support
from polar.factor_graph import SubmatrixSelector, g_bound_multi

logger = logging.getLogger(__name__)


def compute_J(i: int, outer_n: int, connection: ConnectionMap) -> list[SubmatrixSelector]:
    """Inner nodes reached by the leaves of ST(i), one selector per inner code."""
    leaves = support(generator_row(i, outer_n))
    rows: dict[int, list[int]] = {m: [] for m in range(1, connection.blocks + 1)}
    for leaf in leaves:
        block, inner = connection.image(leaf)
        rows[block].append(inner)
    return [SubmatrixSelector(rows=tuple(rows[m])) for m in sorted(rows)]


def g_values(outer_n: int, connection: ConnectionMap, inner_n: int) -> dict[int, int]:
    """g(i) for every outer position, summed over the inner codes."""
    return {i: g_bound_multi(compute_J(i, outer_n, connection), inner_n) for i in range(1, (1 << outer_n) + 1)}


def ss_design(design: DesignInput, connection: Optional[ConnectionMap] = None) -> DesignResult:
    """Swap s low-g unfrozen positions for frozen ones with g above the threshold.

    The threshold is the s-th smallest g among Q(1..K0). Each round takes
    the minimum-g entry of Q(1..K0) (first in Q order on ties), overwrites
    it with the first entry beyond K0 whose g exceeds the threshold, and
    deletes that entry from Q. With a connection map, every swap must stay
    inside one inner code.
    """
    Q, g, K0, s = list(design.Q), design.g_values, design.K0, design.s
    if s == 0:
        return DesignResult(
            method="ss",
            unfrozen=UnfrozenSet(N0=len(Q), positions=tuple(Q[:K0])),
            parameters={"s": 0},
        )
    threshold = sorted(g[q] for q in Q[:K0])[s - 1]
    qualifying = [q for q in Q[K0:] if g[q] > threshold]
    if len(qualifying) < s:
        raise InfeasibleDesignError(
            f"only {len(qualifying)} frozen positions have g > {threshold}; cannot make {s} swaps"
        )

    swaps: list[tuple[int, int]] = []
    for _ in range(s):
        head = [g[q] for q in Q[:K0]]
        index = int(np.argmin(head))
        j = next(j for j in range(K0, len(Q)) if g[Q[j]] > threshold)
        swaps.append((Q[index], Q[j]))
        Q[index] = Q[j]
        del Q[j]

    if connection is not None:
        check_swap_safety(connection, swaps)
    for out, into in swaps:
        logger.debug("swap %d (g=%d) -> %d (g=%d)", out, g[out], into, g[into])
    logger.info("Designed outer code: method=ss K0=%d s=%d threshold=%d", K0, s, threshold)
    return DesignResult(
        method="ss",
        unfrozen=UnfrozenSet(N0=len(design.Q), positions=tuple(Q[:K0])),
        swaps=tuple(swaps),
        parameters={"s": s, "threshold": threshold},
    )


def ss_design_for(
    Q: tuple[int, ...],
    K0: int,
    s: int,
    outer_n: int,
    connection: ConnectionMap,
    inner_n: int,
    swap_safe: bool = False,
) -> DesignResult:
    """g values from the connection, then the swap design."""
    if len(Q) != 1 << outer_n:
        raise IndexRangeError(f"Q has {len(Q)} entries for outer n={outer_n}")
    design = DesignInput(Q=Q, g_values=g_values(outer_n, connection, inner_n), K0=K0, s=s)
    return ss_design(design, connection if swap_safe else None)
