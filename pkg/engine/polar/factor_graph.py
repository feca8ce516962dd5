"""Sparse polar factor graph, stopping trees, the g(.) bound and an MVSS oracle.

Stages follow the density-evolution convention: stage 1 is the observed
(codeword) side, stage n+1 carries the information bits. The layer between
stages l+1 and l pairs rows k and k+s with s = 2^(l-1) and holds a
degree-3 check {v(k,l+1), v(k+s,l+1), v(k,l)} and a degree-2 check
{v(k+s,l+1), v(k+s,l)}.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from config import SETTINGS
from errors import IndexRangeError, NoStoppingSetError, OracleLimitError
from polar.core import generator_matrix

logger = logging.getLogger(__name__)

MAX_GRAPH_N = 14


class SubmatrixSelector(BaseModel):
    """Leftmost-stage rows J (1-based) selecting the submatrix G_J."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[int, ...] = ()

    @field_validator("rows")
    @classmethod
    def _sorted_unique(cls, rows: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted(set(int(r) for r in rows)))

    def __len__(self) -> int:
        return len(self.rows)


class StoppingTreeSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    root_index: int
    leaf_set: tuple[int, ...]

    @property
    def leaf_count(self) -> int:
        return len(self.leaf_set)


@dataclass(frozen=True, eq=False)
class FactorGraphStructure:
    n: int
    deg3: np.ndarray = field(repr=False)
    deg2: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def num_variables(self) -> int:
        return self.N * (self.n + 1)

    @property
    def num_butterflies(self) -> int:
        return len(self.deg3)

    def node(self, k: int, stage: int) -> int:
        """Variable id of v(k, stage), both 1-based."""
        if not 1 <= k <= self.N or not 1 <= stage <= self.n + 1:
            raise IndexRangeError(f"v({k},{stage}) outside the graph")
        return (stage - 1) * self.N + (k - 1)

    def locate(self, node: int) -> tuple[int, int]:
        stage, row = divmod(int(node), self.N)
        return row + 1, stage + 1

    @property
    def observed_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_variables, dtype=bool)
        mask[: self.N] = True
        return mask

    def stage_nodes(self, stage: int) -> np.ndarray:
        start = (stage - 1) * self.N
        return np.arange(start, start + self.N)


def build_graph(n: int) -> FactorGraphStructure:
    if not 1 <= n <= MAX_GRAPH_N:
        raise IndexRangeError(f"n={n} outside 1..{MAX_GRAPH_N}")
    N = 1 << n
    deg3, deg2 = [], []
    for stage in range(1, n + 1):
        span = 1 << (stage - 1)
        left, right = stage * N, (stage - 1) * N
        for k in range(N):
            if (k // span) % 2:
                continue
            a, b = left + k, left + k + span
            deg3.append((a, b, right + k))
            deg2.append((b, right + k + span))
    return FactorGraphStructure(
        n=n,
        deg3=np.array(deg3, dtype=np.int64),
        deg2=np.array(deg2, dtype=np.int64),
    )


@lru_cache(maxsize=16)
def _right_children(graph: FactorGraphStructure) -> dict[int, list[int]]:
    children: dict[int, list[int]] = {}
    for a, b, c in graph.deg3.tolist():
        children.setdefault(a, []).append(c)
        children.setdefault(b, []).append(c)
    for b, d in graph.deg2.tolist():
        children[b].append(d)
    return children


def stopping_tree(i: int, graph: FactorGraphStructure) -> StoppingTreeSummary:
    """Trace ST(i) rightward from v(i, n+1) and report its stage-1 leaves."""
    root = graph.node(i, graph.n + 1)
    children = _right_children(graph)
    frontier, leaves, seen = [root], set(), set()
    while frontier:
        node = frontier.pop()
        if node in seen:
            continue
        seen.add(node)
        k, stage = graph.locate(node)
        if stage == 1:
            leaves.add(k)
            continue
        frontier.extend(children[node])
    return StoppingTreeSummary(root_index=i, leaf_set=tuple(sorted(leaves)))


def g_bound(J: SubmatrixSelector | Sequence[int], n: int) -> int:
    """Number of weight-one columns of G_J."""
    rows = J.rows if isinstance(J, SubmatrixSelector) else SubmatrixSelector(rows=tuple(J)).rows
    if not rows:
        raise IndexRangeError("J must be non-empty")
    column_sums = generator_matrix(n, rows).sum(axis=0)
    return int(np.count_nonzero(column_sums == 1))


def g_bound_multi(parts: Iterable[SubmatrixSelector | Sequence[int]], n: int) -> int:
    """Sum of g over per-inner-code parts; empty parts count zero."""
    parts = [p if isinstance(p, SubmatrixSelector) else SubmatrixSelector(rows=tuple(p)) for p in parts]
    if not any(len(p) for p in parts):
        raise IndexRangeError("all parts of J are empty")
    return sum(g_bound(p, n) for p in parts if len(p))


def peel(graph: FactorGraphStructure, erased: np.ndarray) -> np.ndarray:
    """Erasure peeling; returns the maximal stopping set inside ``erased``.

    ``erased`` is a boolean mask over variable ids, optionally with a leading
    batch axis. Any check with exactly one erased neighbour resolves it.
    """
    state = np.array(erased, dtype=bool, copy=True)
    squeeze = state.ndim == 1
    if squeeze:
        state = state[None, :]
    while True:
        changed = False
        for checks in (graph.deg3, graph.deg2):
            members = state[:, checks]
            single = members.sum(axis=-1) == 1
            for slot in range(checks.shape[1]):
                rows, cols = np.nonzero(members[:, :, slot] & single)
                if rows.size:
                    state[rows, checks[cols, slot]] = False
                    changed = True
        if not changed:
            break
    return state[0] if squeeze else state


def is_stopping_set(graph: FactorGraphStructure, nodes: np.ndarray) -> bool:
    """Every check touching ``nodes`` meets it at least twice (and it is non-empty)."""
    nodes = np.asarray(nodes, dtype=bool)
    if not nodes.any():
        return False
    for checks in (graph.deg3, graph.deg2):
        hits = nodes[checks].sum(axis=-1)
        if np.any(hits == 1):
            return False
    return True


def mvss_exact(
    J: SubmatrixSelector | Sequence[int],
    graph: FactorGraphStructure,
    info_set: Iterable[int],
) -> tuple[int, tuple[int, ...]]:
    """Exact minimum VSS for J by exhaustive leaf enumeration (N <= 16).

    Erased set: the candidate observed leaves, every hidden node and J on the
    leftmost stage; leftmost nodes outside J are known. A candidate is a VSS
    when all of J survives peeling. Candidates are drawn from the union of
    the stopping-tree leaves of J, since any other leaf is resolved by
    forward peeling. Returns (size, lexicographically smallest witness).
    """
    rows = J.rows if isinstance(J, SubmatrixSelector) else SubmatrixSelector(rows=tuple(J)).rows
    if graph.N > SETTINGS.design.oracle_max_length:
        raise OracleLimitError(f"N={graph.N} exceeds the exhaustive limit {SETTINGS.design.oracle_max_length}")
    if not rows:
        raise IndexRangeError("J must be non-empty")
    if rows[0] < 1 or rows[-1] > graph.N:
        raise IndexRangeError(f"J={rows} outside 1..{graph.N}")
    info = set(info_set)
    if not set(rows) <= info:
        raise IndexRangeError(f"J={rows} is not inside the information set")

    leftmost = graph.stage_nodes(graph.n + 1)
    j_nodes = leftmost[np.array(rows) - 1]
    base = np.zeros(graph.num_variables, dtype=bool)
    base[graph.N: graph.n * graph.N] = True
    base[j_nodes] = True

    candidates = sorted(set().union(*(stopping_tree(i, graph).leaf_set for i in rows)))
    for size in range(1, len(candidates) + 1):
        combos = np.array(list(combinations(candidates, size)), dtype=np.int64) - 1
        erased = np.repeat(base[None, :], len(combos), axis=0)
        erased[np.arange(len(combos))[:, None], combos] = True
        survivors = peel(graph, erased)
        hits = np.flatnonzero(survivors[:, j_nodes].all(axis=1))
        if hits.size:
            witness = tuple(int(k) + 1 for k in combos[hits[0]])
            logger.debug("MVSS(%s) = %d, witness %s", rows, size, witness)
            return size, witness
    raise NoStoppingSetError(f"no stopping set has leftmost nodes exactly {rows}")
