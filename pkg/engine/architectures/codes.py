"""Concatenated code assemblies and their rate bookkeeping."""

import logging
from typing import Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from architectures.connection import (
    ConnectionMap,
    Example1Partition,
    example1_connection,
    natural_connection,
)
from architectures.layout import InnerLayout, select_semipolarized
from decoders.concatenated import JointGraph
from errors import LengthMismatchError, PartitionError
from polar.profile import CodeProfile, SystematicProfile

logger = logging.getLogger(__name__)

ConnectionKind = Literal["natural", "example1"]


class PolarCode(BaseModel):
    """A single polar code, the plain reference architecture."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    profile: CodeProfile

    @property
    def M(self) -> int:
        return 1

    @property
    def N(self) -> int:
        return self.profile.N

    def rate(self) -> float:
        return self.profile.rate


class AugmentedCode(BaseModel):
    """Outer codeword carried on the semipolarized inputs of one inner code."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    outer: CodeProfile
    inner: CodeProfile
    layout: InnerLayout
    connection: ConnectionMap

    @model_validator(mode="after")
    def _consistent(self) -> "AugmentedCode":
        if set(self.layout.info) != set(self.inner.unfrozen):
            raise PartitionError("inner information set differs from the layout")
        if len(self.layout.semipolarized) != self.outer.N:
            raise PartitionError(f"{len(self.layout.semipolarized)} semipolarized inputs for N0={self.outer.N}")
        if self.connection.N0 != self.outer.N or self.connection.blocks != 1:
            raise PartitionError("connection map does not cover the outer code on one inner block")
        if self.connection.inner_indices(1) != self.layout.semipolarized:
            raise PartitionError("connection map does not target the semipolarized set")
        return self

    @property
    def M(self) -> int:
        return 1

    @property
    def N0(self) -> int:
        return self.outer.N

    @property
    def K0(self) -> int:
        return self.outer.K

    @property
    def N(self) -> int:
        return self.inner.N

    @property
    def K1(self) -> int:
        return self.inner.K

    def rate(self) -> float:
        """(K0 + K1) / N1."""
        return (self.K0 + self.K1) / self.N

    def layouts(self) -> tuple[InnerLayout, ...]:
        return (self.layout,)

    def joint_graph(self) -> JointGraph:
        block, inner = self.connection.arrays()
        return JointGraph(
            outer_frozen=self.outer.frozen_mask,
            inner_frozen=self.layout.frozen_mask[None, :],
            block=block,
            inner=inner,
        )

    def with_outer(self, outer: CodeProfile) -> "AugmentedCode":
        return self.model_copy(update={"outer": outer})


class LocalGlobalCode(BaseModel):
    """M inner codes coupled by a systematic outer code (B = A)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    outer: SystematicProfile
    inners: tuple[CodeProfile, ...]
    layouts: tuple[InnerLayout, ...]
    connection: ConnectionMap
    partition: Optional[Example1Partition] = None

    @model_validator(mode="after")
    def _consistent(self) -> "LocalGlobalCode":
        if len(self.inners) != len(self.layouts) or not self.inners:
            raise PartitionError("need one layout per inner code")
        if len({p.N for p in self.inners}) != 1:
            raise PartitionError("inner codes must share one length")
        if self.connection.N0 != self.outer.base.N:
            raise PartitionError("connection map does not cover the outer codeword")
        for m, (profile, layout) in enumerate(zip(self.inners, self.layouts), start=1):
            if set(layout.info) != set(profile.unfrozen):
                raise PartitionError(f"inner code {m}: information set differs from the layout")
            if self.connection.inner_indices(m) != layout.semipolarized:
                raise PartitionError(f"inner code {m}: connection does not match the semipolarized set")
        if self.partition is not None:
            for m in range(1, self.M + 1):
                if self.partition.block_positions(m) != self.connection.outer_positions(m):
                    raise PartitionError(f"inner code {m}: partition and connection disagree")
            if sum(len(k) for k in self.partition.K_a) != self.K_a:
                raise PartitionError("K_a parts do not add up to K_a")
        return self

    @property
    def M(self) -> int:
        return len(self.inners)

    @property
    def N0(self) -> int:
        return self.outer.base.N

    @property
    def K_a(self) -> int:
        return self.outer.base.K

    @property
    def N(self) -> int:
        return self.inners[0].N

    @property
    def K_b(self) -> tuple[int, ...]:
        return tuple(p.K for p in self.inners)

    def rate(self) -> float:
        """(K_a + sum K_b) / (M N)."""
        return (self.K_a + sum(self.K_b)) / (self.M * self.N)

    def global_positions(self, block: int) -> tuple[int, ...]:
        """K_{a_m}: systematic outer positions carried by inner code ``block``."""
        chosen = set(self.outer.systematic_positions)
        return tuple(p for p in self.connection.outer_positions(block) if p in chosen)

    def parity_positions(self, block: int) -> tuple[int, ...]:
        """P_{a_m}: outer parity positions carried by inner code ``block``."""
        chosen = set(self.outer.systematic_positions)
        return tuple(p for p in self.connection.outer_positions(block) if p not in chosen)

    def joint_graph(self) -> JointGraph:
        block, inner = self.connection.arrays()
        return JointGraph(
            outer_frozen=self.outer.base.frozen_mask,
            inner_frozen=np.stack([layout.frozen_mask for layout in self.layouts]),
            block=block,
            inner=inner,
        )


def augmented_code(
    outer: CodeProfile,
    inner_order: Sequence[int],
    K1: int,
    connection: ConnectionKind | ConnectionMap = "natural",
) -> AugmentedCode:
    layout = select_semipolarized(inner_order, K1, outer.N)
    if isinstance(connection, ConnectionMap):
        conn = connection
    else:
        conn = natural_connection(range(1, outer.N + 1), layout.semipolarized)
    code = AugmentedCode(outer=outer, inner=layout.profile(inner_order), layout=layout, connection=conn)
    logger.info("Augmented code: N0=%d K0=%d N1=%d K1=%d rate=%.4f", code.N0, code.K0, code.N, code.K1, code.rate())
    return code


def local_global_code(
    outer: CodeProfile,
    inner_order: Sequence[int],
    K_b: Sequence[int],
    connection: ConnectionKind | ConnectionMap = "example1",
) -> LocalGlobalCode:
    """Equal-length inner codes sharing one reliability order; N0/M outer positions each."""
    M = len(K_b)
    if M < 1 or outer.N % M:
        raise LengthMismatchError(f"N0={outer.N} does not split over M={M} inner codes")
    share = outer.N // M
    layouts = tuple(select_semipolarized(inner_order, k, share) for k in K_b)
    partition = None
    if isinstance(connection, ConnectionMap):
        conn = connection
    elif connection == "example1":
        partition, conn = example1_connection(outer.unfrozen, outer.N, [lay.semipolarized for lay in layouts], M)
    else:
        links = []
        for m, layout in enumerate(layouts, start=1):
            positions = range((m - 1) * share + 1, m * share + 1)
            links.extend(natural_connection(positions, layout.semipolarized, block=m).links)
        conn = ConnectionMap(links=tuple(links))
    code = LocalGlobalCode(
        outer=SystematicProfile(base=outer),
        inners=tuple(layout.profile(inner_order) for layout in layouts),
        layouts=layouts,
        connection=conn,
        partition=partition,
    )
    logger.info("Local-global code: M=%d N0=%d K_a=%d N=%d rate=%.4f", M, code.N0, code.K_a, code.N, code.rate())
    return code
