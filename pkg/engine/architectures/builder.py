"""Assemble a code from an ArchitectureConfig."""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Optional

from architectures.codes import AugmentedCode, LocalGlobalCode, PolarCode, augmented_code, local_global_code
from architectures.connection import ConnectionMap
from config.architecture import ArchitectureConfig
from density.channel import ChannelModel
from density.construct import construct
from errors import PartitionError
from polar.profile import CodeProfile

logger = logging.getLogger(__name__)

Code = PolarCode | AugmentedCode | LocalGlobalCode


@lru_cache(maxsize=8)
def inner_order(n: int, snr_db: float, rate: float, construction: str) -> tuple[int, ...]:
    """Reliability order of an inner code designed at Eb/N0 = snr_db."""
    return construct(ChannelModel.awgn(snr_db, rate), n, construction).reliability_order()


@lru_cache(maxsize=8)
def outer_baseline(n0: int, K0: int, snr_db: float, R0: float, construction: str) -> CodeProfile:
    errors = construct(ChannelModel.awgn(snr_db, R0), n0, construction)
    return CodeProfile.from_order(errors.reliability_order(), K0)


def baseline_outer(config: ArchitectureConfig) -> CodeProfile:
    return outer_baseline(config.n0, config.K0, config.design.snr_db, config.R0, config.design.construction)


def resolve_outer(config: ArchitectureConfig, workdir: Path = Path(".")) -> CodeProfile:
    """The configured outer profile file, or the baseline design."""
    if config.outer_profile is None:
        return baseline_outer(config)
    profile = CodeProfile.from_json((workdir / config.outer_profile).read_text())
    if profile.N != config.N0 or profile.K != config.K0:
        raise PartitionError(f"outer profile has N={profile.N} K={profile.K}, config needs N0={config.N0} K0={config.K0}")
    return profile


def resolve_polar(config: ArchitectureConfig, workdir: Path = Path(".")) -> CodeProfile:
    """The plain code: a stored profile when configured, else the inner construction."""
    if config.outer_profile is None:
        order = inner_order(config.n_inner[0], config.inner.snr_db, config.rate, config.inner.construction)
        return CodeProfile.from_order(order, config.K_b[0])
    profile = CodeProfile.from_json((workdir / config.outer_profile).read_text())
    if profile.N != config.N or profile.K != config.K_b[0]:
        raise PartitionError(f"profile has N={profile.N} K={profile.K}, config needs N={config.N} K={config.K_b[0]}")
    return profile


def build_code(config: ArchitectureConfig, outer: Optional[CodeProfile] = None, workdir: Path = Path(".")) -> Code:
    if config.arch == "polar":
        return PolarCode(profile=outer or resolve_polar(config, workdir))
    order = inner_order(config.n_inner[0], config.inner.snr_db, config.rate, config.inner.construction)
    outer = outer or resolve_outer(config, workdir)
    connection = config.connection
    if outer.provenance and "connection" in outer.provenance:
        # designs that fix their own wiring (swap-safe stopping-set designs)
        connection = outer.provenance["connection"]
    if isinstance(connection, list):
        connection = ConnectionMap.from_triples(connection)
    if config.arch == "augmented":
        return augmented_code(outer, order, config.K_b[0], connection)
    return local_global_code(outer, order, config.K_b, connection)
