"""Conventional outer design: top-K0 positions of a stationary construction."""

import logging

from config import SETTINGS
from density.channel import ChannelModel
from density.construct import construct
from designers.types import DesignResult, UnfrozenSet
from errors import IndexRangeError
from polar.profile import CodeProfile

logger = logging.getLogger(__name__)


def baseline_profile(model: ChannelModel, outer_n: int, K0: int, method: str | None = None) -> CodeProfile:
    method = method or SETTINGS.design.construction
    if not 0 <= K0 <= 1 << outer_n:
        raise IndexRangeError(f"K0={K0} outside 0..{1 << outer_n}")
    errors = construct(model, outer_n, method)
    return CodeProfile.from_order(errors.reliability_order(), K0)


def baseline_de_design(model: ChannelModel, outer_n: int, K0: int, method: str | None = None) -> DesignResult:
    method = method or SETTINGS.design.construction
    profile = baseline_profile(model, outer_n, K0, method)
    logger.info("Designed outer code: method=baseline-%s N0=%d K0=%d", method, profile.N, K0)
    return DesignResult(
        method="de",
        unfrozen=UnfrozenSet(N0=profile.N, positions=profile.unfrozen),
        parameters={"construction": method, "channel": model.model_dump(exclude_none=True)},
    )
