"""Outer-code design from an architecture config: de, ss or nde."""

import logging
from pathlib import Path
from typing import Any, Optional

from architectures.builder import baseline_outer, build_code
from architectures.codes import AugmentedCode, LocalGlobalCode
from config import SETTINGS
from config.architecture import ArchitectureConfig
from decoders.empirical import EmpiricalHistogramSet, collect_empirical_llrs
from density.channel import ChannelModel
from designers.nde import nde_design_augmented, nde_design_local_global
from designers.stopping_set import ss_design_for
from designers.types import DesignResult, UnfrozenSet
from errors import ConfigError
from polar.profile import CodeProfile

logger = logging.getLogger(__name__)


def default_t(config: ArchitectureConfig) -> int:
    if config.design.t is not None:
        return config.design.t
    if config.arch == "local-global":
        return SETTINGS.decoder.t_local_global
    return SETTINGS.decoder.t_augmented


def histogram_model(config: ArchitectureConfig, snr_db: Optional[float] = None) -> ChannelModel:
    """AWGN at the design Eb/N0 and the overall code rate."""
    return ChannelModel.awgn(config.design.snr_db if snr_db is None else snr_db, config.rate)


def collect_for(
    config: ArchitectureConfig,
    t: Optional[int] = None,
    frames: Optional[int] = None,
    seed: int = 0,
    snr_db: Optional[float] = None,
    pool=None,
    workdir: Path = Path("."),
) -> EmpiricalHistogramSet:
    if config.arch == "polar":
        raise ConfigError("a plain polar code has no semipolarized inputs")
    code = build_code(config, baseline_outer(config), workdir)
    return collect_empirical_llrs(
        code,
        t or default_t(config),
        frames or SETTINGS.decoder.histogram_frames,
        histogram_model(config, snr_db),
        seed,
        pool=pool,
    )


def design_outer(
    config: ArchitectureConfig,
    method: Optional[str] = None,
    s: Optional[int] = None,
    hist: Optional[EmpiricalHistogramSet] = None,
    seed: int = 0,
    random_init: Optional[bool] = None,
    frames: Optional[int] = None,
    inputs: Optional[dict[str, str]] = None,
    pool=None,
    workdir: Path = Path("."),
) -> tuple[CodeProfile, DesignResult]:
    """Design the outer unfrozen set; returns the profile and the design record.

    The profile's provenance holds the method, its parameters, the input
    hashes and, for swap-safe local-global designs, the wiring to rebuild
    the code with.
    """
    if config.arch == "polar":
        raise ConfigError("a plain polar code has no outer code to design")
    method = method or config.design.method
    baseline = baseline_outer(config)
    extra: dict[str, Any] = {"arch": config.arch, "inputs": inputs or {}}

    if method == "de":
        result = DesignResult(
            method="de",
            unfrozen=UnfrozenSet(N0=baseline.N, positions=baseline.unfrozen),
            parameters={"construction": config.design.construction, "snr_db": config.design.snr_db},
        )
        logger.info("Designed outer code: method=de N0=%d K0=%d", baseline.N, baseline.K)
    elif method == "ss":
        code = build_code(config, baseline, workdir)
        swap_safe = isinstance(code, LocalGlobalCode)
        result = ss_design_for(
            baseline.reliability_order,
            config.K0,
            config.design.s if s is None else s,
            config.n0,
            code.connection,
            config.n_inner[0],
            swap_safe=swap_safe,
        )
        if swap_safe:
            extra["connection"] = code.connection.to_triples()
    elif method == "nde":
        if hist is None:
            hist = collect_for(config, frames=frames, seed=seed, pool=pool, workdir=workdir)
        code = build_code(config, baseline, workdir)
        if isinstance(code, AugmentedCode):
            result = nde_design_augmented(hist, config.K0, config.n0, code.connection)
        else:
            if config.connection != "example1":
                raise ConfigError("local-global NDE design rebuilds the example1 connection each iteration")
            use_random = config.design.random_init if random_init is None else random_init
            result = nde_design_local_global(
                hist,
                config.K0,
                config.n0,
                [lay.semipolarized for lay in code.layouts],
                initial=None if use_random else baseline.unfrozen,
                seed=seed,
                random_init=use_random,
            )
    else:
        raise ConfigError(f"unknown design method {method!r}")

    provenance = {**result.provenance(), **extra}
    profile = baseline.with_unfrozen(result.unfrozen.positions, provenance=provenance)
    changed = len(set(profile.unfrozen) - set(baseline.unfrozen))
    logger.info("Outer design %s differs from the baseline in %d positions", method, changed)
    return profile, result
