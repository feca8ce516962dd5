"""Nonstationary DE designs for augmented and local-global codes."""

import logging
from typing import Optional, Sequence

import numpy as np

from architectures.connection import ConnectionMap, example1_connection
from config import SETTINGS
from decoders.empirical import EmpiricalHistogramSet
from density.evolution import ErrorProfile, nde_sweep
from designers.types import DesignResult, Iterate, UnfrozenSet
from errors import IndexRangeError, LengthMismatchError
from sim.channel import seeded_rng

logger = logging.getLogger(__name__)


def _check_sizes(hist: EmpiricalHistogramSet, K0: int, outer_n: int) -> int:
    N0 = 1 << outer_n
    if len(hist) != N0:
        raise LengthMismatchError(f"{len(hist)} histograms for N0={N0}")
    if not 0 <= K0 <= N0:
        raise IndexRangeError(f"K0={K0} outside 0..{N0}")
    return N0


def nde_design_augmented(
    hist: EmpiricalHistogramSet,
    K0: int,
    outer_n: int,
    connection: ConnectionMap,
) -> DesignResult:
    """a_1^i = b^{H(i)}, one sweep, then the K0 positions of smallest P(A_i)."""
    N0 = _check_sizes(hist, K0, outer_n)
    errors = nde_sweep(hist.initials(connection), outer_n)
    chosen = errors.best(K0)
    logger.info("Designed outer code: method=nde N0=%d K0=%d t=%d", N0, K0, hist.t)
    return DesignResult(
        method="nde",
        unfrozen=UnfrozenSet(N0=N0, positions=chosen),
        objective=errors.objective(chosen),
        parameters={"t": hist.t, "samples": hist.sample_count},
    )


def layout_errors(
    hist: EmpiricalHistogramSet,
    unfrozen: Sequence[int],
    outer_n: int,
    semipolarized: Sequence[Sequence[int]],
) -> ErrorProfile:
    """P(A_i, pi_O, b) with pi_O the half-split layout of ``unfrozen``."""
    _, connection = example1_connection(unfrozen, 1 << outer_n, semipolarized)
    return nde_sweep(hist.initials(connection), outer_n)


def _random_start(N0: int, K0: int, seed: int) -> tuple[int, ...]:
    picks = seeded_rng(seed).choice(N0, size=K0, replace=False)
    return tuple(sorted(int(p) + 1 for p in picks))


def nde_design_local_global(
    hist: EmpiricalHistogramSet,
    K0: int,
    outer_n: int,
    semipolarized: Sequence[Sequence[int]],
    initial: Optional[Sequence[int]] = None,
    seed: int = 0,
    random_init: bool = False,
    max_iterations: Optional[int] = None,
) -> DesignResult:
    """Fixed-point search for O* = argmin sum P(A_i, pi_{O*}, b).

    Stops when an iterate repeats its predecessor (converged) or an older
    iterate (oscillating). A converged search returns the fixed point;
    otherwise the visited iterate of smallest objective, earliest on ties.
    """
    N0 = _check_sizes(hist, K0, outer_n)
    max_iterations = max_iterations or SETTINGS.design.nde_max_iterations
    if random_init or initial is None:
        current = _random_start(N0, K0, seed)
    else:
        current = tuple(sorted(int(i) for i in initial))
        if len(current) != K0:
            raise LengthMismatchError(f"initial set has {len(current)} positions, expected {K0}")

    seen = [current]
    history: list[Iterate] = []
    converged = oscillating = False
    for step in range(1, max_iterations + 1):
        errors = layout_errors(hist, current, outer_n, semipolarized)
        chosen = errors.best(K0)
        history.append(Iterate(step=step, positions=chosen, objective=errors.objective(chosen)))
        logger.debug("NDE iterate %d: objective %.6e", step, history[-1].objective)
        if chosen == current:
            converged = True
            break
        if chosen in seen[:-1]:
            oscillating = True
            logger.warning("NDE search oscillates at iterate %d", step)
            break
        seen.append(chosen)
        current = chosen

    if converged:
        result = history[-1]
    else:
        result = min(history, key=lambda it: (it.objective, it.step))
        if not oscillating:
            logger.warning("NDE search did not converge in %d iterations", max_iterations)
    logger.info(
        "Designed outer code: method=nde-lg N0=%d K0=%d iterations=%d converged=%s",
        N0, K0, len(history), converged,
    )
    return DesignResult(
        method="nde",
        unfrozen=UnfrozenSet(N0=N0, positions=result.positions),
        objective=result.objective,
        history=tuple(history),
        converged=converged,
        oscillating=oscillating,
        parameters={
            "t": hist.t,
            "samples": hist.sample_count,
            "initial": list(seen[0]),
            "random_init": bool(random_init or initial is None),
            "seed": seed,
        },
    )
