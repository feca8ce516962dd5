"""Property suite behind ``verify``: exact oracles and reductions across modules."""

import logging
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, TextIO

import numpy as np

from architectures.connection import natural_connection
from decoders.empirical import EmpiricalHistogramSet
from density.channel import ChannelModel, channel_density
from density.construct import bhattacharyya_construct
from density.evolution import de_construct
from designers.nde import nde_design_augmented
from designers.stopping_set import ss_design
from designers.types import DesignInput
from errors import InfeasibleDesignError
from polar.core import encode, generator_row, support
from polar.factor_graph import build_graph, g_bound, mvss_exact, stopping_tree
from sim.channel import seeded_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def check_involution(max_n: int) -> tuple[bool, str]:
    rng = seeded_rng(0)
    for n in range(1, max_n + 1):
        u = rng.integers(0, 2, size=(64, 1 << n), dtype=np.uint8)
        if not np.array_equal(encode(encode(u, n), n), u):
            return False, f"encode is not an involution at n={n}"
    return True, f"n=1..{max_n}, 64 vectors each"


def check_row_support(max_n: int) -> tuple[bool, str]:
    for n in range(1, max_n + 1):
        graph = build_graph(n)
        for i in range(1, (1 << n) + 1):
            if stopping_tree(i, graph).leaf_set != support(generator_row(i, n)):
                return False, f"ST({i}) leaves differ from row {i} support at n={n}"
    return True, f"every i, n=1..{max_n}"


def check_mvss_bound(max_n: int) -> tuple[bool, str]:
    checked = 0
    for n in range(2, max_n + 1):
        graph = build_graph(n)
        everything = range(1, graph.N + 1)
        for i in everything:
            size, _ = mvss_exact([i], graph, everything)
            if size < g_bound([i], n):
                return False, f"MVSS({{{i}}}) below g at n={n}"
            checked += 1
        for pair in combinations(everything, 2):
            size, _ = mvss_exact(pair, graph, everything)
            if size != g_bound(pair, n):
                return False, f"MVSS({set(pair)}) = {size} differs from g = {g_bound(pair, n)} at n={n}"
            checked += 1
    graph = build_graph(3)
    size, _ = mvss_exact((2, 7, 8), graph, range(1, 9))
    bound = g_bound((2, 7, 8), 3)
    if bound != 3 or size <= bound:
        return False, f"J={{2,7,8}}: MVSS {size} should exceed g = 3"
    return True, f"{checked} sets for n=2..{max_n}, J={{2,7,8}} strict"


def check_de_bhattacharyya(max_n: int) -> tuple[bool, str]:
    model = ChannelModel.bec(0.5)
    for n in range(1, max_n + 1):
        de = de_construct(model, n)
        z = bhattacharyya_construct(0.5, n)
        if de.reliability_order() != z.reliability_order() or not np.allclose(de.array, z.array, atol=1e-9):
            return False, f"BEC(0.5) DE differs from the Z recursion at n={n}"
    return True, f"BEC(0.5), n=1..{max_n}"


def check_stationary_nde(n0: int) -> tuple[bool, str]:
    model = ChannelModel.awgn(1.0, 0.5)
    N0 = 1 << n0
    d = channel_density(model)
    connection = natural_connection(range(1, N0 + 1), range(1, N0 + 1))
    hist = EmpiricalHistogramSet(t=1, sample_count=1, histograms={(1, h): d for h in range(1, N0 + 1)})
    K0 = N0 // 2
    designed = nde_design_augmented(hist, K0, n0, connection).unfrozen.positions
    baseline = de_construct(model, n0).best(K0)
    if designed != baseline:
        return False, f"NDE {designed} differs from DE {baseline}"
    return True, f"AWGN 1 dB, N0={N0}, K0={K0}"


def check_swap_trace() -> tuple[bool, str]:
    g = {8: 2, 7: 2, 6: 4, 4: 4, 5: 6, 3: 2, 2: 6, 1: 1}
    design = DesignInput(Q=(8, 7, 6, 4, 5, 3, 2, 1), g_values=g, K0=4, s=1)
    got = ss_design(design).unfrozen.as_set()
    if got != {5, 7, 6, 4}:
        return False, f"traced set {sorted(got)} differs from {{4,5,6,7}}"
    try:
        ss_design(DesignInput(Q=design.Q, g_values=g, K0=4, s=3))
    except InfeasibleDesignError:
        return True, "s=1 trace and infeasible s=3"
    return False, "infeasible s=3 was accepted"


def suite(quick: bool) -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    small = 3 if quick else 6
    return [
        ("polar-core: encode involution", lambda: check_involution(small)),
        ("factor-graph: stopping tree = row support", lambda: check_row_support(small)),
        ("factor-graph: MVSS >= g, equality for pairs", lambda: check_mvss_bound(3 if quick else 4)),
        ("density-engine: BEC DE = Z recursion", lambda: check_de_bhattacharyya(small)),
        ("designers: stationary NDE = DE", lambda: check_stationary_nde(3 if quick else 5)),
        ("designers: swap construction trace", check_swap_trace),
    ]


def run_checks(quick: bool = False) -> list[CheckResult]:
    results = []
    for name, check in suite(quick):
        started = time.perf_counter()
        try:
            passed, detail = check()
        except Exception as exc:
            logger.exception("Check %s raised", name)
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, passed, detail, time.perf_counter() - started))
        logger.info("%s: %s", name, "pass" if passed else "FAIL")
    return results


def print_table(results: list[CheckResult], out: TextIO) -> None:
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        out.write(f"{r.name:<{width}}  {status}  {r.seconds:7.2f}s  {r.detail}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
