#!/usr/bin/env python3
"""
Command-line front end for the polar code design toolkit.

Subcommands: construct, analyze-ss, design-outer, collect-densities,
simulate, verify. Every file written gets a ``.manifest.json`` sidecar.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from architectures.builder import build_code
from architectures.codes import AugmentedCode, LocalGlobalCode, PolarCode
from config import SETTINGS
from config.architecture import ArchitectureConfig, load_architecture
from decoders.empirical import EmpiricalHistogramSet
from density.channel import ChannelModel
from density.construct import construct
from designers.driver import collect_for, design_outer
from designers.stopping_set import compute_J
from errors import ConfigError, OracleLimitError, PolarError, SimulationIOError
from polar.factor_graph import SubmatrixSelector, build_graph, g_bound, g_bound_multi, mvss_exact
from polar.profile import CodeProfile
from runs.manifest import RunManifest
from sim.harness import FrameSimulator, run_sweep
from sim.records import SimulationConfig, parse_snr_range
from verify import print_table, run_checks
from workers.pool import FramePool

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarcat", description="Concatenated polar code design and simulation")
    parser.add_argument("--workdir", default=".", help="base directory for relative paths")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("construct", help="construct a polar code")
    p.add_argument("--channel", choices=["awgn", "bec"], default="awgn")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--snr-db", type=float, default=SETTINGS.design.inner_snr_db)
    p.add_argument("--rate", type=float, default=0.5)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["de", "ga", "ga-phi", "bhattacharyya"], default="de")
    p.add_argument("--out")

    p = sub.add_parser("analyze-ss", help="g bounds and exact MVSS")
    p.add_argument("--n", type=int, help="plain polar graph of length 2^n")
    p.add_argument("--rows", help="comma-separated J; default is every singleton")
    p.add_argument("--config", help="concatenated code: J_i for every outer position")
    p.add_argument("--out")

    p = sub.add_parser("design-outer", help="design the outer unfrozen set")
    p.add_argument("--config", required=True)
    p.add_argument("--method", choices=["de", "ss", "nde"])
    p.add_argument("--arch", choices=["augmented", "local-global"])
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--hist")
    p.add_argument("--frames", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-init", action="store_true", default=None)
    p.add_argument("--workers", type=int, default=SETTINGS.simulation.workers)
    p.add_argument("--out", required=True)

    p = sub.add_parser("collect-densities", help="empirical LLR histograms of the inner codes")
    p.add_argument("--config", "--arch", dest="config", required=True)
    p.add_argument("--iters", type=int)
    p.add_argument("--frames", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr-db", type=float)
    p.add_argument("--workers", type=int, default=SETTINGS.simulation.workers)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="Monte-Carlo FER/BER sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--snr", required=True, help="start:stop:step in Eb/N0 dB")
    p.add_argument("--min-errors", type=int)
    p.add_argument("--max-frames", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["local", "global", "single"])
    p.add_argument("--workers", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--outer-profile")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--quick", action="store_true")
    return parser


def _path(workdir: Path, name: Optional[str]) -> Optional[Path]:
    return None if name is None else workdir / name


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n")


def _seal(manifest: RunManifest, out: Optional[Path]) -> None:
    if out is None:
        return
    manifest.add_artifact(out)
    manifest.close()
    manifest.write(out)


def cmd_construct(args, workdir: Path, manifest: RunManifest) -> int:
    if args.channel == "bec":
        model = ChannelModel.bec(args.eps)
    else:
        model = ChannelModel.awgn(args.snr_db, args.rate)
    step = manifest.start_step("construct")
    errors = construct(model, args.n, args.method)
    profile = CodeProfile.from_order(
        errors.reliability_order(),
        args.k,
        provenance={"method": args.method, "channel": model.model_dump(exclude_none=True)},
    )
    manifest.finish_step(step)
    manifest.config = {"channel": model.model_dump(exclude_none=True), "n": args.n, "k": args.k, "method": args.method}
    out = _path(workdir, args.out)
    _emit(profile.to_json(), out)
    _seal(manifest, out)
    return EXIT_OK


def _entry(i: Optional[int], parts: list[SubmatrixSelector], g: int, mvss: Optional[int]) -> dict[str, Any]:
    return {"i": i, "J": [list(p.rows) for p in parts] if len(parts) > 1 else list(parts[0].rows), "g": g, "mvss": mvss}


def _mvss_or_none(rows, graph, info) -> Optional[int]:
    try:
        return mvss_exact(rows, graph, info)[0]
    except OracleLimitError:
        return None


def cmd_analyze_ss(args, workdir: Path, manifest: RunManifest) -> int:
    entries: list[dict[str, Any]] = []
    if args.config:
        config = load_architecture(workdir / args.config)
        manifest.add_input(workdir / args.config)
        manifest.config = config.model_dump(mode="json")
        code = build_code(config, workdir=workdir)
        if isinstance(code, PolarCode):
            raise ConfigError("analyze-ss --config needs a concatenated code")
        layouts = code.layouts() if isinstance(code, AugmentedCode) else code.layouts
        n_inner = config.n_inner[0]
        graph = build_graph(n_inner) if 1 << n_inner <= SETTINGS.design.oracle_max_length else None
        for i in range(1, config.N0 + 1):
            parts = compute_J(i, config.n0, code.connection)
            g = g_bound_multi(parts, n_inner)
            mvss = None
            nonempty = [(m, p) for m, p in enumerate(parts) if len(p)]
            if graph is not None and len(nonempty) == 1:
                m, part = nonempty[0]
                info = set(layouts[m].info) | set(layouts[m].semipolarized)
                mvss = _mvss_or_none(part.rows, graph, info)
            entries.append(_entry(i, parts, g, mvss))
    elif args.n is not None:
        graph = build_graph(args.n)
        everything = range(1, graph.N + 1)
        manifest.config = {"n": args.n, "rows": args.rows}
        if args.rows:
            rows = SubmatrixSelector(rows=tuple(int(r) for r in args.rows.split(",")))
            entries.append(_entry(None, [rows], g_bound(rows, args.n), _mvss_or_none(rows, graph, everything)))
        else:
            for i in everything:
                rows = SubmatrixSelector(rows=(i,))
                entries.append(_entry(i, [rows], g_bound(rows, args.n), _mvss_or_none(rows, graph, everything)))
    else:
        raise ConfigError("analyze-ss needs --n or --config")
    out = _path(workdir, args.out)
    _emit(json.dumps(entries, indent=2), out)
    _seal(manifest, out)
    return EXIT_OK


def _load_config(workdir: Path, name: str, manifest: RunManifest) -> ArchitectureConfig:
    path = workdir / name
    config = load_architecture(path)
    manifest.add_input(path)
    manifest.config = config.model_dump(mode="json")
    return config


def cmd_design_outer(args, workdir: Path, manifest: RunManifest) -> int:
    config = _load_config(workdir, args.config, manifest)
    if args.arch and args.arch != config.arch:
        raise ConfigError(f"--arch {args.arch} does not match the {config.arch} config")
    method = args.method or config.design.method
    manifest.seed = args.seed
    hist = None
    with FramePool(args.workers) as pool:
        if method == "nde":
            if args.hist:
                hist_path = workdir / args.hist
                hist = EmpiricalHistogramSet.from_json(hist_path.read_text())
                manifest.add_input(hist_path)
                if args.t is not None and args.t != hist.t:
                    raise ConfigError(f"--t {args.t} differs from the histogram file's t={hist.t}")
            else:
                step = manifest.start_step("collect-densities")
                hist = collect_for(config, t=args.t, frames=args.frames, seed=args.seed, pool=pool, workdir=workdir)
                manifest.finish_step(step)
        step = manifest.start_step(f"design-{method}")
        profile, result = design_outer(
            config,
            method=method,
            s=args.s,
            hist=hist,
            seed=args.seed,
            random_init=args.random_init,
            inputs=dict(manifest.inputs),
            workdir=workdir,
        )
        manifest.finish_step(step)
    if result.oscillating:
        manifest.log("warning", "local-global NDE search oscillated", step)
    out = workdir / args.out
    _emit(profile.to_json(), out)
    _seal(manifest, out)
    return EXIT_OK


def cmd_collect_densities(args, workdir: Path, manifest: RunManifest) -> int:
    config = _load_config(workdir, args.config, manifest)
    manifest.seed = args.seed
    step = manifest.start_step("collect-densities")
    with FramePool(args.workers) as pool:
        hist = collect_for(config, t=args.iters, frames=args.frames, seed=args.seed, snr_db=args.snr_db, pool=pool, workdir=workdir)
    manifest.finish_step(step)
    out = workdir / args.out
    _emit(hist.to_json(), out)
    _seal(manifest, out)
    return EXIT_OK


def _design_method(code) -> str:
    outer = code.profile if isinstance(code, PolarCode) else code.outer
    base = getattr(outer, "base", outer)
    if base is not None and base.provenance:
        return str(base.provenance.get("method", "de"))
    return "de"


def cmd_simulate(args, workdir: Path, manifest: RunManifest) -> int:
    config = _load_config(workdir, args.config, manifest)
    if args.outer_profile:
        config = config.model_copy(update={"outer_profile": args.outer_profile})
    if config.outer_profile:
        manifest.add_input(workdir / config.outer_profile)
    code = build_code(config, workdir=workdir)
    start, stop, step_db = parse_snr_range(args.snr)
    mode = args.mode or ("single" if isinstance(code, PolarCode) else "global")
    overrides = {
        "min_frame_errors": args.min_errors,
        "max_frames": args.max_frames,
        "batch_size": args.batch_size,
        "workers": args.workers,
        "max_iters": args.max_iters,
    }
    sim_config = SimulationConfig(
        architecture=args.config,
        snr_start=start,
        snr_stop=stop,
        snr_step=step_db,
        seed=args.seed,
        mode=mode,
        design_method=_design_method(code),
        outer_profile=config.outer_profile,
        noiseless=args.noiseless,
        **{k: v for k, v in overrides.items() if v is not None},
    )
    manifest.seed = args.seed
    manifest.config = {"architecture": manifest.config, "simulation": sim_config.model_dump(mode="json")}
    simulator = FrameSimulator(code=code, mode=mode, seed=args.seed, max_iters=sim_config.max_iters, noiseless=args.noiseless)
    out = workdir / args.out
    out.parent.mkdir(parents=True, exist_ok=True)
    step = manifest.start_step("simulate")
    try:
        with FramePool(sim_config.workers) as pool:
            run_sweep(simulator, sim_config, out, pool)
    except SimulationIOError as exc:
        manifest.finish_step(step, "failed")
        manifest.log("error", f"{exc.detail}; {len(exc.partial_records)} points kept", step)
        raise
    manifest.finish_step(step)
    _seal(manifest, out)
    return EXIT_OK


def cmd_verify(args, workdir: Path, manifest: RunManifest) -> int:
    results = run_checks(quick=args.quick)
    print_table(results, sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_IO


COMMANDS = {
    "construct": cmd_construct,
    "analyze-ss": cmd_analyze_ss,
    "design-outer": cmd_design_outer,
    "collect-densities": cmd_collect_densities,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    workdir = Path(args.workdir)
    manifest = RunManifest(command=["polarcat", *argv])
    try:
        return COMMANDS[args.command](args, workdir, manifest)
    except SimulationIOError as exc:
        logger.error("Simulation I/O error: %s (%d points kept)", exc.detail, len(exc.partial_records))
        return EXIT_IO
    except PolarError as exc:
        logger.error("%s failed: %s", args.command, exc.detail)
        return EXIT_USAGE
    except ValidationError as exc:
        logger.error("%s failed: invalid input: %s", args.command, exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_IO


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
