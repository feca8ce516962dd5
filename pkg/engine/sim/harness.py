"""Monte-Carlo FER/BER harness over an SNR sweep.

Batch b of SNR point j draws from the generator keyed by (seed, j, b)
and batch sizes are fixed in advance, so every record depends only on
(seed, config). Batches are consumed in index order and the stop rule is
checked after each one, whatever the worker count.
"""

import csv
import logging
import math
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from architectures.codes import AugmentedCode, LocalGlobalCode, PolarCode
from architectures.decoding import decode_global, decode_local, decode_single
from architectures.encoding import encode_augmented, encode_local_global
from config import SETTINGS, TOOL_VERSION
from density.channel import ebn0_to_sigma2
from errors import ConfigError, SimulationIOError
from polar.core import encode
from sim.channel import awgn_transmit, seeded_rng
from sim.records import CSV_COLUMNS, DecodeMode, SimulationConfig, SimulationRecord

logger = logging.getLogger(__name__)

Counts = tuple[int, int, int]


def build_tag() -> str:
    """``git describe``-style tag of the working tree, or the tool version."""
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            capture_output=True, text=True, check=False, timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
    except (OSError, subprocess.SubprocessError):
        return f"v{TOOL_VERSION}"
    return out.stdout.strip() or f"v{TOOL_VERSION}"


@dataclass(frozen=True)
class FrameSimulator:
    """Encode, transmit and decode batches of random frames for one code."""

    code: PolarCode | AugmentedCode | LocalGlobalCode
    mode: DecodeMode
    seed: int = 0
    max_iters: int = SETTINGS.decoder.max_iters
    noiseless: bool = False

    def __post_init__(self) -> None:
        if self.mode == "single" and not isinstance(self.code, PolarCode):
            raise ConfigError("single decoding needs the plain polar architecture")
        if self.mode == "local" and not isinstance(self.code, LocalGlobalCode):
            raise ConfigError("local decoding needs a local-global code")
        if self.mode == "global" and isinstance(self.code, PolarCode):
            raise ConfigError("global decoding needs a concatenated code")

    @property
    def frames_per_codeword(self) -> int:
        return self.code.M if self.mode == "local" else 1

    @property
    def bits_per_frame(self) -> float:
        code = self.code
        if isinstance(code, PolarCode):
            return code.profile.K
        if isinstance(code, AugmentedCode):
            return code.K0 + code.K1
        if self.mode == "local":
            # mean of K_{a_m} + K_{b_m}; each codeword counts M frames
            total = sum(len(code.global_positions(m)) + k for m, k in enumerate(code.K_b, start=1))
            return total / code.M
        return code.K_a + sum(code.K_b)

    def _channel(self, codewords: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
        if self.noiseless:
            return SETTINGS.decoder.llr_clamp * (1.0 - 2.0 * codewords.astype(np.float64))
        return awgn_transmit(codewords, ebn0_to_sigma2(snr_db, self.code.rate()), rng)

    def run_batch(self, snr_db: float, snr_index: int, batch_index: int, size: int) -> Counts:
        """(frames, frame_errors, bit_errors) for ``size`` codewords."""
        rng = seeded_rng(self.seed, snr_index, batch_index)
        code = self.code
        if isinstance(code, PolarCode):
            info = rng.integers(0, 2, size=(size, code.profile.K), dtype=np.uint8)
            u = np.zeros((size, code.N), dtype=np.uint8)
            u[:, code.profile.info_positions] = info
            decided = decode_single(code, self._channel(encode(u, code.profile.n), snr_db, rng), self.max_iters)
            return _count(info, decided)

        if isinstance(code, AugmentedCode):
            outer_info = rng.integers(0, 2, size=(size, code.K0), dtype=np.uint8)
            inner_info = rng.integers(0, 2, size=(size, code.K1), dtype=np.uint8)
            llrs = self._channel(encode_augmented(code, outer_info, inner_info), snr_db, rng)
            decision = decode_global(code, llrs[:, None, :], self.max_iters)
            sent = np.concatenate([outer_info, inner_info], axis=-1)
            got = np.concatenate([decision.outer_info, decision.inner_info[0]], axis=-1)
            return _count(sent, got)

        global_info = rng.integers(0, 2, size=(size, code.K_a), dtype=np.uint8)
        local_infos = [rng.integers(0, 2, size=(size, k), dtype=np.uint8) for k in code.K_b]
        llrs = self._channel(encode_local_global(code, global_info, local_infos), snr_db, rng)
        if self.mode == "global":
            decision = decode_global(code, llrs, self.max_iters)
            sent = np.concatenate([global_info] + local_infos, axis=-1)
            got = np.concatenate([decision.outer_info] + decision.inner_info, axis=-1)
            return _count(sent, got)

        totals = np.zeros(3, dtype=np.int64)
        systematic = list(code.outer.systematic_positions)
        for m in range(1, code.M + 1):
            carried = [systematic.index(p) for p in code.global_positions(m)]
            local = decode_local(code, m, llrs[:, m - 1, :], self.max_iters)
            sent = np.concatenate([local_infos[m - 1], global_info[:, carried]], axis=-1)
            got = np.concatenate([local.local_info, local.global_info], axis=-1)
            totals += _count(sent, got)
        return tuple(int(v) for v in totals)


def _count(sent: np.ndarray, got: np.ndarray) -> Counts:
    wrong = sent != got
    return sent.shape[0], int(wrong.any(axis=-1).sum()), int(wrong.sum())


def simulate_batch(simulator: FrameSimulator, snr_db: float, snr_index: int, batch_index: int, size: int) -> Counts:
    return simulator.run_batch(snr_db, snr_index, batch_index, size)


def batch_plan(max_frames: int, batch_size: int, frames_per_codeword: int) -> Iterator[tuple[int, int]]:
    """(batch_index, codewords) covering at most ``max_frames`` frames."""
    remaining = math.ceil(max_frames / frames_per_codeword)
    index = 0
    while remaining > 0:
        size = min(batch_size, remaining)
        yield index, size
        remaining -= size
        index += 1


def run_point(
    simulator: FrameSimulator,
    snr_db: float,
    snr_index: int,
    config: SimulationConfig,
    pool=None,
    build: Optional[str] = None,
) -> SimulationRecord:
    """Frames until ``min_frame_errors`` errors or ``max_frames`` frames."""
    started = time.perf_counter()
    window = pool.window if pool is not None else 1
    plan = batch_plan(config.max_frames, config.batch_size, simulator.frames_per_codeword)
    frames = frame_errors = bit_errors = 0
    done = False
    while not done:
        batches = [b for _, b in zip(range(window), plan)]
        if not batches:
            break
        tasks = [(simulator, snr_db, snr_index, index, size) for index, size in batches]
        if pool is None:
            results = [simulate_batch(*task) for task in tasks]
        else:
            results = pool.run_all(simulate_batch, tasks)
        for f, fe, be in results:
            frames, frame_errors, bit_errors = frames + f, frame_errors + fe, bit_errors + be
            if frame_errors >= config.min_frame_errors or frames >= config.max_frames:
                done = True
                break

    record = SimulationRecord(
        snr_db=snr_db,
        frames=frames,
        frame_errors=frame_errors,
        bit_errors=bit_errors,
        bits_per_frame=simulator.bits_per_frame,
        wall_seconds=time.perf_counter() - started,
        decode_mode=simulator.mode,
        design_method=config.design_method,
        build=build if build is not None else build_tag(),
    )
    if record.fer_upper_bound:
        logger.warning("%.2f dB: no frame errors in %d frames; fer is an upper bound", snr_db, frames)
    logger.info(
        "%.2f dB: %d/%d frame errors, FER %.3e, BER %.3e (%.1f s)",
        snr_db, frame_errors, frames, record.fer, record.ber, record.wall_seconds,
    )
    return record


def append_record(path: Path, record: SimulationRecord) -> None:
    """Append one row, writing the header into a new or empty file."""
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        if fresh:
            writer.writeheader()
        writer.writerow(record.csv_row())
        fh.flush()


def read_records(path: Path) -> list[SimulationRecord]:
    with path.open(newline="") as fh:
        return [SimulationRecord.from_csv_row(row) for row in csv.DictReader(fh)]


def run_sweep(
    simulator: FrameSimulator,
    config: SimulationConfig,
    out: Optional[Path] = None,
    pool=None,
) -> list[SimulationRecord]:
    """One record per SNR point, appended to ``out`` as soon as it is done."""
    points = config.snr_points()
    build = build_tag()
    records: list[SimulationRecord] = []
    for index, snr_db in enumerate(points):
        record = run_point(simulator, snr_db, index, config, pool, build)
        records.append(record)
        if out is not None:
            try:
                append_record(out, record)
            except OSError as exc:
                raise SimulationIOError(f"cannot write {out}: {exc}", partial_records=records) from exc
    logger.info("Sweep finished: %d points, mode=%s", len(records), simulator.mode)
    return records
