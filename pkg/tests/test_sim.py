"""Tests for the channel simulators, records and the Monte-Carlo harness."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from architectures.codes import PolarCode, local_global_code
from errors import ConfigError, SimulationIOError
from sim.channel import awgn_transmit, bec_transmit, seeded_rng
from sim.harness import FrameSimulator, append_record, batch_plan, read_records, run_point, run_sweep
from sim.records import CSV_COLUMNS, SimulationConfig, SimulationRecord, binomial_ci, parse_snr_range
from workers.pool import FramePool


def sim_config(**overrides) -> SimulationConfig:
    fields = dict(architecture="test.json", snr_start=1.0, snr_stop=1.0, snr_step=1.0, batch_size=8, max_frames=64)
    fields.update(overrides)
    return SimulationConfig(**fields)


def record(**overrides) -> SimulationRecord:
    fields = dict(
        snr_db=1.5,
        frames=200,
        frame_errors=3,
        bit_errors=7,
        bits_per_frame=8,
        wall_seconds=0.25,
        decode_mode="global",
        design_method="ss",
        build="abc123",
    )
    fields.update(overrides)
    return SimulationRecord(**fields)


@pytest.fixture
def polar_code(profile_n3):
    return PolarCode(profile=profile_n3)


class TestChannels:
    """BPSK-AWGN and BEC front ends."""

    def test_seeded_rng_reproducible(self):
        """Equal keys give equal streams, different keys differ."""
        a = seeded_rng(1, 2, 3).normal(size=5)
        b = seeded_rng(1, 2, 3).normal(size=5)
        c = seeded_rng(1, 2, 4).normal(size=5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_awgn_sign_and_clamp(self, rng):
        """Low noise keeps the BPSK sign; LLRs stay within the clamp."""
        codeword = np.array([0, 1, 0, 1], dtype=np.uint8)
        llrs = awgn_transmit(codeword, 1e-4, rng)
        assert np.array_equal(llrs < 0, codeword.astype(bool))
        assert np.all(np.abs(llrs) <= 40.0)

    def test_awgn_llr_mean(self, rng):
        """All-zero LLRs have mean 2/sigma^2."""
        llrs = awgn_transmit(np.zeros(200_000, dtype=np.uint8), 2.0, rng)
        assert llrs.mean() == pytest.approx(1.0, abs=0.02)

    def test_awgn_rejects_bad_variance(self, rng):
        """sigma^2 must be positive."""
        with pytest.raises(ConfigError):
            awgn_transmit(np.zeros(4, dtype=np.uint8), 0.0, rng)

    def test_bec_extremes(self, rng):
        """eps=0 keeps every bit, eps=1 erases every bit."""
        codeword = np.array([0, 1, 1, 0], dtype=np.uint8)
        assert np.array_equal(bec_transmit(codeword, 0.0, rng), [40.0, -40.0, -40.0, 40.0])
        assert np.all(bec_transmit(codeword, 1.0, rng) == 0.0)


class TestRecords:
    """Binomial intervals, SNR ranges and CSV rows."""

    def test_binomial_ci_zero_errors(self):
        """k=0 has lower bound 0 and the exact upper bound."""
        low, high = binomial_ci(0, 10)
        assert low == 0.0
        assert high == pytest.approx(1.0 - 0.025 ** 0.1, rel=1e-6)

    def test_binomial_ci_covers_estimate(self):
        """The interval brackets k/n."""
        low, high = binomial_ci(30, 1000)
        assert low < 0.03 < high
        assert binomial_ci(5, 5)[1] == 1.0

    def test_binomial_ci_invalid(self):
        """k outside 0..n is rejected."""
        with pytest.raises(ValueError):
            binomial_ci(3, 2)

    def test_parse_snr_range(self):
        """start:stop:step, a single value, and malformed input."""
        assert parse_snr_range("1:3:0.5") == (1.0, 3.0, 0.5)
        assert parse_snr_range("2") == (2.0, 2.0, 1.0)
        for bad in ("3:1:1", "1:2", "a:b:c", "1:2:0"):
            with pytest.raises(ConfigError):
                parse_snr_range(bad)

    def test_snr_points(self):
        """Inclusive grid from start to stop."""
        assert sim_config(snr_start=1.0, snr_stop=2.0, snr_step=0.5).snr_points() == [1.0, 1.5, 2.0]
        assert sim_config(snr_start=0.0, snr_stop=1.0, snr_step=0.3).snr_points() == [0.0, 0.3, 0.6, 0.9]

    def test_empty_range_rejected(self):
        """stop < start is a configuration error."""
        with pytest.raises(ValueError):
            sim_config(snr_start=2.0, snr_stop=1.0)

    def test_rates_and_bound_flag(self):
        """fer and ber; zero errors marks an upper bound."""
        r = record()
        assert r.fer == pytest.approx(0.015)
        assert r.ber == pytest.approx(7 / 1600)
        assert not r.fer_upper_bound
        assert record(frame_errors=0, bit_errors=0).fer_upper_bound

    def test_csv_append_and_read(self, tmp_path):
        """Header written once; rows read back."""
        path = tmp_path / "out.csv"
        append_record(path, record())
        append_record(path, record(snr_db=2.0, frame_errors=0, bit_errors=0))
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 3
        rows = read_records(path)
        assert [r.snr_db for r in rows] == [1.5, 2.0]
        assert rows[0].frame_errors == 3 and rows[0].design_method == "ss"

    def test_ber_survives_csv(self, tmp_path):
        """ber read back from a file equals the ber written, for any frame size."""
        path = tmp_path / "ber.csv"
        written = record(frames=100, bit_errors=7, bits_per_frame=512)
        append_record(path, written)
        (again,) = read_records(path)
        assert again.ber == pytest.approx(written.ber, rel=1e-6)
        assert again.ber == pytest.approx(7 / 51200, rel=1e-6)
        assert again.csv_row() == written.csv_row()

    def test_ber_or_frame_size_required(self):
        """A record needs ber or the bits in a frame."""
        with pytest.raises(ValueError):
            record(bits_per_frame=None)
        assert record(bits_per_frame=None, ber=1e-3).ber == 1e-3


class TestFrameSimulator:
    """Mode checks and batch accounting."""

    def test_mode_must_match_code(self, polar_code, small_augmented):
        """single is for plain codes, local for local-global codes."""
        with pytest.raises(ConfigError):
            FrameSimulator(polar_code, "global")
        with pytest.raises(ConfigError):
            FrameSimulator(small_augmented, "local")
        with pytest.raises(ConfigError):
            FrameSimulator(small_augmented, "single")

    def test_bits_per_frame(self, polar_code, small_augmented, small_local_global):
        """Information bits counted per frame."""
        assert FrameSimulator(polar_code, "single").bits_per_frame == 4
        assert FrameSimulator(small_augmented, "global").bits_per_frame == 2 + 6
        assert FrameSimulator(small_local_global, "global").bits_per_frame == 4 + 8
        local = FrameSimulator(small_local_global, "local")
        assert local.bits_per_frame == 2 + 4
        assert local.frames_per_codeword == 2

    def test_local_bits_with_unequal_blocks(self, profile_n3, inner_order_n4):
        """Local BER uses the mean information bits over the blocks."""
        code = local_global_code(profile_n3, inner_order_n4, [4, 6], "natural")
        assert [len(code.global_positions(m)) for m in (1, 2)] == [1, 3]
        local = FrameSimulator(code, "local")
        assert local.bits_per_frame == pytest.approx(((1 + 4) + (3 + 6)) / 2)
        frames, _, _ = local.run_batch(3.0, 0, 0, 5)
        assert frames == 5 * local.frames_per_codeword

    @pytest.mark.parametrize("mode,fixture", [
        ("single", "polar_code"),
        ("global", "small_augmented"),
        ("global", "small_local_global"),
        ("local", "small_local_global"),
    ])
    def test_noiseless_batches_decode(self, request, mode, fixture):
        """Clamped noiseless LLRs decode without errors."""
        simulator = FrameSimulator(request.getfixturevalue(fixture), mode, seed=5, noiseless=True)
        frames, frame_errors, bit_errors = simulator.run_batch(1.0, 0, 0, 6)
        assert frames == 6 * simulator.frames_per_codeword
        assert frame_errors == 0 and bit_errors == 0

    def test_batch_plan(self):
        """Batches cover max_frames, counted in codewords."""
        assert list(batch_plan(10, 4, 1)) == [(0, 4), (1, 4), (2, 2)]
        assert list(batch_plan(10, 8, 2)) == [(0, 5)]


class TestHarness:
    """Stop rule, determinism and CSV output."""

    def test_stop_on_frame_errors(self, polar_code):
        """With one-frame batches the point stops at exactly min_frame_errors."""
        simulator = FrameSimulator(polar_code, "single", seed=2)
        config = sim_config(min_frame_errors=5, batch_size=1, max_frames=100_000)
        r = run_point(simulator, -2.0, 0, config, build="t")
        assert r.frame_errors == 5
        assert r.frames >= 5

    def test_stop_on_max_frames(self, small_augmented):
        """A noiseless point runs max_frames and reports an upper bound."""
        simulator = FrameSimulator(small_augmented, "global", noiseless=True)
        r = run_point(simulator, 1.0, 0, sim_config(max_frames=10, batch_size=4), build="t")
        assert r.frames == 10 and r.frame_errors == 0
        assert r.fer_upper_bound

    def test_local_mode_counts_blocks(self, small_local_global):
        """Each inner code is a frame of its own."""
        simulator = FrameSimulator(small_local_global, "local", noiseless=True)
        r = run_point(simulator, 1.0, 0, sim_config(max_frames=10), build="t")
        assert r.frames == 10
        assert r.decode_mode == "local"

    def test_same_seed_same_record(self, polar_code):
        """Records match apart from the wall clock."""
        config = sim_config(min_frame_errors=10, max_frames=400)
        first = run_point(FrameSimulator(polar_code, "single", seed=9), 0.0, 0, config, build="t")
        second = run_point(FrameSimulator(polar_code, "single", seed=9), 0.0, 0, config, build="t")
        assert first.model_dump(exclude={"wall_seconds"}) == second.model_dump(exclude={"wall_seconds"})

    def test_worker_count_does_not_change_counts(self, polar_code):
        """A two-worker pool consumes batches in the same order."""
        simulator = FrameSimulator(polar_code, "single", seed=4)
        config = sim_config(min_frame_errors=7, batch_size=2, max_frames=1000)
        alone = run_point(simulator, 0.0, 0, config, build="t")
        with ThreadPoolExecutor(max_workers=2) as executor:
            pool = FramePool(workers=2, executor=executor)
            pooled = run_point(simulator, 0.0, 0, config, pool=pool, build="t")
        assert (alone.frames, alone.frame_errors, alone.bit_errors) == (
            pooled.frames, pooled.frame_errors, pooled.bit_errors,
        )

    def test_sweep_appends_rows(self, polar_code, tmp_path, mocker):
        """One CSV row per SNR point, in sweep order."""
        mocker.patch("sim.harness.build_tag", return_value="test-build")
        out = tmp_path / "sweep.csv"
        config = sim_config(snr_start=0.0, snr_stop=2.0, snr_step=1.0, min_frame_errors=2, max_frames=50)
        records = run_sweep(FrameSimulator(polar_code, "single", seed=1), config, out)
        assert [r.snr_db for r in records] == [0.0, 1.0, 2.0]
        rows = read_records(out)
        assert [r.build for r in rows] == ["test-build"] * 3

    def test_write_failure_keeps_partial_records(self, polar_code, tmp_path, mocker):
        """The first point is kept when its row cannot be written."""
        mocker.patch("sim.harness.build_tag", return_value="test-build")
        out = tmp_path / "missing" / "sweep.csv"
        config = sim_config(snr_start=0.0, snr_stop=1.0, snr_step=1.0, max_frames=16)
        with pytest.raises(SimulationIOError) as info:
            run_sweep(FrameSimulator(polar_code, "single"), config, out)
        assert len(info.value.partial_records) == 1
        assert info.value.partial_records[0].snr_db == 0.0
