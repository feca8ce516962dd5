"""Tests for the polarcat command line."""

import json

import pytest
from freezegun import freeze_time

from cli import build_parser, dispatch
from errors import SimulationIOError
from polar.profile import CodeProfile
from runs.manifest import RunManifest
from sim.harness import read_records
from verify import CheckResult


@pytest.fixture
def run(workdir):
    def _run(*argv: str) -> int:
        return dispatch(["--workdir", str(workdir), *argv])

    return _run


class TestParsing:
    """Usage errors and help."""

    def test_no_command(self, capsys):
        """Prints usage and exits 2."""
        assert dispatch([]) == 2
        assert "usage: polarcat" in capsys.readouterr().err

    def test_help(self):
        """--help is a clean exit."""
        assert dispatch(["--help"]) == 0

    def test_unknown_command(self):
        """Unknown subcommands are usage errors."""
        assert dispatch(["frobnicate"]) == 2

    def test_missing_required_option(self):
        """construct needs --n and --k."""
        assert dispatch(["construct", "--n", "3"]) == 2

    def test_parser_lists_subcommands(self):
        """Every subcommand parses."""
        parser = build_parser()
        for argv in (
            ["construct", "--n", "3", "--k", "4"],
            ["analyze-ss", "--n", "3"],
            ["design-outer", "--config", "a.json", "--out", "o.json"],
            ["collect-densities", "--arch", "a.json", "--out", "h.json"],
            ["simulate", "--config", "a.json", "--snr", "1:2:1", "--out", "s.csv"],
            ["verify", "--quick"],
        ):
            assert parser.parse_args(argv).command == argv[0]


class TestConstruct:
    """construct writes a profile and its manifest."""

    def test_bec_example(self, run, workdir):
        """BEC(0.5), n=3, K=4 gives {4,6,7,8}."""
        assert run("construct", "--channel", "bec", "--eps", "0.5", "--n", "3", "--k", "4", "--out", "p.json") == 0
        profile = json.loads((workdir / "p.json").read_text())
        assert profile["unfrozen"] == [4, 6, 7, 8]
        assert profile["reliability_order"][:4] == [8, 7, 6, 4]
        manifest = RunManifest.read(workdir / "p.json.manifest.json")
        assert manifest.status == "completed"
        assert manifest.command[:2] == ["polarcat", "--workdir"]
        assert manifest.artifacts[0].name == "p.json"
        assert manifest.config["k"] == 4

    def test_stdout(self, run, capsys):
        """Without --out the profile goes to stdout."""
        assert run("construct", "--method", "ga", "--snr-db", "2", "--n", "4", "--k", "8") == 0
        profile = json.loads(capsys.readouterr().out)
        assert profile["N"] == 16 and len(profile["unfrozen"]) == 8

    def test_k_too_large(self, run):
        """A bad K is a usage error."""
        assert run("construct", "--channel", "bec", "--n", "2", "--k", "5") == 2


class TestAnalyzeSs:
    """g bounds and exact MVSS."""

    def test_pair(self, run, workdir):
        """For a pair of rows the bound is tight."""
        assert run("analyze-ss", "--n", "3", "--rows", "2,3", "--out", "ss.json") == 0
        (entry,) = json.loads((workdir / "ss.json").read_text())
        assert entry["J"] == [2, 3]
        assert entry["mvss"] == entry["g"]

    def test_singletons(self, run, workdir):
        """One entry per row; MVSS never below g."""
        assert run("analyze-ss", "--n", "2", "--out", "ss.json") == 0
        entries = json.loads((workdir / "ss.json").read_text())
        assert [e["i"] for e in entries] == [1, 2, 3, 4]
        assert all(e["mvss"] >= e["g"] for e in entries)

    def test_concatenated(self, run, workdir, tiny_augmented_config):
        """One entry per outer position."""
        assert run("analyze-ss", "--config", tiny_augmented_config, "--out", "ss.json") == 0
        entries = json.loads((workdir / "ss.json").read_text())
        assert len(entries) == 4
        assert all(e["g"] >= 1 for e in entries)

    def test_needs_input(self, run):
        """--n or --config is required."""
        assert run("analyze-ss") == 2


class TestDesignOuter:
    """design-outer writes an outer profile."""

    def test_de(self, run, workdir, tiny_augmented_config):
        """Baseline design with the config hash in its provenance."""
        assert run("design-outer", "--config", tiny_augmented_config, "--method", "de", "--out", "outer.json") == 0
        profile = json.loads((workdir / "outer.json").read_text())
        assert profile["N"] == 4 and len(profile["unfrozen"]) == 2
        assert profile["provenance"]["method"] == "de"
        assert any(k.endswith(tiny_augmented_config) for k in profile["provenance"]["inputs"])

    def test_arch_mismatch(self, run, tiny_augmented_config):
        """--arch must agree with the config."""
        assert run("design-outer", "--config", tiny_augmented_config, "--arch", "local-global", "--out", "o.json") == 2

    def test_missing_config(self, run):
        """Unreadable inputs exit 1."""
        assert run("design-outer", "--config", "absent.json", "--out", "o.json") == 1

    def test_invalid_config(self, run, write_config):
        """Schema errors exit 2."""
        name = write_config("bad.json", arch="augmented", n_inner=[4], K_b=[4], extra=True)
        assert run("design-outer", "--config", name, "--out", "o.json") == 2

    def test_nde_from_histogram_file(self, run, workdir, tiny_augmented_config):
        """collect-densities output feeds the NDE design."""
        assert run(
            "collect-densities", "--arch", tiny_augmented_config, "--iters", "2", "--frames", "100", "--out", "hist.json"
        ) == 0
        hist = json.loads((workdir / "hist.json").read_text())
        assert hist["t"] == 2 and len(hist["histograms"]) == 4
        assert run(
            "design-outer", "--config", tiny_augmented_config, "--method", "nde", "--hist", "hist.json", "--out", "o.json"
        ) == 0
        profile = json.loads((workdir / "o.json").read_text())
        assert profile["provenance"]["method"] == "nde"
        manifest = RunManifest.read(workdir / "o.json.manifest.json")
        assert len(manifest.inputs) == 2

    def test_histogram_t_mismatch(self, run, tiny_augmented_config):
        """--t must match the histogram file."""
        assert run(
            "collect-densities", "--arch", tiny_augmented_config, "--iters", "2", "--frames", "50", "--out", "hist.json"
        ) == 0
        assert run(
            "design-outer", "--config", tiny_augmented_config, "--method", "nde",
            "--hist", "hist.json", "--t", "3", "--out", "o.json",
        ) == 2


class TestSimulate:
    """simulate appends CSV rows."""

    def test_noiseless_sweep(self, run, workdir, tiny_augmented_config):
        """One row per point; the manifest records the sweep."""
        assert run(
            "simulate", "--config", tiny_augmented_config, "--snr", "1:2:1",
            "--noiseless", "--max-frames", "16", "--batch-size", "8", "--out", "out/fer.csv",
        ) == 0
        rows = read_records(workdir / "out" / "fer.csv")
        assert [r.snr_db for r in rows] == [1.0, 2.0]
        assert all(r.frame_errors == 0 and r.frames == 16 for r in rows)
        manifest = RunManifest.read(workdir / "out" / "fer.csv.manifest.json")
        assert manifest.config["simulation"]["mode"] == "global"

    def test_designed_outer_profile(self, run, workdir, tiny_local_global_config):
        """The outer profile's design method is recorded per row."""
        assert run(
            "design-outer", "--config", tiny_local_global_config, "--method", "ss", "--s", "0", "--out", "ss.json"
        ) == 0
        assert run(
            "simulate", "--config", tiny_local_global_config, "--outer-profile", "ss.json", "--snr", "3",
            "--mode", "local", "--noiseless", "--max-frames", "8", "--out", "lg.csv",
        ) == 0
        (row,) = read_records(workdir / "lg.csv")
        assert row.design_method == "ss" and row.decode_mode == "local"

    def test_polar_stored_profile(self, run, workdir, write_config):
        """A plain code simulates the stored profile and records its method."""
        profile = CodeProfile.from_order((1, 2, 3, 5, 4, 6, 7, 8), 4, provenance={"method": "ss"})
        (workdir / "o.json").write_text(profile.to_json())
        name = write_config("p.json", arch="polar", n_inner=[3], K_b=[4])
        assert run(
            "simulate", "--config", name, "--outer-profile", "o.json", "--snr", "2",
            "--noiseless", "--max-frames", "8", "--out", "polar.csv",
        ) == 0
        (row,) = read_records(workdir / "polar.csv")
        assert row.decode_mode == "single" and row.design_method == "ss"
        assert row.frame_errors == 0
        manifest = RunManifest.read(workdir / "polar.csv.manifest.json")
        assert str(workdir / "o.json") in manifest.inputs

    def test_mode_mismatch(self, run, tiny_augmented_config):
        """Local decoding of an augmented code is rejected."""
        assert run(
            "simulate", "--config", tiny_augmented_config, "--snr", "1", "--mode", "local", "--out", "x.csv"
        ) == 2

    def test_io_failure_exits_1(self, run, tiny_augmented_config, mocker):
        """Write failures during a sweep exit 1."""
        mocker.patch("cli.run_sweep", side_effect=SimulationIOError("disk full"))
        assert run("simulate", "--config", tiny_augmented_config, "--snr", "1", "--out", "x.csv") == 1


class TestVerify:
    """verify reports the property suite."""

    def test_all_pass(self, mocker, capsys):
        """Exit 0 and a summary line."""
        mocker.patch("cli.run_checks", return_value=[CheckResult("a", True, "ok", 0.1)])
        assert dispatch(["verify", "--quick"]) == 0
        assert "1/1 checks passed" in capsys.readouterr().out

    def test_failure(self, mocker):
        """Any failed check exits 1."""
        results = [CheckResult("a", True, "ok", 0.1), CheckResult("b", False, "mismatch", 0.2)]
        mocker.patch("cli.run_checks", return_value=results)
        assert dispatch(["verify"]) == 1


class TestDeterminism:
    """Identical seeds and configs give identical files."""

    @staticmethod
    def without_clock(path):
        lines = path.read_text().splitlines()
        column = lines[0].split(",").index("wall_seconds")
        return [[v for k, v in enumerate(line.split(",")) if k != column] for line in lines]

    def test_profiles_byte_identical(self, run, workdir):
        """construct twice."""
        for name in ("a.json", "b.json"):
            assert run("construct", "--snr-db", "2", "--n", "5", "--k", "16", "--out", name) == 0
        assert (workdir / "a.json").read_bytes() == (workdir / "b.json").read_bytes()

    def test_histograms_independent_of_workers(self, run, workdir, tiny_local_global_config):
        """Histogram batches are keyed by index, not by worker."""
        for name, workers in (("h1.json", "1"), ("h2.json", "2")):
            assert run(
                "collect-densities", "--arch", tiny_local_global_config, "--iters", "2",
                "--frames", "3000", "--seed", "4", "--workers", workers, "--out", name,
            ) == 0
        assert (workdir / "h1.json").read_bytes() == (workdir / "h2.json").read_bytes()

    def test_sweep_independent_of_workers(self, run, workdir, tiny_augmented_config):
        """Same CSV apart from wall-clock time."""
        for name, workers in (("w1.csv", "1"), ("w2.csv", "2")):
            assert run(
                "simulate", "--config", tiny_augmented_config, "--snr", "0:1:1", "--seed", "6",
                "--min-errors", "5", "--max-frames", "400", "--batch-size", "4",
                "--workers", workers, "--out", name,
            ) == 0
        assert self.without_clock(workdir / "w1.csv") == self.without_clock(workdir / "w2.csv")

    @freeze_time("2026-03-01 12:00:00")
    def test_manifest_identical_across_runs(self, run, workdir):
        """Two runs at a fixed clock write the same sidecar."""
        sidecars = []
        for _ in range(2):
            assert run("construct", "--snr-db", "2", "--n", "4", "--k", "8", "--out", "p.json") == 0
            sidecars.append((workdir / "p.json.manifest.json").read_bytes())
        assert sidecars[0] == sidecars[1]
