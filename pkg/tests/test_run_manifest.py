"""Tests for run manifests."""

import hashlib

import pytest
from freezegun import freeze_time

from config import TOOL_VERSION
from runs.manifest import RunManifest, sha256_file


@pytest.fixture
def manifest():
    return RunManifest(command=["polarcat", "construct", "--n", "3"])


class TestRunManifest:
    """Steps, logs, artifacts and the sidecar file."""

    @freeze_time("2026-03-01 12:00:00")
    def test_defaults(self):
        """Version, UTC timestamp and in-progress status."""
        manifest = RunManifest(command=["polarcat"])
        assert manifest.tool_version == TOOL_VERSION
        assert manifest.timestamp == "2026-03-01T12:00:00+00:00"
        assert manifest.status == "in_progress"
        assert manifest.conclusion is None

    def test_step_duration(self):
        """finish_step records end time and duration."""
        with freeze_time("2026-03-01 12:00:00") as frozen:
            manifest = RunManifest(command=["polarcat"])
            step = manifest.start_step("simulate")
            frozen.tick(2.5)
            manifest.finish_step(step)
        done = manifest.steps[0]
        assert done.status == "completed"
        assert done.duration == pytest.approx(2.5)
        assert done.endTime == "2026-03-01T12:00:02.500000+00:00"

    def test_failed_step_and_log(self, manifest):
        """Failures are recorded on the step and in the log."""
        step = manifest.start_step("simulate")
        manifest.finish_step(step, "failed")
        manifest.log("error", "disk full", step)
        assert manifest.steps[0].status == "failed"
        assert manifest.logs[0].stepId == step
        assert manifest.logs[0].level == "error"

    def test_unknown_step_ignored(self, manifest):
        """Finishing an unknown id changes nothing."""
        manifest.start_step("a")
        manifest.finish_step("nope")
        assert manifest.steps[0].status == "in_progress"

    def test_inputs_and_artifacts_hashed(self, manifest, tmp_path):
        """SHA-256 of inputs and outputs."""
        data = tmp_path / "in.json"
        data.write_text('{"x": 1}')
        manifest.add_input(data)
        artifact = manifest.add_artifact(data, name="input")
        expected = hashlib.sha256(b'{"x": 1}').hexdigest()
        assert manifest.inputs[str(data)] == expected == sha256_file(data)
        assert artifact.size == 8 and artifact.name == "input"

    def test_close(self, manifest):
        """Success completes, anything else fails."""
        manifest.close()
        assert (manifest.status, manifest.conclusion) == ("completed", "success")
        manifest.close("failure")
        assert manifest.status == "failed"

    def test_write_and_read(self, manifest, tmp_path):
        """The sidecar sits next to the output and reads back."""
        out = tmp_path / "profile.json"
        out.write_text("{}")
        manifest.seed = 11
        manifest.add_artifact(out)
        manifest.close()
        target = manifest.write(out)
        assert target.name == "profile.json.manifest.json"
        again = RunManifest.read(target)
        assert again.model_dump() == manifest.model_dump()
        assert again.seed == 11

    def test_step_ids_reproducible(self):
        """Step ids depend only on the order and names of the steps."""
        ids = []
        for _ in range(2):
            manifest = RunManifest(command=["polarcat"])
            ids.append([manifest.start_step("load"), manifest.start_step("simulate"), manifest.start_step("load")])
        assert ids[0] == ids[1] == ["1-load", "2-simulate", "3-load"]
