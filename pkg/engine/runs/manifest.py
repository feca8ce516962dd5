"""Run manifests in the style of a CI run: steps, logs and artifacts.

Each command writes ``<output>.manifest.json`` next to its main output
recording the tool version, command line, resolved configuration, input
hashes, seed and timestamps.
"""

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

from config import TOOL_VERSION

logger = logging.getLogger(__name__)

Status = Literal["queued", "in_progress", "completed", "failed"]
Level = Literal["info", "warning", "error", "success"]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunStep(BaseModel):
    id: str
    name: str
    status: Status = "queued"
    startTime: str = Field(default_factory=_now)
    endTime: Optional[str] = None
    duration: Optional[float] = None


class LogEntry(BaseModel):
    timestamp: str = Field(default_factory=_now)
    level: Level
    message: str
    stepId: Optional[str] = None


class Artifact(BaseModel):
    name: str
    path: str
    sha256: str
    size: int


class RunManifest(BaseModel):
    """Provenance of one command invocation."""

    tool_version: str = TOOL_VERSION
    command: list[str]
    config: dict[str, Any] = {}
    inputs: dict[str, str] = {}
    seed: Optional[int] = None
    timestamp: str = Field(default_factory=_now)
    status: Status = "in_progress"
    conclusion: Optional[str] = None
    steps: list[RunStep] = []
    logs: list[LogEntry] = []
    artifacts: list[Artifact] = []

    def add_input(self, path: Path) -> None:
        self.inputs[str(path)] = sha256_file(path)

    def start_step(self, name: str) -> str:
        step = RunStep(id=f"{len(self.steps) + 1}-{name}", name=name, status="in_progress")
        self.steps.append(step)
        return step.id

    def finish_step(self, step_id: str, status: Status = "completed") -> None:
        for step in self.steps:
            if step.id == step_id:
                step.status = status
                step.endTime = _now()
                start = datetime.fromisoformat(step.startTime)
                end = datetime.fromisoformat(step.endTime)
                step.duration = (end - start).total_seconds()
                break

    def log(self, level: Level, message: str, step_id: Optional[str] = None) -> None:
        self.logs.append(LogEntry(level=level, message=message, stepId=step_id))

    def add_artifact(self, path: Path, name: Optional[str] = None) -> Artifact:
        path = Path(path)
        artifact = Artifact(
            name=name or path.name,
            path=str(path),
            sha256=sha256_file(path),
            size=path.stat().st_size,
        )
        self.artifacts.append(artifact)
        return artifact

    def close(self, conclusion: str = "success") -> None:
        self.status = "completed" if conclusion == "success" else "failed"
        self.conclusion = conclusion

    def write(self, output: Path) -> Path:
        """Write next to ``output`` as ``<output>.manifest.json``."""
        target = Path(f"{output}.manifest.json")
        target.write_text(json.dumps(self.model_dump(mode="json"), indent=2))
        logger.info("Wrote run manifest %s", target)
        return target

    @classmethod
    def read(cls, path: Path) -> "RunManifest":
        return cls.model_validate_json(Path(path).read_text())
