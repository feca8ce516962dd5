"""Simulation configuration, per-point records and binomial intervals."""

import math
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.stats import beta

from config import SETTINGS
from errors import ConfigError

DecodeMode = Literal["local", "global", "single"]

CSV_COLUMNS = (
    "snr_db",
    "frames",
    "frame_errors",
    "bit_errors",
    "fer",
    "ber",
    "wall_seconds",
    "decode_mode",
    "design_method",
    "build",
)


def binomial_ci(k: int, n: int, level: float = SETTINGS.simulation.ci_level) -> tuple[float, float]:
    """Exact (Clopper-Pearson) interval for k successes in n trials."""
    if n <= 0 or not 0 <= k <= n:
        raise ValueError(f"invalid binomial counts k={k}, n={n}")
    alpha = 1.0 - level
    low = 0.0 if k == 0 else float(beta.ppf(alpha / 2, k, n - k + 1))
    high = 1.0 if k == n else float(beta.ppf(1 - alpha / 2, k + 1, n - k))
    return low, high


class SimulationConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    architecture: str
    snr_start: float
    snr_stop: float
    snr_step: float = Field(gt=0)
    min_frame_errors: int = Field(SETTINGS.simulation.min_frame_errors, ge=1)
    max_frames: int = Field(SETTINGS.simulation.max_frames, ge=1)
    seed: int = 0
    mode: DecodeMode = "global"
    batch_size: int = Field(SETTINGS.simulation.batch_size, ge=1)
    workers: int = Field(SETTINGS.simulation.workers, ge=1)
    max_iters: int = Field(SETTINGS.decoder.max_iters, ge=1)
    design_method: str = "de"
    outer_profile: Optional[str] = None
    noiseless: bool = False

    @model_validator(mode="after")
    def _range(self) -> "SimulationConfig":
        if self.snr_stop < self.snr_start:
            raise ValueError(f"empty SNR range {self.snr_start}:{self.snr_stop}")
        return self

    def snr_points(self) -> list[float]:
        count = math.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9) + 1
        points = [round(self.snr_start + k * self.snr_step, 9) for k in range(count)]
        if not points:
            raise ConfigError("SNR sweep is empty")
        return points


def parse_snr_range(text: str) -> tuple[float, float, float]:
    """'a:b:step' (or a single value) to (start, stop, step)."""
    parts = [p for p in text.split(":") if p]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad SNR range {text!r}") from exc
    if len(values) == 1:
        return values[0], values[0], 1.0
    if len(values) == 3 and values[2] > 0 and values[1] >= values[0]:
        return values[0], values[1], values[2]
    raise ConfigError(f"SNR range {text!r} must be start:stop:step with stop >= start and step > 0")


class SimulationRecord(BaseModel):
    """One sweep point; ``ber`` is derived from ``bits_per_frame`` unless given."""

    model_config = ConfigDict(frozen=True)

    snr_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    ber: float
    bits_per_frame: Optional[float] = None
    wall_seconds: float
    decode_mode: DecodeMode
    design_method: str
    build: str

    @model_validator(mode="before")
    @classmethod
    def _derive_ber(cls, data):
        if isinstance(data, dict) and data.get("ber") is None:
            bits = data.get("bits_per_frame")
            if not bits:
                raise ValueError("ber or a positive bits_per_frame is required")
            data = {**data, "ber": data["bit_errors"] / (data["frames"] * bits)}
        return data

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames

    @property
    def fer_upper_bound(self) -> bool:
        """No frame error seen: fer is only an upper bound."""
        return self.frame_errors == 0

    def fer_ci(self, level: float = SETTINGS.simulation.ci_level) -> tuple[float, float]:
        return binomial_ci(self.frame_errors, self.frames, level)

    def csv_row(self) -> dict[str, str]:
        return {
            "snr_db": f"{self.snr_db:.4f}",
            "frames": str(self.frames),
            "frame_errors": str(self.frame_errors),
            "bit_errors": str(self.bit_errors),
            "fer": f"{self.fer:.6e}",
            "ber": f"{self.ber:.6e}",
            "wall_seconds": f"{self.wall_seconds:.3f}",
            "decode_mode": self.decode_mode,
            "design_method": self.design_method,
            "build": self.build,
        }

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> "SimulationRecord":
        return cls(
            snr_db=float(row["snr_db"]),
            frames=int(row["frames"]),
            frame_errors=int(row["frame_errors"]),
            bit_errors=int(row["bit_errors"]),
            ber=float(row["ber"]),
            wall_seconds=float(row["wall_seconds"]),
            decode_mode=row["decode_mode"],
            design_method=row["design_method"],
            build=row["build"],
        )
