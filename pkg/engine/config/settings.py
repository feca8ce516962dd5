"""Default settings for construction, decoding, design and simulation."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

TOOL_VERSION = "0.3.0"

CONFIG_DIR = Path(__file__).resolve().parent
GA_SEGMENTS_FILE = CONFIG_DIR / "ga_segments.json"

Construction = Literal["de", "ga", "ga-phi", "bhattacharyya"]


class GridSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid_min: float = -40.0
    grid_max: float = 40.0
    # 2048 intervals, so that LLR 0 sits exactly on bin 1024
    bins: int = 2049


class DecoderSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iters: int = 100
    llr_clamp: float = 40.0
    histogram_frames: int = 100_000
    histogram_min_frames: int = 1
    t_augmented: int = 3
    t_local_global: int = 4


class SimulationSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    min_frame_errors: int = Field(100, ge=1)
    max_frames: int = Field(10_000_000, ge=1)
    batch_size: int = Field(64, ge=1)
    workers: int = Field(1, ge=1)
    ci_level: float = 0.95


class DesignSettings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    inner_snr_db: float = 3.0
    outer_snr_db: float = 3.0
    construction: Construction = "de"
    swaps: int = 4
    nde_max_iterations: int = 10
    oracle_max_length: int = 16


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid: GridSettings = GridSettings()
    decoder: DecoderSettings = DecoderSettings()
    simulation: SimulationSettings = SimulationSettings()
    design: DesignSettings = DesignSettings()


SETTINGS = Settings()
