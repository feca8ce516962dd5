"""Strict experiment configuration for an architecture and its design."""

import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.settings import SETTINGS, Construction
from errors import ConfigError

Arch = Literal["polar", "augmented", "local-global"]
DesignMethod = Literal["de", "ss", "nde"]
ConnectionSpec = Union[Literal["natural", "example1"], list[tuple[int, int, int]]]


class DesignConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    method: DesignMethod = "de"
    snr_db: float = SETTINGS.design.outer_snr_db
    s: int = Field(SETTINGS.design.swaps, ge=0)
    t: Optional[int] = Field(None, ge=1)
    construction: Construction = SETTINGS.design.construction
    random_init: bool = False


class InnerConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    snr_db: float = SETTINGS.design.inner_snr_db
    construction: Construction = SETTINGS.design.construction


class ArchitectureConfig(BaseModel):
    """One concatenated (or plain) code; unknown fields are rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    version: Literal[1]
    arch: Arch
    M: int = Field(1, ge=1)
    n0: int = Field(0, ge=0, le=12)
    n_inner: list[int]
    R0: float = Field(0.5, gt=0, le=1)
    K_b: list[int]
    connection: ConnectionSpec = "natural"
    design: DesignConfig = DesignConfig()
    inner: InnerConfig = InnerConfig()
    outer_profile: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "ArchitectureConfig":
        if len(self.n_inner) != self.M or len(self.K_b) != self.M:
            raise ValueError(f"n_inner and K_b need {self.M} entries")
        if len(set(self.n_inner)) != 1:
            raise ValueError("inner codes must have equal length")
        if self.arch != "local-global" and self.M != 1:
            raise ValueError(f"{self.arch} codes have a single inner code")
        if self.arch == "local-global" and self.M < 2:
            raise ValueError("local-global codes need M >= 2")
        share = self.N0 // self.M if self.arch != "polar" else 0
        for k in self.K_b:
            if k < 0 or k + share > self.N:
                raise ValueError(f"K_b={k} plus {share} semipolarized inputs exceeds N={self.N}")
        if self.arch == "local-global" and self.connection == "example1" and self.M != 2:
            raise ValueError("the example1 connection is defined for M = 2")
        return self

    @property
    def N(self) -> int:
        return 1 << self.n_inner[0]

    @property
    def N0(self) -> int:
        return 1 << self.n0

    @property
    def K0(self) -> int:
        return round(self.R0 * self.N0)

    @property
    def rate(self) -> float:
        if self.arch == "polar":
            return self.K_b[0] / self.N
        return (self.K0 + sum(self.K_b)) / (self.M * self.N)


def load_architecture(path: str | Path) -> ArchitectureConfig:
    try:
        return ArchitectureConfig.model_validate(json.loads(Path(path).read_text()))
    except ValidationError as exc:
        raise ConfigError(f"invalid architecture config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"architecture config {path} is not JSON: {exc}") from exc
