"""Channel models and their quantized LLR densities under the all-zero codeword."""

import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.stats import norm

from density.grid import DEFAULT_GRID, DensityGrid, QuantizedDensity


def ebn0_to_sigma2(ebn0_db: float, rate: float) -> float:
    """Noise variance of unit-energy BPSK: 1 / (2 R 10^(EbN0/10))."""
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


class ChannelModel(BaseModel):
    """AWGN-BPSK (by Eb/N0 and rate, or by sigma^2) or BEC(epsilon)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["awgn", "bec"] = "awgn"
    ebn0_db: Optional[float] = None
    rate: float = Field(0.5, gt=0, le=1)
    sigma2: Optional[float] = Field(None, gt=0)
    epsilon: Optional[float] = Field(None, ge=0, le=1)

    @model_validator(mode="after")
    def _check_parameters(self) -> "ChannelModel":
        if self.kind == "awgn" and self.ebn0_db is None and self.sigma2 is None:
            raise ValueError("AWGN model needs ebn0_db or sigma2")
        if self.kind == "bec" and self.epsilon is None:
            raise ValueError("BEC model needs epsilon")
        return self

    @classmethod
    def awgn(cls, ebn0_db: float, rate: float = 0.5) -> "ChannelModel":
        return cls(kind="awgn", ebn0_db=ebn0_db, rate=rate)

    @classmethod
    def bec(cls, epsilon: float) -> "ChannelModel":
        return cls(kind="bec", epsilon=epsilon)

    @property
    def noise_variance(self) -> float:
        if self.sigma2 is not None:
            return self.sigma2
        return ebn0_to_sigma2(self.ebn0_db, self.rate)

    @property
    def llr_mean(self) -> float:
        """Mean channel LLR 2/sigma^2 (variance is twice this)."""
        return 2.0 / self.noise_variance

    @property
    def is_erasure(self) -> bool:
        return self.kind == "bec"


def gaussian_density(mean: float, grid: DensityGrid = DEFAULT_GRID) -> QuantizedDensity:
    """Symmetric Gaussian N(mean, 2*mean) integrated over the grid bins."""
    if mean <= 0:
        return QuantizedDensity.erasure(grid)
    std = math.sqrt(2.0 * mean)
    edges = grid.centers[:-1] + grid.delta / 2.0
    cdf = norm.cdf(edges, loc=mean, scale=std)
    mass = np.diff(np.concatenate(([0.0], cdf, [1.0])))
    return QuantizedDensity.normalized(grid, mass)


def channel_density(model: ChannelModel, grid: DensityGrid = DEFAULT_GRID) -> QuantizedDensity:
    if model.kind == "bec":
        mass = np.zeros(grid.bins)
        mass[grid.zero_index] = model.epsilon
        mass[-1] += 1.0 - model.epsilon
        return QuantizedDensity(grid, mass)
    return gaussian_density(model.llr_mean, grid)
