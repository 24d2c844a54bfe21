"""Uniformly sampled scalar series shared by every module."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """Scalar observable sampled every ``dt`` seconds starting at ``t0``."""

    samples: np.ndarray
    dt: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if x.size < 2:
            raise ValueError("a time series needs at least 2 samples")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def fs(self) -> float:
        return 1.0 / self.dt

    @property
    def duration(self) -> float:
        return (self.samples.size - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    def head(self, n: int) -> "TimeSeries":
        return TimeSeries(self.samples[:n], self.dt, self.t0)


def as_array(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.samples
    return np.asarray(series, dtype=float)
