"""Regular-grid series and sparse observation containers.

A :class:`TimeGrid` is the fine regular grid t_i = t0 + i*dt.  A
:class:`TimeSeries` is a value per grid point (the simulated truth, or a
GP reconstruction of it).  :class:`Observations` is the sparse irregular
subset actually seen by the regression, with the fine-grid indices kept
alongside times and values so evaluation can align forecasts exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["TimeGrid", "TimeSeries", "Observations", "make_grid"]


@dataclass(frozen=True)
class TimeGrid:
    """Regular grid of ``n`` times starting at ``t0`` with spacing ``dt``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "n", int(self.n))
        if not np.isfinite(self.t0):
            raise DomainError(f"t0 must be finite, got {self.t0}")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise DomainError(f"dt must be > 0, got {self.dt}")
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")

    def times(self) -> np.ndarray:
        """The grid times t0 + i*dt, recomputed on demand."""
        return self.t0 + np.arange(self.n) * self.dt


def make_grid(t0: float, dt: float, n: int) -> TimeGrid:
    """Build a validated :class:`TimeGrid` (dt > 0, n >= 2)."""
    return TimeGrid(t0, dt, n)


@dataclass(frozen=True)
class TimeSeries:
    """Values on a regular grid; length must equal ``grid.n``."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.shape[0] != self.grid.n:
            raise DomainError(
                f"values must be a length-{self.grid.n} vector, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("series values must be finite")


@dataclass(frozen=True)
class Observations:
    """Sparse subset of a gridded series.

    ``indices`` are strictly increasing positions on the fine grid;
    ``times`` and ``values`` are the matching grid times and series
    values.  Gap constraints are established by ``simulate.sparsify``;
    hand-built instances only need monotone indices.
    """

    indices: np.ndarray
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=int)
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if not (indices.ndim == times.ndim == values.ndim == 1):
            raise DomainError("indices, times, and values must be 1-d vectors")
        if not len(indices) == len(times) == len(values):
            raise DomainError(
                "indices, times, and values must have equal length, got "
                f"{len(indices)}, {len(times)}, {len(values)}"
            )
        if len(indices) > 0 and np.any(np.diff(indices) <= 0):
            raise DomainError("indices must be strictly increasing")
        if len(indices) > 0 and indices[0] < 0:
            raise DomainError("indices must be nonnegative")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise DomainError("observation times and values must be finite")

    def __len__(self) -> int:
        return len(self.indices)
