"""Toy-data generation: GP prior draws on a regular grid, then sparse subsets.

A truth series is a single draw from the zero-mean GP prior with the
powered-exponential kernel (exponent 1 for the Ornstein-Uhlenbeck
process, 1.3 for the fractional process), optionally plus white
observation noise.  Sparse observation sets are uniform random index
subsets constrained to be at least ``min_gap`` grid steps apart.

All randomness flows through ``numpy.random.default_rng(seed)`` (PCG64);
identical arguments always reproduce identical output.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InfeasibleSparsity
from .gpr import cholesky_psd
from .kernels import KernelParams, kernel_matrix, validate_params
from .series import Observations, TimeGrid, TimeSeries, make_grid

__all__ = [
    "TimeGrid",
    "TimeSeries",
    "Observations",
    "make_grid",
    "sample_gp_prior",
    "sparsify",
]

MAX_PROPOSALS = 1_000_000
_PROPOSAL_BATCH = 512


def sample_gp_prior(params: KernelParams, grid: TimeGrid, noise_sd: float,
                    seed: int, count: int = 1) -> list[TimeSeries]:
    """Draw ``count`` series from the GP prior on ``grid``.

    Each draw is L @ z + noise_sd * eps, with L the (jittered) Cholesky
    factor of the kernel matrix over the grid times and z, eps
    independent standard-normal vectors.
    """
    validate_params(params)
    if params.dim != 1:
        raise DomainError(f"prior sampling is univariate, got dim {params.dim}")
    if noise_sd < 0 or not np.isfinite(noise_sd):
        raise DomainError(f"noise_sd must be >= 0, got {noise_sd}")
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    t = grid.times()
    chol, _ = cholesky_psd(kernel_matrix(params, t, t))
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(count):
        z = rng.standard_normal(grid.n)
        eps = rng.standard_normal(grid.n)
        draws.append(TimeSeries(grid, chol @ z + noise_sd * eps))
    return draws


def sparsify(series: TimeSeries, fraction: float, min_gap: int, seed: int,
             max_proposals: int = MAX_PROPOSALS) -> Observations:
    """Sparse observation subset with a minimum index gap.

    The target count is round-half-up of ``fraction * n``.  Index sets
    are drawn by rejection: propose uniform random subsets of the grid
    and keep the first whose consecutive gaps are all >= ``min_gap``,
    which makes the accepted set uniform over all valid sets.  Proposals
    are evaluated in vectorized batches; after ``max_proposals`` of them
    the constraint is declared infeasible.
    """
    if not 0 < fraction < 1:
        raise DomainError(f"fraction must be in (0, 1), got {fraction}")
    if min_gap < 1:
        raise DomainError(f"min_gap must be >= 1, got {min_gap}")
    n = series.grid.n
    m = math.floor(fraction * n + 0.5)
    if m < 2:
        raise DomainError(f"fraction {fraction} of {n} points keeps only {m}, need >= 2")
    if (m - 1) * min_gap > n - 1:
        raise InfeasibleSparsity(
            f"{m} observations at least {min_gap} steps apart do not fit in {n} slots"
        )

    rng = np.random.default_rng(seed)
    proposed = 0
    while proposed < max_proposals:
        batch = min(_PROPOSAL_BATCH, max_proposals - proposed)
        keys = rng.random((batch, n))
        idx = np.argpartition(keys, m - 1, axis=1)[:, :m]
        idx.sort(axis=1)
        ok = np.all(np.diff(idx, axis=1) >= min_gap, axis=1)
        proposed += batch
        hits = np.flatnonzero(ok)
        if hits.size:
            sel = idx[hits[0]]
            return Observations(sel, series.grid.times()[sel], series.values[sel])
    raise InfeasibleSparsity(
        f"no index set satisfied the gap constraint within {max_proposals} proposals"
    )
