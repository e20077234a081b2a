"""Gaussian-process regression on sparse observations.

Fitting solves (K + noise2*I) w = y through a Cholesky factor; prediction
is then

    mean(t*)  = K(t*, t) w
    cov(t*)   = K(t*, t*) - V^T V,   V = L^{-1} K(t, t*)

with L the lower factor of K + noise2*I.  No matrix is ever inverted
explicitly.  Near-singular covariances are repaired by escalating
diagonal jitter, from 1e-10 up to 1e-4 by factors of 10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import AsymmetryError, CholeskyFailure, DomainError, EmptyObservations
from .kernels import KernelParams, kernel_matrix, validate_params
from .series import Observations

__all__ = [
    "GPPosterior",
    "cholesky_psd",
    "fit",
    "predict_mean",
    "predict_cov",
    "predict_var",
    "sample_posterior",
]

JITTER_START = 1e-10
JITTER_MAX = 1e-4
JITTER_FACTOR = 10.0


def cholesky_psd(matrix: np.ndarray, jitter_start: float = JITTER_START,
                 jitter_max: float = JITTER_MAX) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of a symmetric PSD matrix, with jitter escalation.

    Tries the bare factorization first, then adds jitter*I with jitter
    escalating geometrically from ``jitter_start`` to ``jitter_max``.
    Returns ``(L, applied_jitter)`` with L @ L.T == matrix + jitter*I.

    Raises :class:`AsymmetryError` if the input is not symmetric within
    1e-10 (relative to its largest entry), and :class:`CholeskyFailure`
    if every jitter level fails.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros((0, 0)), 0.0
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > 1e-10 * scale:
        raise AsymmetryError("matrix is not symmetric within 1e-10")

    jitter = 0.0
    while True:
        try:
            if jitter == 0.0:
                attempt = a
            else:
                attempt = a + jitter * np.eye(n)
            return np.linalg.cholesky(attempt), jitter
        except np.linalg.LinAlgError:
            if jitter == 0.0:
                jitter = jitter_start
            elif jitter * JITTER_FACTOR <= jitter_max * (1 + 1e-12):
                jitter *= JITTER_FACTOR
            else:
                raise CholeskyFailure(
                    f"factorization failed with jitter up to {jitter:g}"
                ) from None


@dataclass(frozen=True)
class GPPosterior:
    """Fitted GP state: training data plus the factor and weights.

    ``chol`` is the lower Cholesky factor of K(t, t) + noise2*I (plus any
    jitter applied), and ``weights`` solves (K + noise2*I) w = y, so
    prediction never re-factorizes.  Immutable; safe to share across
    threads.
    """

    params: KernelParams
    noise2: float
    train_times: np.ndarray
    train_values: np.ndarray
    chol: np.ndarray
    weights: np.ndarray
    jitter: float = 0.0

    @classmethod
    def prior(cls, params: KernelParams, noise2: float = 0.0) -> "GPPosterior":
        """The no-data limit: predictions revert to the zero-mean prior."""
        validate_params(params)
        empty = np.zeros(0)
        return cls(params, float(noise2), empty, empty, np.zeros((0, 0)), empty)

    def __len__(self) -> int:
        return len(self.train_times)


def fit(obs: Observations, params: KernelParams, noise2: float = 0.0) -> GPPosterior:
    """Fit the GP on sparse observations.

    ``noise2`` is the observation-noise variance added to the kernel
    diagonal; zero gives exact interpolation (numerically stabilized by
    jitter only if needed).  Cost is O(m^3) in the observation count.
    """
    validate_params(params)
    if noise2 < 0 or not np.isfinite(noise2):
        raise DomainError(f"noise2 must be >= 0, got {noise2}")
    m = len(obs)
    if m == 0:
        raise EmptyObservations("cannot fit on zero observations; use GPPosterior.prior")
    t = np.asarray(obs.times, dtype=float)
    y = np.asarray(obs.values, dtype=float)
    k = kernel_matrix(params, t, t) + noise2 * np.eye(m)
    chol, jitter = cholesky_psd(k)
    w = solve_triangular(chol, y, lower=True)
    w = solve_triangular(chol.T, w, lower=False)
    return GPPosterior(params, float(noise2), t, y, chol, w, jitter)


def predict_mean(model: GPPosterior, times) -> np.ndarray:
    """Posterior mean at the query times (zero-mean prior far from data)."""
    q = np.atleast_1d(np.asarray(times, dtype=float))
    if len(model) == 0:
        return np.zeros(q.shape[0])
    k_cross = kernel_matrix(model.params, q, model.train_times)
    mean = k_cross @ model.weights
    if not np.all(np.isfinite(mean)):
        raise DomainError("posterior mean is not finite")
    return mean


def predict_cov(model: GPPosterior, times) -> np.ndarray:
    """Posterior covariance matrix at the query times.

    The result is symmetrized; tiny negative diagonal entries from
    roundoff are left in place (use :func:`predict_var` for reporting).
    """
    q = np.atleast_1d(np.asarray(times, dtype=float))
    k_query = kernel_matrix(model.params, q, q)
    if len(model) == 0:
        return k_query
    k_cross = kernel_matrix(model.params, model.train_times, q)
    v = solve_triangular(model.chol, k_cross, lower=True)
    cov = k_query - v.T @ v
    return 0.5 * (cov + cov.T)


def predict_var(model: GPPosterior, times) -> np.ndarray:
    """Posterior variance at the query times, clamped at zero for reporting."""
    var = np.diag(predict_cov(model, times)).copy()
    return np.maximum(var, 0.0)


def sample_posterior(model: GPPosterior, times, count: int, seed: int) -> np.ndarray:
    """Draw posterior sample paths at the query times.

    Returns a ``(count, len(times))`` array, one path per row; the same
    seed always reproduces the same paths.  Paths at noise-free training
    points collapse onto the training values up to the jitter floor.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    q = np.atleast_1d(np.asarray(times, dtype=float))
    mean = predict_mean(model, q)
    cov = predict_cov(model, q)
    l_cov, _ = cholesky_psd(cov)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, q.shape[0]))
    return mean[None, :] + z @ l_cov.T
