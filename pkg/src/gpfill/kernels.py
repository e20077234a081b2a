"""Powered-exponential covariance kernel.

The kernel family implemented here is

    k(a, b) = sigma2 * exp(-beta * sum_k (|a_k - b_k| / l_k) ** alpha_k)

with one length scale ``l_k`` and one exponent ``alpha_k`` per input
dimension.  ``alpha = 1`` gives the exponential (Ornstein-Uhlenbeck)
kernel, ``alpha = 2`` the squared exponential; the family is positive
semidefinite only for alpha in (0, 2], which :func:`validate_params`
enforces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError

__all__ = ["KernelParams", "validate_params", "kernel_value", "kernel_matrix"]


def _as_float_tuple(x) -> tuple[float, ...]:
    if np.isscalar(x):
        return (float(x),)
    return tuple(float(v) for v in x)


@dataclass(frozen=True)
class KernelParams:
    """Hyperparameters of the powered-exponential kernel.

    Attributes
    ----------
    sigma2 : signal variance, > 0
    beta : scaling factor inside the exponent, > 0
    lengthscales : per-dimension length scale, each > 0
    exponents : per-dimension roughness, each in (0, 2]

    Scalar ``lengthscales``/``exponents`` are promoted to 1-dimensional
    tuples, so ``KernelParams(1.0, 1.0, 2.0, 1.0)`` is the usual
    time-only parameterization.
    """

    sigma2: float
    beta: float
    lengthscales: tuple[float, ...] = field(default=(1.0,))
    exponents: tuple[float, ...] = field(default=(1.0,))

    def __post_init__(self):
        object.__setattr__(self, "sigma2", float(self.sigma2))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "lengthscales", _as_float_tuple(self.lengthscales))
        object.__setattr__(self, "exponents", _as_float_tuple(self.exponents))

    @property
    def dim(self) -> int:
        return len(self.lengthscales)


def validate_params(params: KernelParams) -> KernelParams:
    """Check all hyperparameter bounds, returning ``params`` unchanged.

    Raises :class:`DomainError` naming the offending field.  Exponents
    outside (0, 2] are rejected because the kernel matrix is no longer
    positive semidefinite there.
    """
    if not np.isfinite(params.sigma2) or params.sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {params.sigma2}")
    if not np.isfinite(params.beta) or params.beta <= 0:
        raise DomainError(f"beta must be > 0, got {params.beta}")
    if len(params.lengthscales) != len(params.exponents):
        raise DomainError(
            "lengthscales and exponents must have equal length, got "
            f"{len(params.lengthscales)} and {len(params.exponents)}"
        )
    if len(params.lengthscales) < 1:
        raise DomainError("at least one dimension is required")
    for i, l in enumerate(params.lengthscales):
        if not np.isfinite(l) or l <= 0:
            raise DomainError(f"lengthscales[{i}] must be > 0, got {l}")
    for i, a in enumerate(params.exponents):
        if not np.isfinite(a) or not 0 < a <= 2:
            raise DomainError(f"exponents[{i}] must be in (0, 2], got {a}")
    return params


def _as_points(points, dim: int) -> np.ndarray:
    """Coerce scalars, vectors, or (n, d) arrays into an (n, d) float array."""
    arr = np.atleast_1d(np.asarray(points, dtype=float))
    if arr.ndim == 1:
        if dim == 1:
            arr = arr[:, None]
        elif arr.shape[0] == dim:
            arr = arr[None, :]
        else:
            raise DimensionMismatch(
                f"cannot interpret shape {arr.shape} as points of dimension {dim}"
            )
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionMismatch(
            f"expected points of dimension {dim}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


def _powered_exp(params: KernelParams, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    # Per-dimension accumulation keeps the summation order identical to a
    # scalar evaluation, so matrix entries match kernel_value bit for bit.
    s = np.zeros((rows.shape[0], cols.shape[0]))
    for k in range(params.dim):
        r = np.abs(rows[:, k, None] - cols[None, :, k]) / params.lengthscales[k]
        s += r ** params.exponents[k]
    return params.sigma2 * np.exp(-params.beta * s)


def kernel_value(params: KernelParams, a, b) -> float:
    """Evaluate the kernel between two points.

    ``a`` and ``b`` are scalars (time-only kernels) or length-d vectors.
    The result lies in (0, sigma2], reaching sigma2 exactly when a == b.
    """
    validate_params(params)
    ar = _as_points(a, params.dim)
    br = _as_points(b, params.dim)
    if ar.shape[0] != 1 or br.shape[0] != 1:
        raise DimensionMismatch("kernel_value expects single points; use kernel_matrix")
    return float(_powered_exp(params, ar, br)[0, 0])


def kernel_matrix(params: KernelParams, rows, cols) -> np.ndarray:
    """Dense kernel matrix between two point sets.

    ``rows`` and ``cols`` are (n, d) arrays, or plain 1-d arrays when the
    kernel is one-dimensional.  Entry (i, j) equals
    ``kernel_value(params, rows[i], cols[j])``.
    """
    validate_params(params)
    r = _as_points(rows, params.dim)
    c = _as_points(cols, params.dim)
    return _powered_exp(params, r, c)
