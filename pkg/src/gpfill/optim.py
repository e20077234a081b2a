"""Nelder-Mead simplex minimizer.

Plain reflect/expand/contract/shrink with the standard coefficients
(1, 2, 1/2, 1/2).  The best vertex is never discarded, so the returned
point is always at least as good as the starting point.  Infinite
objective values are allowed (they sort as worst); NaN aborts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NonFiniteObjective

__all__ = ["NelderMeadOptions", "nelder_mead"]


@dataclass(frozen=True)
class NelderMeadOptions:
    """Termination controls: iteration cap, simplex diameter, value spread."""

    max_iters: int = 5000
    x_tol: float = 1e-8
    f_tol: float = 1e-12
    initial_step: float = 0.1


def _evaluate(objective: Callable, x: np.ndarray) -> float:
    value = float(objective(x))
    if math.isnan(value):
        raise NonFiniteObjective(f"objective is NaN at {x}")
    return value


def nelder_mead(objective: Callable[[np.ndarray], float], start,
                opts: NelderMeadOptions | None = None) -> tuple[np.ndarray, float]:
    """Minimize ``objective`` from ``start``; returns (argmin, minimum).

    Terminates when the simplex diameter is below ``x_tol`` and the
    best-to-worst value spread is below ``f_tol``, or after
    ``max_iters`` iterations.  Raises :class:`NonFiniteObjective` if
    the objective is not finite at the start.
    """
    opts = opts or NelderMeadOptions()
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    if x0.ndim != 1 or x0.size == 0:
        raise DomainError(f"start must be a nonempty vector, got shape {x0.shape}")
    f0 = _evaluate(objective, x0)
    if not math.isfinite(f0):
        raise NonFiniteObjective(f"objective must be finite at the start, got {f0}")

    k = x0.size
    verts = np.tile(x0, (k + 1, 1))
    for i in range(k):
        verts[i + 1, i] += opts.initial_step * max(1.0, abs(x0[i]))
    fvals = np.array([f0] + [_evaluate(objective, v) for v in verts[1:]])

    for _ in range(opts.max_iters):
        order = np.argsort(fvals, kind="stable")
        verts, fvals = verts[order], fvals[order]
        diameter = np.max(np.abs(verts[1:] - verts[0]))
        spread = fvals[-1] - fvals[0]
        # both must be tight: symmetric objectives can zero the value
        # spread while the simplex still straddles the minimum
        if diameter < opts.x_tol and spread < opts.f_tol:
            break

        centroid = verts[:-1].mean(axis=0)
        worst = verts[-1]
        reflected = centroid + (centroid - worst)
        f_r = _evaluate(objective, reflected)
        if f_r < fvals[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_e = _evaluate(objective, expanded)
            if f_e < f_r:
                verts[-1], fvals[-1] = expanded, f_e
            else:
                verts[-1], fvals[-1] = reflected, f_r
        elif f_r < fvals[-2]:
            verts[-1], fvals[-1] = reflected, f_r
        else:
            if f_r < fvals[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
                f_c = _evaluate(objective, contracted)
                accept = f_c <= f_r
            else:
                contracted = centroid - 0.5 * (centroid - worst)
                f_c = _evaluate(objective, contracted)
                accept = f_c < fvals[-1]
            if accept:
                verts[-1], fvals[-1] = contracted, f_c
            else:
                for i in range(1, k + 1):
                    verts[i] = verts[0] + 0.5 * (verts[i] - verts[0])
                    fvals[i] = _evaluate(objective, verts[i])

    best = int(np.argmin(fvals))
    return verts[best].copy(), float(fvals[best])
