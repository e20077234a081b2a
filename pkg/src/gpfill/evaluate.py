"""Forecast-based scoring of reconstructed series.

Accuracy is judged by how well a small autoregressive model, trained
only on the reconstruction up to just before each held observation,
predicts that observation.  The per-point absolute percentage errors
(with a guarded denominator) average to the reported score.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arima import ArimaFit, ArimaOrder, fit_ar_yule_walker, fit_arima_css, forecast
from .errors import (DomainError, LengthMismatch, NoEvaluablePoints,
                     NonFiniteObjective, OptimizerFailure, SeriesTooShort,
                     SingularToeplitz)
from .optim import NelderMeadOptions
from .series import Observations, TimeSeries

__all__ = ["SecondaryModelSpec", "PointScore", "SkippedPoint", "EvalReport",
           "mape", "mape_ar", "DEFAULT_EPSILON"]

DEFAULT_EPSILON = 1e-8


@dataclass(frozen=True)
class SecondaryModelSpec:
    """The forecasting model refit at every evaluation point.

    kind "ar" uses Yule-Walker AR(p); kind "sarima" uses the full
    conditional-sum-of-squares fit for the stored order.
    """

    kind: str
    order: ArimaOrder

    def __post_init__(self):
        if self.kind not in ("ar", "sarima"):
            raise DomainError(f"secondary model kind must be 'ar' or 'sarima', got {self.kind!r}")
        if self.kind == "ar":
            o = self.order
            if o.p < 1 or (o.d or o.q or o.P or o.D or o.Q):
                raise DomainError(
                    f"kind 'ar' requires a pure AR(p) order with p >= 1, got {o.label()}")

    @classmethod
    def pure_ar(cls, p: int) -> "SecondaryModelSpec":
        return cls(kind="ar", order=ArimaOrder.pure_ar(p))

    @classmethod
    def seasonal(cls, p, d, q, P=0, D=0, Q=0, s=1) -> "SecondaryModelSpec":
        return cls(kind="sarima", order=ArimaOrder(p=p, d=d, q=q, P=P, D=D, Q=Q, s=s))

    def label(self) -> str:
        if self.kind == "ar":
            return f"ar:{self.order.p}"
        o = self.order
        return f"sarima:{o.p},{o.d},{o.q},{o.P},{o.D},{o.Q},{o.s}"


@dataclass(frozen=True)
class PointScore:
    """Score for one held observation (k is its 1-based position)."""

    k: int
    index: int
    time: float
    actual: float
    predicted: float
    ape: float
    fallback_used: bool
    eps_guarded: bool


@dataclass(frozen=True)
class SkippedPoint:
    k: int
    reason: str


@dataclass(frozen=True)
class EvalReport:
    horizon: int
    per_point: tuple
    skipped: tuple
    mape_ar: float
    n_fallback: int
    config: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.per_point)


def _percentage_terms(actual, predicted, epsilon, signed):
    """Per-point (A)PE terms with the small-denominator guard applied."""
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    guard = np.abs(a) < epsilon
    denom = np.maximum(np.abs(a), epsilon)
    if signed:
        sign = np.where(a < 0.0, -1.0, 1.0)
        terms = (a - p) / (sign * denom)
    else:
        terms = np.abs(a - p) / denom
    return terms, guard


def mape(actual, predicted, epsilon: float = DEFAULT_EPSILON, signed: bool = False) -> float:
    """Mean (absolute) percentage error with |actual| floored at epsilon.

    With signed=True the unsquared relative errors are averaged instead,
    so over- and under-prediction can cancel.
    """
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise LengthMismatch(f"actual has shape {a.shape}, predicted has shape {p.shape}")
    if a.size == 0:
        raise LengthMismatch("need at least one point")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    terms, _ = _percentage_terms(a, p, epsilon, signed)
    return float(np.mean(terms))


def _fit_and_forecast(prefix, spec: SecondaryModelSpec, horizon: int,
                      opts: NelderMeadOptions | None) -> float:
    if spec.kind == "ar":
        fit = fit_ar_yule_walker(prefix, spec.order.p)
    else:
        fit = fit_arima_css(prefix, spec.order, opts)
    value = float(forecast(fit, horizon)[horizon - 1])
    if not np.isfinite(value):
        raise OptimizerFailure(f"forecast is not finite ({value})")
    return value


def mape_ar(reconstruction: TimeSeries, obs: Observations, horizon: int = 1,
            spec: SecondaryModelSpec | None = None,
            epsilon: float = DEFAULT_EPSILON, signed: bool = False,
            opts: NelderMeadOptions | None = None) -> EvalReport:
    """Rolling one-model-per-point forecast evaluation of a reconstruction.

    For each observed point after the first, the secondary model is fit
    on the reconstruction truncated ``horizon`` grid steps before that
    point's index, asked for an ``horizon``-step forecast, and the
    forecast is compared against the actually observed value.  Points
    whose truncation would reach before the grid start are skipped; fit
    failures fall back to repeating the last reconstructed value.
    """
    spec = spec or SecondaryModelSpec.pure_ar(2)
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if len(obs) < 2:
        raise NoEvaluablePoints(f"need at least two observed points, got {len(obs)}")
    n = reconstruction.grid.n
    if obs.indices[-1] >= n:
        raise DomainError(
            f"observation index {obs.indices[-1]} lies beyond the grid (n={n})")

    values = reconstruction.values
    scores = []
    skipped = []
    actuals = []
    preds = []
    n_fallback = 0
    for pos in range(1, len(obs)):
        k = pos + 1
        j = int(obs.indices[pos])
        cutoff = j - horizon
        if cutoff < 0:
            skipped.append(SkippedPoint(k=k, reason=f"index {j} is under the horizon {horizon}"))
            continue
        prefix = values[:cutoff + 1]
        fallback = False
        try:
            pred = _fit_and_forecast(prefix, spec, horizon, opts)
        except (SeriesTooShort, SingularToeplitz, OptimizerFailure, NonFiniteObjective):
            pred = float(prefix[-1])
            fallback = True
            n_fallback += 1
        actual = float(obs.values[pos])
        term, guard = _percentage_terms(actual, pred, epsilon, signed)
        scores.append(PointScore(k=k, index=j, time=float(obs.times[pos]),
                                 actual=actual, predicted=pred, ape=float(term),
                                 fallback_used=fallback, eps_guarded=bool(guard)))
        actuals.append(actual)
        preds.append(pred)
    if not scores:
        raise NoEvaluablePoints(
            f"no observed point is reachable with horizon {horizon}")
    score = mape(np.array(actuals), np.array(preds), epsilon, signed)
    return EvalReport(horizon=horizon, per_point=tuple(scores), skipped=tuple(skipped),
                      mape_ar=score, n_fallback=n_fallback,
                      config={"secondary": spec.label(), "horizon": horizon,
                              "epsilon": epsilon, "signed": signed})
