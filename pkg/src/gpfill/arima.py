"""Seasonal ARIMA fitting by conditional sum of squares, plus Yule-Walker AR.

The model for the differenced series w_t is

    phi(B) Phi(B^s) w_t = c + theta(B) Theta(B^s) eps_t

with phi(B) = 1 - phi_1 B - ... - phi_p B^p and theta(B) = 1 + theta_1 B
+ ... + theta_q B^q (seasonal factors analogous in B^s).  Residuals are
computed by the conditional recursion with the first p + s*P entries
pinned to zero, and the CSS objective adds a soft penalty that pushes
every AR and seasonal-AR root outside the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import lfilter

from .errors import (DomainError, LengthMismatch, OptimizerFailure, SeriesTooShort,
                     SingularToeplitz, StateMismatch)
from .optim import NelderMeadOptions, nelder_mead

__all__ = [
    "ArimaOrder", "DifferenceState", "ArimaFit",
    "difference", "undifference", "undifference_full",
    "fit_ar_yule_walker", "solve_yule_walker", "fit_arima_css",
    "css_residuals", "forecast",
    "NelderMeadOptions", "nelder_mead",
]

ROOT_MARGIN = 1.001
ROOT_PENALTY = 1e6


@dataclass(frozen=True)
class ArimaOrder:
    """(p, d, q) x (P, D, Q)_s order tuple."""

    p: int = 0
    d: int = 0
    q: int = 0
    P: int = 0
    D: int = 0
    Q: int = 0
    s: int = 1

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise DomainError(f"order component {name} must be a nonnegative integer, got {v!r}")
        if not isinstance(self.s, (int, np.integer)) or self.s < 1:
            raise DomainError(f"seasonal period s must be a positive integer, got {self.s!r}")
        if (self.P or self.D or self.Q) and self.s < 2:
            raise DomainError(
                f"seasonal terms (P={self.P}, D={self.D}, Q={self.Q}) require period s >= 2, got s={self.s}")

    @classmethod
    def pure_ar(cls, p: int) -> "ArimaOrder":
        return cls(p=p)

    @property
    def n_coeffs(self) -> int:
        return self.p + self.q + self.P + self.Q

    @property
    def has_intercept(self) -> bool:
        """Intercept is only identified when no differencing is applied."""
        return self.d + self.D == 0

    def label(self) -> str:
        base = f"({self.p},{self.d},{self.q})"
        if self.P or self.D or self.Q:
            return base + f"({self.P},{self.D},{self.Q})[{self.s}]"
        return base


@dataclass(frozen=True)
class DifferenceState:
    """Boundary values saved while differencing, enough to invert it.

    Regular differences are applied first, then seasonal ones.  For each
    regular stage the first and last value of the series entering that
    stage are kept; for each seasonal stage the first s and last s.
    """

    d: int
    D: int
    s: int
    heads_regular: tuple
    tails_regular: tuple
    heads_seasonal: tuple
    tails_seasonal: tuple
    diffed_length: int


def difference(values, d: int, D: int = 0, s: int = 1):
    """Apply (1-B)^d (1-B^s)^D; returns (differenced array, DifferenceState)."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise DomainError(f"values must be one-dimensional, got shape {x.shape}")
    if d < 0 or D < 0 or s < 1:
        raise DomainError(f"invalid differencing orders d={d}, D={D}, s={s}")
    if x.size <= d + s * D:
        raise SeriesTooShort(
            f"need more than d + s*D = {d + s * D} points to difference, got {x.size}")

    heads_r, tails_r = [], []
    for _ in range(d):
        heads_r.append(float(x[0]))
        tails_r.append(float(x[-1]))
        x = x[1:] - x[:-1]
    heads_s, tails_s = [], []
    for _ in range(D):
        heads_s.append(tuple(float(v) for v in x[:s]))
        tails_s.append(tuple(float(v) for v in x[-s:]))
        x = x[s:] - x[:-s]
    state = DifferenceState(d=d, D=D, s=s,
                            heads_regular=tuple(heads_r),
                            tails_regular=tuple(tails_r),
                            heads_seasonal=tuple(heads_s),
                            tails_seasonal=tuple(tails_s),
                            diffed_length=int(x.size))
    return x.copy(), state


def undifference(forecasts, state: DifferenceState) -> np.ndarray:
    """Invert differencing for values that continue past the original series.

    ``forecasts`` are h steps of the fully differenced process following
    the series the state was built from; the result is the corresponding
    h steps on the original scale.
    """
    w = np.asarray(forecasts, dtype=float)
    if w.ndim != 1:
        raise DomainError(f"forecasts must be one-dimensional, got shape {w.shape}")
    h = w.size
    # Seasonal stages were applied last, so they are inverted first:
    # x_t = w_t + x_{t-s}, seeded by the last s values of the stage input.
    for level in range(state.D - 1, -1, -1):
        buf = list(state.tails_seasonal[level])
        for i in range(h):
            buf.append(w[i] + buf[-state.s])
        w = np.array(buf[state.s:])
    for level in range(state.d - 1, -1, -1):
        prev = state.tails_regular[level]
        out = np.empty(h)
        acc = prev
        for i in range(h):
            acc = acc + w[i]
            out[i] = acc
        w = out
    return w


def undifference_full(diffed, state: DifferenceState) -> np.ndarray:
    """Reconstruct the original series from its differences and the state."""
    w = np.asarray(diffed, dtype=float)
    if w.ndim != 1:
        raise DomainError(f"diffed must be one-dimensional, got shape {w.shape}")
    if w.size != state.diffed_length:
        raise StateMismatch(
            f"state was built from a series whose differences had length "
            f"{state.diffed_length}, got {w.size}")
    for level in range(state.D - 1, -1, -1):
        head = state.heads_seasonal[level]
        buf = list(head)
        for i in range(w.size):
            buf.append(w[i] + buf[i])
        w = np.array(buf)
    for level in range(state.d - 1, -1, -1):
        head = state.heads_regular[level]
        w = np.concatenate(([head], head + np.cumsum(w)))
    return w


def _identity_state(n: int) -> DifferenceState:
    return DifferenceState(d=0, D=0, s=1, heads_regular=(), tails_regular=(),
                           heads_seasonal=(), tails_seasonal=(), diffed_length=n)


@dataclass(frozen=True)
class ArimaFit:
    """Fitted model: coefficients plus the tail state needed to forecast."""

    order: ArimaOrder
    ar: np.ndarray
    ma: np.ndarray
    sar: np.ndarray
    sma: np.ndarray
    intercept: float
    sigma2_resid: float
    diff_state: DifferenceState
    w_tail: np.ndarray = field(repr=False)
    resid_tail: np.ndarray = field(repr=False)


def _expand_ar(ar, sar, s: int) -> np.ndarray:
    """Coefficients of phi(B) Phi(B^s) as a polynomial in B, constant first."""
    a = np.zeros(len(ar) + 1)
    a[0] = 1.0
    a[1:] = -np.asarray(ar, dtype=float)
    b = np.zeros(s * len(sar) + 1)
    b[0] = 1.0
    for j, coef in enumerate(sar, start=1):
        b[s * j] = -coef
    return np.convolve(a, b)


def _expand_ma(ma, sma, s: int) -> np.ndarray:
    """Coefficients of theta(B) Theta(B^s), constant first."""
    a = np.zeros(len(ma) + 1)
    a[0] = 1.0
    a[1:] = np.asarray(ma, dtype=float)
    b = np.zeros(s * len(sma) + 1)
    b[0] = 1.0
    for j, coef in enumerate(sma, start=1):
        b[s * j] = coef
    return np.convolve(a, b)


def _min_root_modulus(coeff_sets) -> float:
    """Smallest root modulus over the given lag polynomials (constant-first).

    Polynomials with no nonzero lag coefficients contribute nothing.
    Returns inf when every polynomial is trivial.
    """
    smallest = np.inf
    for coeffs in coeff_sets:
        c = np.asarray(coeffs, dtype=float)
        if c.size < 2 or not np.any(c[1:]):
            continue
        roots = np.roots(c[::-1])
        if roots.size:
            smallest = min(smallest, float(np.min(np.abs(roots))))
    return smallest


def css_residuals(w, order: ArimaOrder, ar, ma, sar, sma, intercept: float) -> np.ndarray:
    """Conditional residuals of the differenced series under the given coefficients.

    Entries before p + s*P are zero: the recursion starts once a full set
    of AR lags is available, and earlier shocks are taken as zero.
    """
    w = np.asarray(w, dtype=float)
    if len(ar) != order.p or len(ma) != order.q or len(sar) != order.P or len(sma) != order.Q:
        raise LengthMismatch(
            f"coefficient lengths ({len(ar)},{len(ma)},{len(sar)},{len(sma)}) do not match "
            f"order {order.label()}")
    arpoly = _expand_ar(ar, sar, order.s)
    mapoly = _expand_ma(ma, sma, order.s)
    burn = len(arpoly) - 1
    if w.size <= burn:
        raise SeriesTooShort(f"need more than {burn} differenced points, got {w.size}")
    rhs = np.convolve(arpoly, w)[:w.size] - intercept
    rhs[:burn] = 0.0
    if mapoly.size > 1:
        eps = lfilter([1.0], mapoly, rhs)
    else:
        eps = rhs
    return eps


def solve_yule_walker(autocov, p: int) -> tuple[np.ndarray, float]:
    """Solve the order-p Yule-Walker system from autocovariances gamma_0..gamma_p.

    Returns (phi, sigma2) where sigma2 = gamma_0 - phi . gamma_{1..p}.
    """
    gam = np.asarray(autocov, dtype=float)
    if p < 1:
        raise DomainError(f"autoregressive order must be >= 1, got {p}")
    if gam.size < p + 1:
        raise LengthMismatch(f"need autocovariances up to lag {p}, got {gam.size - 1}")
    R = toeplitz(gam[:p])
    r = gam[1:p + 1]
    try:
        phi = np.linalg.solve(R, r)
    except np.linalg.LinAlgError as exc:
        raise SingularToeplitz(f"Yule-Walker system is singular: {exc}") from exc
    if not np.all(np.isfinite(phi)):
        raise SingularToeplitz("Yule-Walker solution is not finite")
    sigma2 = float(gam[0] - phi @ r)
    return phi, sigma2


def fit_ar_yule_walker(values, p: int) -> ArimaFit:
    """Fit a stationary AR(p) by the Yule-Walker equations.

    Autocovariances use the biased 1/n normalization on the mean-centered
    series, which keeps the autocovariance matrix positive definite.  The
    intercept is mu * (1 - sum(phi)).
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise DomainError(f"values must be one-dimensional, got shape {x.shape}")
    if p < 1:
        raise DomainError(f"autoregressive order must be >= 1, got {p}")
    n = x.size
    if n <= 10 * p:
        raise SeriesTooShort(f"need more than {10 * p} points for AR({p}), got {n}")
    if not np.all(np.isfinite(x)):
        raise DomainError("values must be finite")

    mu = float(np.mean(x))
    centered = x - mu
    gam = np.empty(p + 1)
    for k in range(p + 1):
        gam[k] = np.dot(centered[:n - k], centered[k:]) / n
    scale = float(np.mean(x * x))
    if gam[0] <= np.finfo(float).eps * scale:
        raise SingularToeplitz(
            f"series is constant or nearly so (lag-0 autocovariance {gam[0]:.3e})")
    phi, sigma2 = solve_yule_walker(gam, p)
    intercept = mu * (1.0 - float(np.sum(phi)))
    return ArimaFit(order=ArimaOrder.pure_ar(p),
                    ar=phi, ma=np.empty(0), sar=np.empty(0), sma=np.empty(0),
                    intercept=intercept, sigma2_resid=max(sigma2, 0.0),
                    diff_state=_identity_state(n),
                    w_tail=x[n - p:].copy(), resid_tail=np.empty(0))


def _unpack(vec, order: ArimaOrder):
    p, q, P, Q = order.p, order.q, order.P, order.Q
    i = 0
    ar = vec[i:i + p]; i += p
    sar = vec[i:i + P]; i += P
    ma = vec[i:i + q]; i += q
    sma = vec[i:i + Q]; i += Q
    c = float(vec[i]) if order.has_intercept else 0.0
    return ar, ma, sar, sma, c


def fit_arima_css(values, order: ArimaOrder,
                  opts: NelderMeadOptions | None = None) -> ArimaFit:
    """Fit a seasonal ARIMA by minimizing the conditional sum of squares.

    The objective is sum of squared conditional residuals plus
    ROOT_PENALTY * max(0, ROOT_MARGIN - m)^2 where m is the smallest root
    modulus over the four lag polynomials, so estimates are pushed inside
    the stationary/invertible region without hard bounds.  The intercept
    is a free parameter only when d + D = 0.  Optimization starts from
    zero coefficients and never returns a worse point than the start.
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise DomainError(f"values must be one-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("values must be finite")
    w, state = difference(x, order.d, order.D, order.s)
    nw = w.size
    k = order.n_coeffs
    min_len = max(order.p + order.s * order.P + order.q + order.s * order.Q + 1,
                  8 * k, 2 * order.s)
    if nw <= min_len:
        raise SeriesTooShort(
            f"need more than {min_len} points after differencing for "
            f"{order.label()}, got {nw}")

    n_free = k + (1 if order.has_intercept else 0)
    if n_free == 0:
        eps = css_residuals(w, order, (), (), (), (), 0.0)
        sigma2 = float(np.sum(eps * eps)) / nw
        empty = np.empty(0)
        return _finalize_fit(order, empty, empty, empty, empty, 0.0, state, w, eps, sigma2)

    def objective(vec):
        ar, ma, sar, sma, c = _unpack(vec, order)
        polys = (_expand_ar(ar, (), 1), _expand_ar((), sar, order.s),
                 _expand_ma(ma, (), 1), _expand_ma((), sma, order.s))
        # AR roots get the hard penalty; also penalize MA roots so the
        # shock recursion stays numerically bounded.
        modulus = _min_root_modulus(polys)
        penalty = ROOT_PENALTY * max(0.0, ROOT_MARGIN - modulus) ** 2
        with np.errstate(over="ignore", invalid="ignore"):
            eps = css_residuals(w, order, ar, ma, sar, sma, c)
            css = float(np.sum(eps * eps))
        if np.isnan(css):
            return np.inf
        return css + penalty

    start = np.zeros(n_free)
    if order.has_intercept:
        start[-1] = float(np.mean(w))
    best, fbest = nelder_mead(objective, start, opts or NelderMeadOptions(max_iters=2000))
    if not np.isfinite(fbest):
        raise OptimizerFailure(f"CSS objective non-finite at optimum for {order.label()}")
    ar, ma, sar, sma, c = _unpack(best, order)
    eps = css_residuals(w, order, ar, ma, sar, sma, c)
    burn = order.p + order.s * order.P
    denom = max(nw - burn, 1)
    sigma2 = float(np.sum(eps * eps)) / denom
    return _finalize_fit(order, ar, ma, sar, sma, c, state, w, eps, sigma2)


def _finalize_fit(order, ar, ma, sar, sma, c, state, w, eps, sigma2) -> ArimaFit:
    la = order.p + order.s * order.P
    lm = order.q + order.s * order.Q
    return ArimaFit(order=order,
                    ar=np.asarray(ar, dtype=float).copy(),
                    ma=np.asarray(ma, dtype=float).copy(),
                    sar=np.asarray(sar, dtype=float).copy(),
                    sma=np.asarray(sma, dtype=float).copy(),
                    intercept=float(c), sigma2_resid=sigma2,
                    diff_state=state,
                    w_tail=w[w.size - la:].copy() if la else np.empty(0),
                    resid_tail=eps[eps.size - lm:].copy() if lm else np.empty(0))


def forecast(fit: ArimaFit, h: int) -> np.ndarray:
    """h-step-ahead forecasts on the original scale of the fitted series.

    Future shocks are set to zero; the recursion runs on the differenced
    scale and the result is then integrated back through the stored
    differencing state.
    """
    if h < 1:
        raise DomainError(f"horizon must be >= 1, got {h}")
    arpoly = _expand_ar(fit.ar, fit.sar, fit.order.s)
    mapoly = _expand_ma(fit.ma, fit.sma, fit.order.s)
    la = arpoly.size - 1
    lm = mapoly.size - 1
    wbuf = np.concatenate([fit.w_tail, np.zeros(h)])
    ebuf = np.concatenate([fit.resid_tail, np.zeros(h)])
    out = np.empty(h)
    for i in range(h):
        t = la + i
        val = fit.intercept
        for j in range(1, la + 1):
            val -= arpoly[j] * wbuf[t - j]
        te = lm + i
        for j in range(1, lm + 1):
            val += mapoly[j] * ebuf[te - j]
        wbuf[t] = val
        out[i] = val
    return undifference(out, fit.diff_state)
